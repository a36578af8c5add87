#pragma once

// Functional equations of the form
//
//   F(r) = e(r) + sum_{j in J} x * f_j(r) * F((q^{j_1} r_1)^{e(j_1)}, ...)
//
// where each j is an m-tuple of integers >= -1 and e(j) is 1 for j >= 0 and
// 0 for j = -1, together with three solvers: the sum over finite sequences,
// plain fixed-point iteration, and the closed form for the single-variable
// shape F(s) = x e(s) + x f(s) F(1) + x g(s) F(qs).

#include "mvfe/series.hpp"

#include <cstdint>
#include <vector>

namespace mvfe {

// One term of the equation: the tuple j and its coefficient f_j. The
// structural factor x is supplied by the solver, never folded into f.
struct StepSpec {
    std::vector<int> j;
    Series f;
};

class FunctionalEquation {
public:
    // Validates: x and q present (capped by VarTable's own invariant);
    // subst_vars distinct, uncapped, in the table, disjoint from {x, q};
    // e and all f over the same table; all j-tuples of length m with
    // entries >= -1, pairwise distinct.
    FunctionalEquation(VarTablePtr table, std::vector<std::string> subst_vars,
                       Series e, std::vector<StepSpec> steps);

    const VarTablePtr& table() const { return table_; }
    const std::vector<std::string>& subst_vars() const { return subst_vars_; }
    const Series& e() const { return e_; }
    const std::vector<StepSpec>& steps() const { return steps_; }
    // The x cap: sequences longer than this cannot contribute in cap.
    std::uint32_t x_cap() const { return x_cap_; }

private:
    VarTablePtr table_;
    std::vector<std::string> subst_vars_;
    Series e_;
    std::vector<StepSpec> steps_;
    std::uint32_t x_cap_;
};

// Per substitution variable i, the pending q-exponent a_i and the survival
// bit b_i (0 once a -1 has occurred in coordinate i). The initial state is
// a_i = 0, b_i = 1.
struct ExponentState {
    std::vector<std::uint64_t> a;
    std::vector<std::uint8_t> b;

    static ExponentState initial(std::size_t m);
    bool operator==(const ExponentState&) const = default;
};

// Coordinatewise: j_i = -1 sets (a_i, b_i) to (0, 0); otherwise a_i += j_i.
ExponentState update_state(const ExponentState& s, const std::vector<int>& j);

// f with each subst_vars[i] replaced by q^{a_i} * r_i^{b_i}.
Series apply_state(const Series& f, const ExponentState& s,
                   const std::vector<std::string>& subst_vars);

struct SolveOptions {
    unsigned threads = 1;
    // Skip subtrees whose running product is already the zero series. Never
    // changes the result; exposed so tests can check exactly that.
    bool prune = true;
};

// F = sum_{n >= 0} x^n sum_{J in J^n} e(state_{n+1}) prod_k f_{j_k}(state_k),
// by depth-first traversal with shared prefix products. Branches deeper than
// the x cap cannot contribute. With options.threads > 1 the top-level
// branches are distributed across that many workers; the result is identical
// to the single-threaded one.
Series solve_sequence_sum(const FunctionalEquation& eq,
                          const SolveOptions& options = {});

// Iterates F <- e + sum_j x * f_j * subst_j(F) from F = 0 until two
// consecutive iterates are equal (at most x_cap + 2 steps).
Series solve_fixed_point(const FunctionalEquation& eq);

// Closed form for F(s) = x e(s) + x f(s) F(1) + x g(s) F(qs):
//
//   F(s) = (E(s) + E(1) G(s) - E(s) G(1)) / (1 - G(1)),
//   E(s) = sum_{n >= 0} x^{n+1} g(s) g(sq) ... g(sq^{n-1}) e(sq^n),
//
// and G the same with f in place of e. All of e, f, g share one table with
// the single uncapped substitution variable subst_var.
Series solve_mbm(const Series& e, const Series& f, const Series& g,
                 std::string_view subst_var);

// The same equation encoded for the general solvers: steps j = (-1) with
// coefficient f and j = (1) with coefficient g, and the shape's leading x
// folded into the equation's e-term.
FunctionalEquation make_mbm_equation(const Series& e, const Series& f,
                                     const Series& g,
                                     std::string_view subst_var);

}  // namespace mvfe
