#include "mvfe/solver.hpp"

#include <algorithm>
#include <future>
#include <set>

namespace mvfe {

FunctionalEquation::FunctionalEquation(VarTablePtr table,
                                       std::vector<std::string> subst_vars,
                                       Series e, std::vector<StepSpec> steps)
    : table_(std::move(table)),
      subst_vars_(std::move(subst_vars)),
      e_(std::move(e)),
      steps_(std::move(steps)),
      x_cap_(0) {
    if (!table_) throw error("null variable table");
    for (const char* grading : {"x", "q"})
        if (!table_->has(grading))
            throw error(std::string("equation requires the variable '") +
                        grading + "'");
    x_cap_ = *table_->cap(table_->index_of("x"));

    std::set<std::string> seen;
    for (const auto& v : subst_vars_) {
        std::size_t idx = table_->index_of(v);
        if (v == "x" || v == "q")
            throw error("'" + v + "' cannot be a substitution variable");
        if (table_->is_capped(idx))
            throw error("substitution variable '" + v +
                        "' must be uncapped (substitution would be unsound "
                        "on a truncated variable)");
        if (!seen.insert(v).second)
            throw error("duplicate substitution variable '" + v + "'");
    }

    if (!same_table(e_.table(), table_))
        throw error("e is not over the equation's table");
    std::set<std::vector<int>> tuples;
    for (const auto& step : steps_) {
        if (step.j.size() != subst_vars_.size())
            throw error("step tuple length does not match the substitution "
                        "variable count");
        for (int ji : step.j) {
            if (ji < -1) throw error("step tuple entry below -1");
            if (ji > static_cast<int>(kMaxExponent))
                throw error("step tuple entry exceeds the exponent limit");
        }
        if (!tuples.insert(step.j).second)
            throw error("duplicate step tuple");
        if (!same_table(step.f.table(), table_))
            throw error("a step coefficient is not over the equation's table");
    }
}

ExponentState ExponentState::initial(std::size_t m) {
    ExponentState s;
    s.a.assign(m, 0);
    s.b.assign(m, 1);
    return s;
}

ExponentState update_state(const ExponentState& s, const std::vector<int>& j) {
    if (j.size() != s.a.size())
        throw error("tuple length does not match the state");
    ExponentState out = s;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i] < -1) throw error("step tuple entry below -1");
        if (j[i] == -1) {
            out.a[i] = 0;
            out.b[i] = 0;
        } else {
            out.a[i] += static_cast<std::uint64_t>(j[i]);
        }
    }
    return out;
}

Series apply_state(const Series& f, const ExponentState& s,
                   const std::vector<std::string>& subst_vars) {
    if (s.a.size() != subst_vars.size())
        throw error("state size does not match the substitution variables");
    Series out = f;
    for (std::size_t i = 0; i < subst_vars.size(); ++i) {
        if (s.a[i] > kMaxExponent)
            throw error("state q-exponent exceeds the exponent limit");
        if (s.a[i] > 0)
            out = substitute(out, subst_vars[i],
                             Substitution::shift(
                                 static_cast<std::uint32_t>(s.a[i])));
        if (s.b[i] == 0)
            out = substitute(out, subst_vars[i], Substitution::one());
    }
    return out;
}

namespace {

// Sum of x^n e(state_{n+1}) prod f over all sequences that extend the
// consumed prefix, where `product` already carries x^depth and the prefix's
// f-factors evaluated at their states.
Series subtree_sum(const FunctionalEquation& eq, const Series& x,
                   const ExponentState& state, const Series& product,
                   std::uint32_t depth, bool prune) {
    Series total = product * apply_state(eq.e(), state, eq.subst_vars());
    if (depth >= eq.x_cap()) return total;
    for (const auto& step : eq.steps()) {
        Series extended =
            product * x * apply_state(step.f, state, eq.subst_vars());
        if (prune && extended.is_zero()) continue;
        total = total + subtree_sum(eq, x, update_state(state, step.j),
                                    extended, depth + 1, prune);
    }
    return total;
}

}  // namespace

Series solve_sequence_sum(const FunctionalEquation& eq,
                          const SolveOptions& options) {
    const Series x = Series::variable(eq.table(), "x");
    const ExponentState root = ExponentState::initial(eq.subst_vars().size());
    const Series one = Series::constant(eq.table(), Rational(1));

    unsigned workers = std::max(1u, options.threads);
    if (workers == 1 || eq.steps().size() < 2 || eq.x_cap() == 0)
        return subtree_sum(eq, x, root, one, 0, options.prune);

    // One future per top-level branch, at most `workers` compute-heavy ones
    // in flight by chunking branch indices round-robin; results are merged
    // in branch order. Exact arithmetic makes the sum independent of the
    // partitioning.
    std::size_t branches = eq.steps().size();
    std::vector<Series> branch_sum(branches, Series::zero(eq.table()));
    unsigned lanes = static_cast<unsigned>(
        std::min<std::size_t>(workers, branches));
    std::vector<std::future<void>> futures;
    futures.reserve(lanes);
    for (unsigned lane = 0; lane < lanes; ++lane) {
        futures.push_back(std::async(std::launch::async, [&, lane] {
            for (std::size_t b = lane; b < branches; b += lanes) {
                const StepSpec& step = eq.steps()[b];
                Series extended =
                    x * apply_state(step.f, root, eq.subst_vars());
                if (options.prune && extended.is_zero()) continue;
                branch_sum[b] =
                    subtree_sum(eq, x, update_state(root, step.j), extended,
                                1, options.prune);
            }
        }));
    }
    for (auto& f : futures) f.get();

    Series total = apply_state(eq.e(), root, eq.subst_vars());
    for (const Series& s : branch_sum) total = total + s;
    return total;
}

namespace {

Series apply_step_substitution(const Series& f, const std::vector<int>& j,
                               const std::vector<std::string>& subst_vars) {
    Series out = f;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i] == -1)
            out = substitute(out, subst_vars[i], Substitution::one());
        else if (j[i] > 0)
            out = substitute(out, subst_vars[i],
                             Substitution::shift(
                                 static_cast<std::uint32_t>(j[i])));
    }
    return out;
}

}  // namespace

Series solve_fixed_point(const FunctionalEquation& eq) {
    const Series x = Series::variable(eq.table(), "x");
    Series current = Series::zero(eq.table());
    // Each pass fixes one more x-order, so x_cap + 2 passes always reach the
    // fixed point; one extra pass is allowed before giving up.
    for (std::uint32_t pass = 0; pass <= eq.x_cap() + 2; ++pass) {
        Series next = eq.e();
        for (const auto& step : eq.steps())
            next = next + x * step.f *
                              apply_step_substitution(current, step.j,
                                                      eq.subst_vars());
        if (next == current) return current;
        current = std::move(next);
    }
    throw error("fixed-point iteration did not stabilize");
}

Series solve_mbm(const Series& e, const Series& f, const Series& g,
                 std::string_view subst_var) {
    const VarTablePtr& table = e.table();
    if (!same_table(table, f.table()) || !same_table(table, g.table()))
        throw error("e, f, g must share one table");
    for (const char* grading : {"x", "q"})
        if (!table->has(grading))
            throw error(std::string("the shape requires the variable '") +
                        grading + "'");
    std::size_t si = table->index_of(subst_var);
    if (table->is_capped(si) || subst_var == "x" || subst_var == "q")
        throw error("the substitution variable must be uncapped and distinct "
                    "from x and q");
    std::uint32_t n_cap = *table->cap(table->index_of("x"));

    const Series x = Series::variable(table, "x");
    Series big_e = Series::zero(table);
    Series big_g = Series::zero(table);
    Series g_product = Series::constant(table, Rational(1));
    Series x_power = x;  // x^{n+1}
    for (std::uint32_t n = 0; n < n_cap; ++n) {
        Series weight = x_power * g_product;
        if (weight.is_zero()) break;
        big_e = big_e + weight * substitute(e, subst_var,
                                            Substitution::shift(n));
        big_g = big_g + weight * substitute(f, subst_var,
                                            Substitution::shift(n));
        g_product =
            g_product * substitute(g, subst_var, Substitution::shift(n));
        x_power = x_power * x;
    }

    Series e_at_one = substitute(big_e, subst_var, Substitution::one());
    Series g_at_one = substitute(big_g, subst_var, Substitution::one());
    Monomial constant;
    constant.width = static_cast<std::uint32_t>(table->size());
    if (g_at_one.coefficient(constant) != 0)
        throw error("G(1) has a constant term; the shape's leading x factor "
                    "is missing");
    Series one = Series::constant(table, Rational(1));
    return (big_e + e_at_one * big_g - big_e * g_at_one) *
           invert(one - g_at_one);
}

FunctionalEquation make_mbm_equation(const Series& e, const Series& f,
                                     const Series& g,
                                     std::string_view subst_var) {
    const VarTablePtr& table = e.table();
    if (!same_table(table, f.table()) || !same_table(table, g.table()))
        throw error("e, f, g must share one table");
    if (!table->has("x")) throw error("the shape requires the variable 'x'");
    Series x = Series::variable(table, "x");
    std::vector<StepSpec> steps;
    steps.push_back({{-1}, f});
    steps.push_back({{1}, g});
    return FunctionalEquation(table, {std::string(subst_var)}, x * e,
                              std::move(steps));
}

}  // namespace mvfe
