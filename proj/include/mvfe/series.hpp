#pragma once

// Sparse multivariate formal power series, truncated by per-variable exponent
// caps, with exact rational coefficients.
//
// A VarTable fixes an ordered set of variables and the caps. Arithmetic is
// exact on every in-cap monomial: exponents only add and are nonnegative, so
// a product of discarded (out-of-cap) monomials can never fall back in cap.
// Series values are immutable once constructed; every operation returns a
// new value, so they are safe to share across threads.

#include "mvfe/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvfe {

inline constexpr std::size_t kMaxVariables = 16;
inline constexpr std::uint32_t kMaxExponent = 65535;

// Ordered variable list plus the capped subset. Any variable named "x" or
// "q" (the grading variables) must carry a cap.
class VarTable {
public:
    VarTable(std::vector<std::string> names,
             const std::map<std::string, std::uint32_t>& caps);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_[i]; }

    std::optional<std::size_t> find(std::string_view name) const;
    // Throws if the variable is not in the table.
    std::size_t index_of(std::string_view name) const;
    bool has(std::string_view name) const { return find(name).has_value(); }

    bool is_capped(std::size_t i) const { return caps_[i] >= 0; }
    std::optional<std::uint32_t> cap(std::size_t i) const;
    std::map<std::string, std::uint32_t> caps() const;

    bool operator==(const VarTable& other) const {
        return names_ == other.names_ && caps_ == other.caps_;
    }

private:
    std::vector<std::string> names_;
    std::vector<std::int64_t> caps_;  // -1 = uncapped
};

using VarTablePtr = std::shared_ptr<const VarTable>;

VarTablePtr make_table(std::vector<std::string> names,
                       const std::map<std::string, std::uint32_t>& caps);

bool same_table(const VarTablePtr& a, const VarTablePtr& b);

// Exponent vector, ordered as the owning table's variables. Absent = 0.
// Comparison is lexicographic in table order, which is the canonical term
// order everywhere (serialization, text form, term iteration).
struct Monomial {
    std::uint32_t width = 0;
    std::array<std::uint16_t, kMaxVariables> exp{};

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    bool is_constant() const {
        for (std::uint32_t i = 0; i < width; ++i)
            if (exp[i] != 0) return false;
        return true;
    }
};

using TermMap = std::map<Monomial, Rational>;
using ExponentSpec = std::vector<std::pair<std::string, std::uint32_t>>;

class Series {
public:
    static Series zero(VarTablePtr table);
    static Series constant(VarTablePtr table, Rational value);
    static Series variable(VarTablePtr table, std::string_view name);
    static Series monomial(VarTablePtr table, const ExponentSpec& exponents,
                           Rational coeff);
    // Validates caps and strips zero coefficients.
    static Series from_terms(VarTablePtr table, TermMap terms);

    const VarTablePtr& table() const { return table_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // Stored coefficient or 0. Throws if the monomial violates a cap: the
    // query is unanswerable at this truncation.
    Rational coefficient(const Monomial& m) const;
    Rational coefficient(const ExponentSpec& exponents) const;

    Monomial make_monomial(const ExponentSpec& exponents) const;
    bool in_caps(const Monomial& m) const;

    // Structural equality: equal tables and equal term maps.
    bool operator==(const Series& other) const;

private:
    Series(VarTablePtr table, TermMap terms)
        : table_(std::move(table)), terms_(std::move(terms)) {}

    VarTablePtr table_;
    TermMap terms_;
};

// Ring operations. Both operands must use equal tables.
Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator-(const Series& a);
Series operator*(const Series& a, const Series& b);
Series operator*(const Rational& c, const Series& a);

// a * coeff * m, re-truncated against the caps.
Series mul_monomial(const Series& a, const Monomial& m,
                    const Rational& coeff = Rational(1));
Series pow(const Series& a, std::uint32_t n);

// Multiplicative inverse within caps, by geometric iteration. Requires a
// nonzero constant term and that every non-constant monomial has a positive
// exponent in at least one capped variable (otherwise the inverse would need
// infinitely many in-cap terms).
Series invert(const Series& a);

struct Substitution {
    enum class Kind { shift, one };
    Kind kind;
    std::uint32_t amount = 0;

    // var ^ b  ->  q^(j*b) var^b
    static Substitution shift(std::uint32_t j) { return {Kind::shift, j}; }
    // var ^ b  ->  1
    static Substitution one() { return {Kind::one, 0}; }
};

// Substitutes var := q^j * var (shift) or var := 1 (one). The variable must
// be uncapped: substituting into a series whose construction may already
// have discarded terms for a cap on that variable would be unsound.
Series substitute(const Series& a, std::string_view var, Substitution action);

// Same variable names, possibly smaller caps; out-of-cap terms are dropped.
Series truncated(const Series& a, VarTablePtr target);

// Maps terms by variable name into a different table. Every variable with a
// nonzero exponent must exist in the target, and all terms must be in the
// target's caps; throws otherwise.
Series retabled(const Series& a, VarTablePtr target);

// Terms whose exponents match `fixed` exactly, with those variables removed,
// mapped into `target`.
Series slice(const Series& a, const ExponentSpec& fixed, VarTablePtr target);

// Evaluates var := value exactly (summing coefficients); the variable stays
// in the table with exponent 0. Unlike substitute this is allowed on capped
// variables: it is a query against the current truncation, so the caller is
// responsible for caps being high enough for the answer to be meaningful.
Series specialized(const Series& a, std::string_view var, long value);

// Canonical text form: terms in canonical order, "coeff * v^a w^b" with
// unit coefficients and zero exponents elided.
std::string to_text(const Series& a);
std::string to_text(const Monomial& m, const VarTable& table);

// Smallest monomial (canonical order) where the two series differ.
std::optional<Monomial> first_difference(const Series& a, const Series& b);

}  // namespace mvfe
