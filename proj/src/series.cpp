#include "mvfe/series.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mvfe {

namespace {

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

}  // namespace

Rational rational_from_string(const std::string& text) {
    mpq_class value;
    if (value.set_str(text, 10) != 0)
        throw error("malformed rational literal: '" + text + "'");
    if (value.get_den() == 0)
        throw error("zero denominator in rational literal: '" + text + "'");
    value.canonicalize();
    return value;
}

VarTable::VarTable(std::vector<std::string> names,
                   const std::map<std::string, std::uint32_t>& caps)
    : names_(std::move(names)) {
    if (names_.empty()) throw error("variable table must not be empty");
    if (names_.size() > kMaxVariables)
        throw error("too many variables (limit " +
                    std::to_string(kMaxVariables) + ")");
    caps_.assign(names_.size(), -1);
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!valid_identifier(names_[i]))
            throw error("invalid variable name: '" + names_[i] + "'");
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j])
                throw error("duplicate variable name: '" + names_[i] + "'");
    }
    for (const auto& [name, cap] : caps) {
        auto idx = find(name);
        if (!idx) throw error("cap given for unknown variable: '" + name + "'");
        if (cap > kMaxExponent)
            throw error("cap for '" + name + "' exceeds the exponent limit");
        caps_[*idx] = static_cast<std::int64_t>(cap);
    }
    // x and q are the grading variables; whenever present they must be capped
    // or no series arithmetic would stay finite.
    for (const char* grading : {"x", "q"}) {
        auto idx = find(grading);
        if (idx && caps_[*idx] < 0)
            throw error(std::string("grading variable '") + grading +
                        "' must carry a cap");
    }
}

std::optional<std::size_t> VarTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

std::size_t VarTable::index_of(std::string_view name) const {
    auto idx = find(name);
    if (!idx) throw error("unknown variable: '" + std::string(name) + "'");
    return *idx;
}

std::optional<std::uint32_t> VarTable::cap(std::size_t i) const {
    if (caps_[i] < 0) return std::nullopt;
    return static_cast<std::uint32_t>(caps_[i]);
}

std::map<std::string, std::uint32_t> VarTable::caps() const {
    std::map<std::string, std::uint32_t> out;
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (caps_[i] >= 0) out[names_[i]] = static_cast<std::uint32_t>(caps_[i]);
    return out;
}

VarTablePtr make_table(std::vector<std::string> names,
                       const std::map<std::string, std::uint32_t>& caps) {
    return std::make_shared<const VarTable>(std::move(names), caps);
}

bool same_table(const VarTablePtr& a, const VarTablePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

namespace {

void require_same_table(const Series& a, const Series& b, const char* op) {
    if (!same_table(a.table(), b.table()))
        throw error(std::string("variable table mismatch in ") + op);
}

bool monomial_in_caps(const Monomial& m, const VarTable& t) {
    for (std::uint32_t i = 0; i < m.width; ++i) {
        auto c = t.cap(i);
        if (c && m.exp[i] > *c) return false;
    }
    return true;
}

// Sum of exponent vectors; false when any entry leaves the representable
// range or a cap is exceeded.
bool monomial_mul(const Monomial& a, const Monomial& b, const VarTable& t,
                  Monomial& out) {
    out.width = a.width;
    for (std::uint32_t i = 0; i < a.width; ++i) {
        std::uint32_t e =
            static_cast<std::uint32_t>(a.exp[i]) + static_cast<std::uint32_t>(b.exp[i]);
        auto c = t.cap(i);
        if (c && e > *c) return false;
        if (e > kMaxExponent)
            throw error("exponent overflow on variable '" + t.name(i) + "'");
        out.exp[i] = static_cast<std::uint16_t>(e);
    }
    return true;
}

void strip_zeros(TermMap& terms) {
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->second == 0)
            it = terms.erase(it);
        else
            ++it;
    }
}

}  // namespace

Series Series::zero(VarTablePtr table) {
    if (!table) throw error("null variable table");
    return Series(std::move(table), {});
}

Series Series::constant(VarTablePtr table, Rational value) {
    Series s = zero(std::move(table));
    if (value != 0) {
        Monomial m;
        m.width = static_cast<std::uint32_t>(s.table_->size());
        s.terms_.emplace(m, std::move(value));
    }
    return s;
}

Series Series::variable(VarTablePtr table, std::string_view name) {
    return monomial(std::move(table), {{std::string(name), 1}}, Rational(1));
}

Series Series::monomial(VarTablePtr table, const ExponentSpec& exponents,
                        Rational coeff) {
    Series s = zero(std::move(table));
    if (coeff == 0) return s;
    Monomial m = s.make_monomial(exponents);
    if (!s.in_caps(m))
        throw error("monomial exceeds a cap: " + to_text(m, *s.table_));
    s.terms_.emplace(m, std::move(coeff));
    return s;
}

Series Series::from_terms(VarTablePtr table, TermMap terms) {
    if (!table) throw error("null variable table");
    strip_zeros(terms);
    for (const auto& [m, c] : terms) {
        if (m.width != table->size())
            throw error("monomial width does not match the table");
        if (!monomial_in_caps(m, *table))
            throw error("monomial exceeds a cap: " + to_text(m, *table));
    }
    return Series(std::move(table), std::move(terms));
}

Monomial Series::make_monomial(const ExponentSpec& exponents) const {
    Monomial m;
    m.width = static_cast<std::uint32_t>(table_->size());
    for (const auto& [name, e] : exponents) {
        if (e > kMaxExponent)
            throw error("exponent too large for variable '" + name + "'");
        m.exp[table_->index_of(name)] = static_cast<std::uint16_t>(e);
    }
    return m;
}

bool Series::in_caps(const Monomial& m) const {
    return monomial_in_caps(m, *table_);
}

Rational Series::coefficient(const Monomial& m) const {
    if (m.width != table_->size())
        throw error("monomial width does not match the table");
    if (!in_caps(m))
        throw error("coefficient query out of caps: " + to_text(m, *table_) +
                    " (unanswerable at this truncation)");
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Series::coefficient(const ExponentSpec& exponents) const {
    return coefficient(make_monomial(exponents));
}

bool Series::operator==(const Series& other) const {
    return same_table(table_, other.table_) && terms_ == other.terms_;
}

Series operator+(const Series& a, const Series& b) {
    require_same_table(a, b, "add");
    TermMap out = a.terms();
    for (const auto& [m, c] : b.terms()) {
        auto [it, inserted] = out.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) out.erase(it);
        }
    }
    return Series::from_terms(a.table(), std::move(out));
}

Series operator-(const Series& a) {
    TermMap out = a.terms();
    for (auto& [m, c] : out) c = -c;
    return Series::from_terms(a.table(), std::move(out));
}

Series operator-(const Series& a, const Series& b) {
    require_same_table(a, b, "sub");
    TermMap out = a.terms();
    for (const auto& [m, c] : b.terms()) {
        auto [it, inserted] = out.emplace(m, -c);
        if (!inserted) {
            it->second -= c;
            if (it->second == 0) out.erase(it);
        }
    }
    return Series::from_terms(a.table(), std::move(out));
}

Series operator*(const Series& a, const Series& b) {
    require_same_table(a, b, "mul");
    const VarTable& t = *a.table();
    TermMap out;
    // Outer loop over the smaller operand keeps the inner accumulation runs
    // longer and the map churn lower.
    const Series& small = a.term_count() <= b.term_count() ? a : b;
    const Series& large = a.term_count() <= b.term_count() ? b : a;
    Monomial prod;
    for (const auto& [ms, cs] : small.terms()) {
        for (const auto& [ml, cl] : large.terms()) {
            if (!monomial_mul(ms, ml, t, prod)) continue;
            auto [it, inserted] = out.try_emplace(prod);
            it->second += cs * cl;
        }
    }
    strip_zeros(out);
    return Series::from_terms(a.table(), std::move(out));
}

Series operator*(const Rational& c, const Series& a) {
    if (c == 0) return Series::zero(a.table());
    TermMap out = a.terms();
    for (auto& [m, v] : out) v *= c;
    return Series::from_terms(a.table(), std::move(out));
}

Series mul_monomial(const Series& a, const Monomial& m, const Rational& coeff) {
    if (m.width != a.table()->size())
        throw error("monomial width does not match the table");
    if (coeff == 0) return Series::zero(a.table());
    const VarTable& t = *a.table();
    TermMap out;
    Monomial prod;
    for (const auto& [ma, ca] : a.terms()) {
        if (!monomial_mul(ma, m, t, prod)) continue;
        out.emplace(prod, ca * coeff);
    }
    return Series::from_terms(a.table(), std::move(out));
}

Series pow(const Series& a, std::uint32_t n) {
    Series result = Series::constant(a.table(), Rational(1));
    Series base = a;
    while (n > 0) {
        if (n & 1u) result = result * base;
        n >>= 1u;
        if (n > 0) base = base * base;
    }
    return result;
}

Series invert(const Series& a) {
    const VarTable& t = *a.table();
    Monomial constant_mono;
    constant_mono.width = static_cast<std::uint32_t>(t.size());
    auto it = a.terms().find(constant_mono);
    if (it == a.terms().end())
        throw error("invert: zero constant term in " + to_text(a));
    Rational c0 = it->second;
    for (const auto& [m, c] : a.terms()) {
        if (m.is_constant()) continue;
        bool has_capped = false;
        for (std::uint32_t i = 0; i < m.width && !has_capped; ++i)
            has_capped = m.exp[i] > 0 && t.is_capped(i);
        if (!has_capped)
            throw error("invert: monomial " + to_text(m, t) +
                        " contains no capped variable; the inverse has "
                        "infinitely many in-cap terms");
    }

    // a = c0 * (1 - n) with n nilpotent under the caps, so
    // a^-1 = (1/c0) * sum n^k. The loop ends when n^k truncates to zero.
    Rational inv_c0 = Rational(1) / c0;
    Series nilpotent =
        inv_c0 * (Series::constant(a.table(), c0) - a);
    Series sum = Series::constant(a.table(), Rational(1));
    Series power = Series::constant(a.table(), Rational(1));
    std::uint64_t bound = 2;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (auto c = t.cap(i)) bound += *c + 1;
    for (std::uint64_t k = 0; k < bound; ++k) {
        power = power * nilpotent;
        if (power.is_zero()) return inv_c0 * sum;
        sum = sum + power;
    }
    throw error("invert: geometric iteration did not terminate");
}

Series substitute(const Series& a, std::string_view var, Substitution action) {
    const VarTable& t = *a.table();
    std::size_t vi = t.index_of(var);
    if (t.is_capped(vi))
        throw error("substitute into capped variable '" + std::string(var) +
                    "' is unsound (terms may already have been discarded "
                    "under its cap)");
    if (action.kind == Substitution::Kind::shift && action.amount == 0)
        return a;

    std::optional<std::size_t> qi;
    if (action.kind == Substitution::Kind::shift) {
        qi = t.find("q");
        if (!qi)
            throw error("substitute shift requires the variable q in the table");
    }

    TermMap out;
    for (const auto& [m, c] : a.terms()) {
        Monomial nm = m;
        std::uint32_t beta = m.exp[vi];
        if (action.kind == Substitution::Kind::one) {
            nm.exp[vi] = 0;
        } else {
            if (beta == 0) {
                out.emplace(nm, c);
                continue;
            }
            std::uint64_t qe = static_cast<std::uint64_t>(m.exp[*qi]) +
                               static_cast<std::uint64_t>(action.amount) * beta;
            auto qcap = t.cap(*qi);
            if (qcap && qe > *qcap) continue;  // re-truncate against q's cap
            if (qe > kMaxExponent)
                throw error("exponent overflow on variable 'q'");
            nm.exp[*qi] = static_cast<std::uint16_t>(qe);
        }
        auto [it, inserted] = out.emplace(nm, c);
        if (!inserted) it->second += c;
    }
    strip_zeros(out);
    return Series::from_terms(a.table(), std::move(out));
}

Series truncated(const Series& a, VarTablePtr target) {
    if (!target) throw error("null variable table");
    const VarTable& from = *a.table();
    if (target->names() != from.names())
        throw error("truncated: target table must use the same variables");
    for (std::size_t i = 0; i < from.size(); ++i) {
        auto fc = from.cap(i), tc = target->cap(i);
        if (fc && (!tc || *tc > *fc))
            throw error("truncated: cap on '" + from.name(i) +
                        "' may not grow (terms beyond it were discarded)");
    }
    TermMap out;
    for (const auto& [m, c] : a.terms())
        if (monomial_in_caps(m, *target)) out.emplace(m, c);
    return Series::from_terms(std::move(target), std::move(out));
}

Series retabled(const Series& a, VarTablePtr target) {
    if (!target) throw error("null variable table");
    const VarTable& from = *a.table();
    const VarTable& to = *target;
    // Index map for variables that actually occur.
    std::vector<std::optional<std::size_t>> remap(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) remap[i] = to.find(from.name(i));
    TermMap out;
    for (const auto& [m, c] : a.terms()) {
        Monomial nm;
        nm.width = static_cast<std::uint32_t>(to.size());
        for (std::uint32_t i = 0; i < m.width; ++i) {
            if (m.exp[i] == 0) continue;
            if (!remap[i])
                throw error("retabled: variable '" + from.name(i) +
                            "' is missing from the target table");
            nm.exp[*remap[i]] = m.exp[i];
        }
        if (!monomial_in_caps(nm, to))
            throw error("retabled: term " + to_text(m, from) +
                        " exceeds a target cap");
        out.emplace(nm, c);
    }
    return Series::from_terms(std::move(target), std::move(out));
}

Series slice(const Series& a, const ExponentSpec& fixed, VarTablePtr target) {
    const VarTable& from = *a.table();
    std::vector<std::pair<std::size_t, std::uint32_t>> wanted;
    wanted.reserve(fixed.size());
    for (const auto& [name, e] : fixed)
        wanted.emplace_back(from.index_of(name), e);
    TermMap kept;
    for (const auto& [m, c] : a.terms()) {
        bool match = true;
        for (const auto& [idx, e] : wanted)
            if (m.exp[idx] != e) { match = false; break; }
        if (!match) continue;
        Monomial nm = m;
        for (const auto& [idx, e] : wanted) nm.exp[idx] = 0;
        kept.emplace(nm, c);
    }
    return retabled(Series::from_terms(a.table(), std::move(kept)),
                    std::move(target));
}

Series specialized(const Series& a, std::string_view var, long value) {
    const VarTable& t = *a.table();
    std::size_t vi = t.index_of(var);
    TermMap out;
    for (const auto& [m, c] : a.terms()) {
        Monomial nm = m;
        nm.exp[vi] = 0;
        Rational scaled = c;
        if (m.exp[vi] > 0 && value != 1) {
            Integer p;
            mpz_pow_ui(p.get_mpz_t(), Integer(value).get_mpz_t(), m.exp[vi]);
            scaled *= Rational(p);
        }
        auto [it, inserted] = out.emplace(nm, scaled);
        if (!inserted) it->second += scaled;
    }
    strip_zeros(out);
    return Series::from_terms(a.table(), std::move(out));
}

std::string to_text(const Monomial& m, const VarTable& table) {
    std::ostringstream os;
    bool first = true;
    for (std::uint32_t i = 0; i < m.width; ++i) {
        if (m.exp[i] == 0) continue;
        if (!first) os << ' ';
        first = false;
        os << table.name(i);
        if (m.exp[i] > 1) os << '^' << m.exp[i];
    }
    if (first) os << '1';
    return os.str();
}

std::string to_text(const Series& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : a.terms()) {
        Rational abs_c = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) os << '-';
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (m.is_constant()) {
            os << to_string(abs_c);
        } else if (abs_c == 1) {
            os << to_text(m, *a.table());
        } else {
            os << to_string(abs_c) << " * " << to_text(m, *a.table());
        }
    }
    return os.str();
}

std::optional<Monomial> first_difference(const Series& a, const Series& b) {
    require_same_table(a, b, "first_difference");
    auto ia = a.terms().begin(), ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->first < ib->first) return ia->first;
        if (ib->first < ia->first) return ib->first;
        if (ia->second != ib->second) return ia->first;
        ++ia, ++ib;
    }
    if (ia != a.terms().end()) return ia->first;
    if (ib != b.terms().end()) return ib->first;
    return std::nullopt;
}

}  // namespace mvfe
