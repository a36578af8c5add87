#include "mvfe/qbinomial.hpp"

#include <map>
#include <mutex>
#include <utility>

namespace mvfe {

namespace {

Series dense_to_series(const std::vector<Integer>& coeffs) {
    std::size_t deg = coeffs.size();
    while (deg > 0 && coeffs[deg - 1] == 0) --deg;
    std::uint32_t cap = deg == 0 ? 0 : static_cast<std::uint32_t>(deg - 1);
    if (cap > kMaxExponent) throw error("q-polynomial degree too large");
    auto table = make_table({"q"}, {{"q", cap}});
    TermMap terms;
    for (std::size_t i = 0; i < deg; ++i) {
        if (coeffs[i] == 0) continue;
        Monomial m;
        m.width = 1;
        m.exp[0] = static_cast<std::uint16_t>(i);
        terms.emplace(m, Rational(coeffs[i]));
    }
    return Series::from_terms(std::move(table), std::move(terms));
}

std::vector<Integer> series_to_dense(const Series& s) {
    if (s.is_zero()) return {};
    std::vector<Integer> out(s.terms().rbegin()->first.exp[0] + 1, Integer(0));
    for (const auto& [m, c] : s.terms()) out[m.exp[0]] = c.get_num();
    return out;
}

std::vector<Integer> mul_dense(const std::vector<Integer>& a,
                               const std::vector<Integer>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Integer> out(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<Integer> add_dense(std::vector<Integer> a,
                               const std::vector<Integer>& b) {
    if (a.size() < b.size()) a.resize(b.size(), Integer(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

}  // namespace

QPolynomial::QPolynomial() : series_(dense_to_series({})) {}

QPolynomial::QPolynomial(std::vector<Integer> coeffs)
    : series_(dense_to_series(coeffs)) {}

QPolynomial QPolynomial::one() { return QPolynomial({Integer(1)}); }

std::vector<Integer> QPolynomial::coefficients() const {
    return series_to_dense(series_);
}

long QPolynomial::degree() const {
    if (series_.is_zero()) return -1;
    return series_.terms().rbegin()->first.exp[0];
}

Integer QPolynomial::coefficient(std::uint32_t k) const {
    for (const auto& [m, c] : series_.terms())
        if (m.exp[0] == k) return c.get_num();
    return Integer(0);
}

QPolynomial operator+(const QPolynomial& a, const QPolynomial& b) {
    return QPolynomial(add_dense(a.coefficients(), b.coefficients()));
}

QPolynomial operator-(const QPolynomial& a, const QPolynomial& b) {
    auto bc = b.coefficients();
    for (auto& c : bc) c = -c;
    return QPolynomial(add_dense(std::move(bc), a.coefficients()));
}

QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
    return QPolynomial(mul_dense(a.coefficients(), b.coefficients()));
}

QPolynomial q_power(std::uint32_t k) {
    std::vector<Integer> c(k + 1, Integer(0));
    c[k] = 1;
    return QPolynomial(std::move(c));
}

QPolynomial divide_exact(const QPolynomial& num, const QPolynomial& den) {
    std::vector<Integer> r = num.coefficients();
    std::vector<Integer> d = den.coefficients();
    while (!d.empty() && d.back() == 0) d.pop_back();
    if (d.empty()) throw error("divide_exact: division by zero");
    while (!r.empty() && r.back() == 0) r.pop_back();
    if (r.empty()) return QPolynomial();
    if (r.size() < d.size())
        throw error("divide_exact: remainder is nonzero");
    std::vector<Integer> quot(r.size() - d.size() + 1, Integer(0));
    const Integer& lead = d.back();
    for (std::size_t pos = quot.size(); pos-- > 0;) {
        Integer top = r[pos + d.size() - 1];
        if (top == 0) continue;
        if (top % lead != 0)
            throw error("divide_exact: remainder is nonzero");
        Integer f = top / lead;
        quot[pos] = f;
        for (std::size_t i = 0; i < d.size(); ++i) r[pos + i] -= f * d[i];
    }
    for (const Integer& c : r)
        if (c != 0) throw error("divide_exact: remainder is nonzero");
    return QPolynomial(std::move(quot));
}

QPolynomial q_binomial(std::uint32_t n, std::uint32_t k) {
    if (k > n) return QPolynomial();
    if (k == 0 || k == n) return QPolynomial::one();
    static std::mutex memo_mutex;
    static std::map<std::pair<std::uint32_t, std::uint32_t>,
                    std::vector<Integer>>
        memo;
    std::pair<std::uint32_t, std::uint32_t> key(n, k);
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return QPolynomial(it->second);
    }
    // [n k] = [n-1 k-1] + q^k [n-1 k]
    QPolynomial left = q_binomial(n - 1, k - 1);
    QPolynomial right = q_power(k) * q_binomial(n - 1, k);
    QPolynomial result = left + right;
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        memo.emplace(key, result.coefficients());
    }
    return result;
}

Integer value_at_one(const QPolynomial& p) {
    Integer sum(0);
    for (const auto& c : p.coefficients()) sum += c;
    return sum;
}

Series to_series(const QPolynomial& p, VarTablePtr target) {
    if (!target) throw error("null variable table");
    std::size_t qi = target->index_of("q");
    auto qcap = target->cap(qi);
    TermMap terms;
    for (const auto& [m, c] : p.series().terms()) {
        std::uint32_t e = m.exp[0];
        if (qcap && e > *qcap) continue;
        Monomial nm;
        nm.width = static_cast<std::uint32_t>(target->size());
        nm.exp[qi] = static_cast<std::uint16_t>(e);
        terms.emplace(nm, c);
    }
    return Series::from_terms(std::move(target), std::move(terms));
}

}  // namespace mvfe
