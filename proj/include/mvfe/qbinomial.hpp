#pragma once

// q-binomial coefficients as exact polynomials in q.

#include "mvfe/series.hpp"

#include <vector>

namespace mvfe {

// Univariate polynomial in q with integer coefficients, held as a Series
// over the single variable q capped at the polynomial's own degree (so the
// representation is exact, never a truncation).
class QPolynomial {
public:
    QPolynomial();  // zero
    // coeffs[i] is the coefficient of q^i; trailing zeros allowed.
    explicit QPolynomial(std::vector<Integer> coeffs);
    static QPolynomial one();

    const Series& series() const { return series_; }
    // Dense coefficients, size degree()+1 (empty for zero).
    std::vector<Integer> coefficients() const;
    // -1 for the zero polynomial.
    long degree() const;
    Integer coefficient(std::uint32_t k) const;
    bool is_zero() const { return series_.is_zero(); }

    // Coefficient-wise equality (caps play no role).
    bool operator==(const QPolynomial& other) const {
        return coefficients() == other.coefficients();
    }

private:
    Series series_;
};

QPolynomial operator+(const QPolynomial& a, const QPolynomial& b);
QPolynomial operator-(const QPolynomial& a, const QPolynomial& b);
QPolynomial operator*(const QPolynomial& a, const QPolynomial& b);

// q^k
QPolynomial q_power(std::uint32_t k);

// Exact quotient; throws error if the remainder is nonzero or den is zero.
QPolynomial divide_exact(const QPolynomial& num, const QPolynomial& den);

// The q-binomial coefficient: the generating polynomial, by inversions, for
// interleavings of k smaller and n-k larger numbers. k > n gives 0. Computed
// by the Pascal-type recurrence with a memo shared across threads.
QPolynomial q_binomial(std::uint32_t n, std::uint32_t k);

// Sum of coefficients (the value at q = 1).
Integer value_at_one(const QPolynomial& p);

// Maps q^k into the target table's q, dropping terms beyond its cap (sound:
// exponents only grow under multiplication).
Series to_series(const QPolynomial& p, VarTablePtr target);

}  // namespace mvfe
