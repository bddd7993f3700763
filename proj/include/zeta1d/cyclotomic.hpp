#ifndef ZETA1D_CYCLOTOMIC_HPP
#define ZETA1D_CYCLOTOMIC_HPP

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "zeta1d/numeric.hpp"

namespace zeta1d {

/// Exact element of Q(zeta_N), stored as a length-N coefficient vector of
/// sum c_k zeta_N^k in Q[x]/(x^N - 1).
///
/// Canonical form: the unique representative inside the zeta_N-isotypic ideal,
/// obtained by multiplying with the central idempotent
///     e_N = (1/N) * sum_k c_N(k) x^k        (c_N = Ramanujan sums).
/// Sums and products of canonical vectors are canonical, the Galois action
/// permutes coordinates, and a rational r is stored as r * e_N (so its degree-0
/// coordinate is r * phi(N)/N).
class CyclotomicNumber {
public:
    CyclotomicNumber() : level_(1), coeffs_(1, mpq_class(0)) {}

    static CyclotomicNumber rational(const mpq_class& value, long level = 1);
    static CyclotomicNumber root_of_unity(long level, long exponent);
    /// Canonicalizes an arbitrary coefficient vector.
    static CyclotomicNumber from_coefficients(long level, std::vector<mpq_class> coeffs);

    long level() const { return level_; }
    const std::vector<mpq_class>& coefficients() const { return coeffs_; }

    bool is_zero() const;
    bool operator==(const CyclotomicNumber& o) const;
    bool operator!=(const CyclotomicNumber& o) const { return !(*this == o); }

    CyclotomicNumber operator-() const;
    friend CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b);
    friend CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b);
    friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b);
    CyclotomicNumber scaled(const mpq_class& s) const;

    /// Galois conjugation zeta -> zeta^a; requires gcd(a, N) = 1.
    CyclotomicNumber galois(long a) const;
    /// Reinterpret inside Q(zeta_M); requires N | M.
    CyclotomicNumber embedded(long new_level) const;

    /// The rational value when the element is Galois-stable.
    std::optional<mpq_class> as_rational() const;
    bool is_rational() const { return as_rational().has_value(); }

    ComplexBall to_complex(mpfr_prec_t prec) const;

private:
    long level_;
    std::vector<mpq_class> coeffs_;
    void canonicalize();
};

/// Euler phi and the Ramanujan-sum idempotent live here so tests can reuse them.
long euler_phi(long n);
/// Ramanujan sum c_N(k).
mpz_class ramanujan_sum(long N, long k);

} // namespace zeta1d

#endif
