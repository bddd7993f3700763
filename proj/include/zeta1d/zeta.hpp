#ifndef ZETA1D_ZETA_HPP
#define ZETA1D_ZETA_HPP

#include <gmpxx.h>

#include <vector>

#include "zeta1d/dirichlet.hpp"
#include "zeta1d/numeric.hpp"
#include "zeta1d/scheme.hpp"

namespace zeta1d {

/// L(s, chi) for a primitive character.
struct LFactor {
    DirichletCharacter chi;
};

/// P(q^-s) / ((1 - q^-s)(1 - q^(1-s))) for a smooth proper curve numerator.
struct CurveFactor {
    long q = 0;
    std::vector<mpz_class> numerator;
};

/// (1 - N^-s)^exponent.
struct EulerAdjust {
    mpz_class size;
    int exponent = 1; // +1 or -1
};

/// Multiset of analytic factors representing zeta(X, s).
/// Inverse EulerAdjust pairs with equal size are canceled eagerly.
struct ZetaFactorization {
    std::vector<LFactor> l_factors;
    std::vector<CurveFactor> curve_factors;
    std::vector<EulerAdjust> adjusts;
};

ZetaFactorization factorize(const SchemeExpr& expr);

enum class ValueMode { Exact, Numeric };

/// Vanishing order plus leading Taylor coefficient at s = n.
struct SpecialValue {
    long order = 0;
    ValueMode mode = ValueMode::Exact;
    mpq_class exact;  // Exact mode: nonzero rational
    RealBall numeric; // Numeric mode: enclosure excluding zero
    bool sign_known = true;

    mpq_class abs_exact() const { return exact < 0 ? mpq_class(-exact) : exact; }
    int sign() const;
    RealBall abs_ball(mpfr_prec_t prec) const;
};

/// Leading coefficient and order of the factored zeta function at n < 0.
/// Exact mode succeeds iff no L-factor vanishes at n; the cyclotomic product
/// of the L-values is asserted to collapse to a rational.
SpecialValue special_value(const ZetaFactorization& f, long n, ValueMode mode,
                           long precision_bits = 128);

/// Sum of per-factor vanishing orders (the parity-vanishing L-factor count).
long zeta_order(const ZetaFactorization& f, long n);

/// Exact value of (1 - N^-n)^exponent.
mpq_class euler_adjust_value(const mpz_class& size, int exponent, long n);

/// Exact value of a curve factor at s = n < 0.
mpq_class curve_factor_value(long q, const std::vector<mpz_class>& numerator, long n);

} // namespace zeta1d

#endif
