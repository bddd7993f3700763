#ifndef ZETA1D_DIRICHLET_HPP
#define ZETA1D_DIRICHLET_HPP

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "zeta1d/cyclotomic.hpp"
#include "zeta1d/numeric.hpp"
#include "zeta1d/scheme.hpp"

namespace zeta1d {

/// (Z/m)^* as a product of cyclic groups with fixed canonical generators.
/// The factor list is deterministic: odd prime powers in increasing order
/// (smallest primitive root, lifted), then for 2^e: <-1> and, for e >= 3, <5>.
class UnitGroup {
public:
    struct CyclicFactor {
        long generator; // element of (Z/m)^*, CRT-lifted
        long order;
    };

    explicit UnitGroup(long modulus);

    long modulus() const { return modulus_; }
    const std::vector<CyclicFactor>& factors() const { return factors_; }
    long order() const { return order_; }       // phi(m)
    long exponent() const { return exponent_; } // lcm of factor orders

    bool is_unit(long u) const;
    /// Discrete logarithm of u with respect to the canonical generators.
    std::vector<long> decompose(long u) const;
    /// All units mod m in increasing order.
    std::vector<long> elements() const;
    /// Subgroup generated by the given units, as a sorted element list.
    std::vector<long> span(const std::vector<long>& gens) const;

private:
    long modulus_;
    std::vector<CyclicFactor> factors_;
    long order_ = 1;
    long exponent_ = 1;
};

struct RootOfUnity {
    long order = 1;    // N
    long exponent = 0; // value = zeta_N^exponent, 0 <= exponent < N
    CyclotomicNumber to_cyclotomic(long level) const; // order | level
    ComplexBall to_complex(mpfr_prec_t prec) const;
};

/// Primitive Dirichlet character, stored modulo its conductor.
class DirichletCharacter {
public:
    /// Builds the primitive character inducing the character mod m whose
    /// exponent vector (w.r.t. the canonical generators of (Z/m)^*) is given:
    /// chi(g_j) = zeta_{d_j}^{exps[j]}.
    static DirichletCharacter from_modulus(long m, const std::vector<long>& exps);
    static DirichletCharacter trivial();

    long conductor() const { return conductor_; }
    long order() const { return order_; }
    int parity() const { return parity_; } // 0 even, 1 odd
    bool is_trivial() const { return conductor_ == 1; }
    bool is_even() const { return parity_ == 0; }
    const std::vector<long>& exponents() const { return exponents_; }

    /// chi(k); nullopt when gcd(k, conductor) > 1.
    std::optional<RootOfUnity> value(const mpz_class& k) const;
    CyclotomicNumber value_cyclotomic(const mpz_class& k, long level) const;
    ComplexBall value_complex(const mpz_class& k, mpfr_prec_t prec) const;

    DirichletCharacter conjugate() const;
    DirichletCharacter operator*(const DirichletCharacter& o) const;

    bool operator==(const DirichletCharacter& o) const {
        return conductor_ == o.conductor_ && exponents_ == o.exponents_;
    }
    bool operator<(const DirichletCharacter& o) const {
        if (conductor_ != o.conductor_) return conductor_ < o.conductor_;
        return exponents_ < o.exponents_;
    }

    /// True when L(n, chi) = 0 for this n < 0, i.e. chi(-1) != (-1)^(1-n):
    /// even characters vanish at even n, odd characters at odd n.
    bool vanishes_at(long n) const { return parity_ == ((n % 2) + 2) % 2; }

private:
    DirichletCharacter() = default;
    long conductor_ = 1;
    std::vector<long> exponents_; // w.r.t. canonical generators of (Z/f)^*
    long order_ = 1;
    int parity_ = 0;
};

/// Group of primitive characters cutting out an abelian field.
struct CharacterGroup {
    FieldSpec field;
    std::vector<DirichletCharacter> chars; // sorted, |chars| = degree
};

CharacterGroup character_group(const FieldSpec& field);

/// Classical Bernoulli number B_k (B_1 = -1/2). Cached, thread-safe.
const mpq_class bernoulli_number(unsigned long k);
/// Bernoulli polynomial B_k(x).
mpq_class bernoulli_polynomial(unsigned long k, const mpq_class& x);

/// B_{k, chi} = f^(k-1) * sum_{a=1..f} chi(a) B_k(a/f), exact.
CyclotomicNumber generalized_bernoulli(long k, const DirichletCharacter& chi);

/// L(n, chi) = -B_{1-n, chi} / (1-n) for n < 0, exact.
CyclotomicNumber l_value_negative(long n, const DirichletCharacter& chi);

struct SplittingData {
    long e = 1, f = 1, g = 1; // ramification, residue degree, number of points
};

/// Splitting of the rational prime p in the field; e*f*g = degree.
SplittingData splitting_data(const FieldSpec& field, long p);

/// tau(chi) = sum_{a mod f} chi(a) e^(2 pi i a / f), with |tau| = sqrt(f)
/// verified internally against the returned enclosure.
ComplexBall gauss_sum(const DirichletCharacter& chi, long precision_bits);

/// L(s, chi) for integer s >= 2 via Hurwitz zeta values (Euler-Maclaurin,
/// exact-rational tail bounds).
ComplexBall l_value_positive(long s, const DirichletCharacter& chi, long precision_bits);

/// Hurwitz zeta zeta(s, a/f) for integer s >= 2, 0 < a <= f.
RealBall hurwitz_zeta(long s, long a, long f, long precision_bits);

/// L'(n, chi) at a parity-vanishing n < 0, through the completed functional
/// equation: L'(n,chi) = Q * f^(-n) * pi^n * (tau(chi)/i^a) * L(1-n, conj chi)
/// with m = (-n-a)/2, m' = m+a, Q = (-1)^m m! (2m')! / (2 * 4^m' * m'!).
ComplexBall l_derivative_negative(long n, const DirichletCharacter& chi, long precision_bits);

} // namespace zeta1d

#endif
