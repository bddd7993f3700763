#ifndef ZETA1D_SCHEME_HPP
#define ZETA1D_SCHEME_HPP

#include <gmpxx.h>

#include <map>
#include <memory>
#include <set>
#include <variant>
#include <vector>

#include "zeta1d/errors.hpp"

namespace zeta1d {

/// Abelian number field given by character-theoretic data.
struct FieldSpec {
    enum class Kind { Rational, Quadratic, Cyclotomic, CyclotomicReal, AbelianByModulus };

    Kind kind = Kind::Rational;
    long discriminant = 0;            // Quadratic: fundamental discriminant
    long modulus = 0;                 // Cyclotomic / CyclotomicReal / AbelianByModulus
    std::vector<long> subgroup_gens;  // AbelianByModulus: generators of H <= (Z/m)^*

    static FieldSpec rationals() { return FieldSpec{}; }
    static FieldSpec quadratic(long d);
    static FieldSpec cyclotomic(long m);
    static FieldSpec cyclotomic_real(long m);
    static FieldSpec abelian(long m, std::vector<long> gens);

    /// Throws InvalidField unless the data satisfies the type invariants.
    void validate() const;
    /// (modulus m, subgroup H of (Z/m)^* as a sorted element list); the field
    /// is the fixed field of H inside the m-th cyclotomic field.
    std::pair<long, std::vector<long>> modulus_subgroup() const;
    long degree() const;
    /// Totally real <=> -1 mod m lies in H.
    bool totally_real() const;
    long r1() const;
    long r2() const;

    bool operator==(const FieldSpec& o) const;
};

bool is_fundamental_discriminant(long d);

/// Selected closed point for gluing.
struct PointSel {
    enum class Kind { FiberOver, CurvePoint };
    Kind kind = Kind::FiberOver;
    long p = 0;        // FiberOver: rational prime
    long index = 0;    // FiberOver: which point above p (0-based)
    long degree = 0;   // CurvePoint: degree of the closed point
    mpz_class residue_size = 0; // N = |kappa(x)|, filled in by normalize

    static PointSel fiber_over(long p, long index = 0);
    static PointSel curve_point(long degree);
    bool resolved() const { return residue_size >= 2; }
    bool operator==(const PointSel& o) const;
};

class SchemeExpr;

struct NumberRingTerm {
    FieldSpec field;
    std::set<long> removed_primes;
};
struct SpecFqTerm {
    long q = 0;
};
struct AffineLineTerm {
    long q = 0;
};
struct CurveTerm {
    long q = 0;
    std::vector<mpz_class> numerator;       // low-degree first, constant 1
    std::multiset<long> removed_degrees;
};
struct DisjointTerm {
    std::vector<SchemeExpr> parts;
};
struct GlueTerm {
    std::shared_ptr<const SchemeExpr> left, right;
    PointSel left_sel, right_sel;
};

/// Closed expression describing a one-dimensional arithmetic scheme.
/// Values are immutable after construction; copies share nodes.
class SchemeExpr {
public:
    using Term = std::variant<NumberRingTerm, SpecFqTerm, AffineLineTerm, CurveTerm, DisjointTerm,
                              GlueTerm>;

    SchemeExpr() : SchemeExpr(NumberRingTerm{FieldSpec::rationals(), {}}) {}
    explicit SchemeExpr(Term term) : term_(std::make_shared<const Term>(std::move(term))) {}

    static SchemeExpr number_ring(FieldSpec field, std::set<long> removed_primes = {});
    static SchemeExpr spec_fq(long q);
    static SchemeExpr affine_line(long q);
    static SchemeExpr curve(long q, std::vector<mpz_class> numerator,
                            std::multiset<long> removed_degrees = {});
    static SchemeExpr disjoint(std::vector<SchemeExpr> parts);
    static SchemeExpr glue(SchemeExpr left, PointSel left_sel, SchemeExpr right,
                           PointSel right_sel);

    const Term& term() const { return *term_; }
    template <class T> const T* get_if() const { return std::get_if<T>(term_.get()); }

    bool operator==(const SchemeExpr& o) const;

private:
    std::shared_ptr<const Term> term_;
};

/// Archimedean data of the characteristic-0 generic points.
struct PlaceProfile {
    long r1 = 0;
    long r2 = 0;
    std::vector<long> generic_chars; // residue characteristic per generic point (0 in char 0)
};

/// Validates, flattens unions, merges removals and resolves glue selections.
/// The result is semantically equal to the input and structurally canonical
/// (union parts sorted by printed form). Idempotent.
SchemeExpr normalize(const SchemeExpr& expr);

PlaceProfile archimedean_profile(const SchemeExpr& expr);

/// ord_{s=n} zeta(X, s) = r1 + r2 for even n, r2 for odd n (n < 0).
long vanishing_order(const SchemeExpr& expr, long n);

/// Exponent of the 2-power correction: r1 for even n, 0 for odd n.
long delta(const SchemeExpr& expr, long n);

bool is_prime(long p);
bool is_prime_power(long q);

/// Point counts of the smooth proper curve with the given Weil numerator:
/// counts[d] = number of closed points of degree d, for d = 1..max_degree.
std::vector<mpz_class> curve_point_counts(long q, const std::vector<mpz_class>& numerator,
                                          long max_degree);

} // namespace zeta1d

#endif
