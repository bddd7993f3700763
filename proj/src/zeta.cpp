#include "zeta1d/zeta.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace zeta1d {

namespace {

mpz_class pow_mpz(const mpz_class& base, long exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
    return r;
}

void collect(const SchemeExpr& expr, ZetaFactorization& out) {
    if (auto* nr = expr.get_if<NumberRingTerm>()) {
        CharacterGroup group = character_group(nr->field);
        for (auto& chi : group.chars) out.l_factors.push_back({chi});
        for (long p : nr->removed_primes) {
            SplittingData s = splitting_data(nr->field, p);
            for (long i = 0; i < s.g; ++i)
                out.adjusts.push_back({pow_mpz(p, s.f), +1});
        }
        return;
    }
    if (auto* fq = expr.get_if<SpecFqTerm>()) {
        out.adjusts.push_back({mpz_class(fq->q), -1});
        return;
    }
    if (auto* al = expr.get_if<AffineLineTerm>()) {
        // A1 = P^1 minus one rational point
        out.curve_factors.push_back({al->q, {mpz_class(1)}});
        out.adjusts.push_back({mpz_class(al->q), +1});
        return;
    }
    if (auto* cv = expr.get_if<CurveTerm>()) {
        out.curve_factors.push_back({cv->q, cv->numerator});
        for (long d : cv->removed_degrees)
            out.adjusts.push_back({pow_mpz(cv->q, d), +1});
        return;
    }
    if (auto* dj = expr.get_if<DisjointTerm>()) {
        for (const auto& part : dj->parts) collect(part, out);
        return;
    }
    auto* gl = expr.get_if<GlueTerm>();
    if (!gl->left_sel.resolved())
        throw Error(ErrCode::InternalInconsistency, "factorize requires a normalized expression");
    collect(*gl->left, out);
    collect(*gl->right, out);
    out.adjusts.push_back({gl->left_sel.residue_size, +1});
}

void cancel_adjusts(std::vector<EulerAdjust>& adjusts) {
    std::map<mpz_class, long> net;
    for (auto& a : adjusts) net[a.size] += a.exponent;
    std::vector<EulerAdjust> out;
    for (auto& [size, exp] : net) {
        for (long i = 0; i < (exp < 0 ? -exp : exp); ++i)
            out.push_back({size, exp < 0 ? -1 : +1});
    }
    adjusts = std::move(out);
}

} // namespace

ZetaFactorization factorize(const SchemeExpr& expr) {
    ZetaFactorization out;
    collect(expr, out);
    cancel_adjusts(out.adjusts);
    std::sort(out.l_factors.begin(), out.l_factors.end(),
              [](const LFactor& a, const LFactor& b) { return a.chi < b.chi; });
    return out;
}

mpq_class euler_adjust_value(const mpz_class& size, int exponent, long n) {
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "weight must be strictly negative");
    mpq_class t = 1 - mpq_class(pow_mpz(size, -n));
    if (exponent == 1) return t;
    return mpq_class(1) / t;
}

mpq_class curve_factor_value(long q, const std::vector<mpz_class>& numerator, long n) {
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "weight must be strictly negative");
    mpz_class qn = pow_mpz(mpz_class(q), -n);      // q^-n
    mpz_class qn1 = pow_mpz(mpz_class(q), 1 - n);  // q^(1-n)
    mpz_class num = 0, qpow = 1;
    for (const auto& c : numerator) {
        num += c * qpow;
        qpow *= qn;
    }
    if (num == 0)
        throw Error(ErrCode::InternalInconsistency,
                    "curve numerator vanishes at a negative integer (violates Weil bounds)");
    mpq_class value = mpq_class(num) / (mpq_class(1 - qn) * mpq_class(1 - qn1));
    value.canonicalize();
    return value;
}

long zeta_order(const ZetaFactorization& f, long n) {
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "weight must be strictly negative");
    long order = 0;
    for (const auto& lf : f.l_factors)
        if (lf.chi.vanishes_at(n)) ++order;
    return order;
}

int SpecialValue::sign() const {
    if (mode == ValueMode::Exact) return sgn(exact);
    if (!sign_known) return 0;
    return numeric.mid().sign();
}

RealBall SpecialValue::abs_ball(mpfr_prec_t prec) const {
    if (mode == ValueMode::Exact) return RealBall::from_rational(abs_exact(), prec);
    return numeric.abs();
}

namespace {

// Exact rational part: curve factors, Euler adjustments and the product of
// the non-vanishing L-values (a Galois-stable multiset, hence rational).
mpq_class exact_rational_part(const ZetaFactorization& f, long n) {
    mpq_class value(1);
    for (const auto& cf : f.curve_factors) value *= curve_factor_value(cf.q, cf.numerator, n);
    for (const auto& ea : f.adjusts) value *= euler_adjust_value(ea.size, ea.exponent, n);

    std::vector<CyclotomicNumber> lvals;
    long level = 1;
    for (const auto& lf : f.l_factors) {
        if (lf.chi.vanishes_at(n)) continue;
        CyclotomicNumber l = l_value_negative(n, lf.chi);
        if (l.is_zero())
            throw Error(ErrCode::InternalInconsistency,
                        "L-value vanished although its character parity says otherwise");
        level = std::lcm(level, l.level());
        lvals.push_back(std::move(l));
    }
    if (!lvals.empty()) {
        CyclotomicNumber prod = CyclotomicNumber::rational(1, level);
        for (auto& l : lvals) prod = prod * l.embedded(level);
        auto rat = prod.as_rational();
        if (!rat)
            throw Error(ErrCode::InternalInconsistency,
                        "product of conjugate L-values failed to collapse to a rational");
        value *= *rat;
    }
    value.canonicalize();
    return value;
}

} // namespace

SpecialValue special_value(const ZetaFactorization& f, long n, ValueMode mode,
                           long precision_bits) {
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "weight must be strictly negative");
    long order = zeta_order(f, n);

    if (mode == ValueMode::Exact) {
        if (order > 0)
            throw Error(ErrCode::ExactUnavailable,
                        "a vanishing L-factor contributes a derivative; use numeric mode");
        SpecialValue sv;
        sv.order = 0;
        sv.mode = ValueMode::Exact;
        sv.exact = exact_rational_part(f, n);
        if (sv.exact == 0)
            throw Error(ErrCode::InternalInconsistency, "exact special value came out zero");
        return sv;
    }

    mpq_class rational_part = exact_rational_part(f, n);
    for (int attempt = 0; attempt < 3; ++attempt) {
        long bits = (precision_bits + 32) << attempt;
        mpfr_prec_t wp = static_cast<mpfr_prec_t>(bits + 32);
        ComplexBall acc = ComplexBall::from_real(RealBall::from_rational(rational_part, wp));
        for (const auto& lf : f.l_factors) {
            if (!lf.chi.vanishes_at(n)) continue;
            acc = acc * l_derivative_negative(n, lf.chi, bits);
        }
        RealBall real = acc.to_real_checked();
        if (real.meets_tolerance(precision_bits) && (order == 0 || real.is_nonzero())) {
            SpecialValue sv;
            sv.order = order;
            sv.mode = ValueMode::Numeric;
            sv.numeric = real;
            sv.sign_known = real.is_nonzero();
            if (!sv.sign_known)
                throw Error(ErrCode::PrecisionUnachievable,
                            "numeric special value enclosure does not exclude zero");
            return sv;
        }
    }
    throw Error(ErrCode::PrecisionUnachievable,
                "numeric special value did not reach requested precision");
}

} // namespace zeta1d
