#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include "zeta1d/parser.hpp"

namespace zeta1d::oracles {

namespace {

bool squarefree(long n) {
    if (n < 0) n = -n;
    for (long p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

} // namespace

std::set<long> fundamental_discriminants_upto(long bound) {
    std::set<long> out;
    for (long d = -bound; d <= bound; ++d) {
        if (d == 0 || d == 1 || !squarefree(d)) continue;
        long disc = (((d % 4) + 4) % 4 == 1) ? d : 4 * d;
        if (disc >= -bound && disc <= bound && disc != 1) out.insert(disc);
    }
    return out;
}

SplitEFG gaussian_integer_split(long p) {
    if (p == 2) return {2, 1, 1};
    for (long a = 0; a * a <= p; ++a) {
        long b2 = p - a * a;
        long b = static_cast<long>(std::sqrt(static_cast<double>(b2)));
        for (long bb = std::max(0L, b - 1); bb <= b + 1; ++bb)
            if (a * a + bb * bb == p) return {1, 1, 2};
    }
    return {1, 2, 1};
}

mpq_class bernoulli_double_sum(unsigned long m) {
    // B_m = sum_{k=0}^{m} 1/(k+1) sum_{j=0}^{k} (-1)^j C(k,j) j^m, with 0^0 = 1.
    mpq_class total(0);
    for (unsigned long k = 0; k <= m; ++k) {
        mpz_class inner(0);
        for (unsigned long j = 0; j <= k; ++j) {
            mpz_class binom, jm;
            mpz_bin_uiui(binom.get_mpz_t(), k, j);
            if (j == 0)
                jm = (m == 0) ? 1 : 0;
            else
                mpz_pow_ui(jm.get_mpz_t(), mpz_class(static_cast<long>(j)).get_mpz_t(), m);
            if (j % 2 == 0)
                inner += binom * jm;
            else
                inner -= binom * jm;
        }
        total += mpq_class(inner) / mpq_class(static_cast<long>(k + 1));
    }
    total.canonicalize();
    return total;
}

mpq_class bernoulli_poly_oracle(unsigned long k, const mpq_class& x) {
    mpq_class acc(0);
    for (unsigned long j = 0; j <= k; ++j) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), k, j);
        mpq_class xpow(1);
        for (unsigned long i = 0; i < k - j; ++i) xpow *= x;
        acc += binom * bernoulli_double_sum(j) * xpow;
    }
    acc.canonicalize();
    return acc;
}

mpq_class bernoulli_chi_bruteforce(unsigned long k, long f,
                                   const std::function<int(long)>& chi) {
    mpz_class f_pow;
    mpz_pow_ui(f_pow.get_mpz_t(), mpz_class(f).get_mpz_t(), k - 1);
    mpq_class total(0);
    for (long a = 1; a <= f; ++a) {
        int c = chi(a);
        if (c == 0) continue;
        total += c * bernoulli_poly_oracle(k, mpq_class(a, f));
    }
    total *= f_pow;
    total.canonicalize();
    return total;
}

RealBall zeta3_apery(mpfr_prec_t prec) {
    mpq_class sum(0);
    mpq_class term;
    long K = static_cast<long>(prec) / 2 + 16; // each term gains ~2 bits
    for (long k = 1; k <= K; ++k) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), 2 * static_cast<unsigned long>(k),
                     static_cast<unsigned long>(k));
        term = mpq_class(1) / mpq_class(mpz_class(k) * k * k * binom);
        if (k % 2 == 0) term = -term;
        sum += term;
    }
    sum *= mpq_class(5, 2);
    sum.canonicalize();
    // alternating with |t_{k+1}| < |t_k| / 2: remainder below the last term
    mpq_class bound = abs(term) * 4;
    return RealBall::from_rational(sum, prec).inflated(bound);
}

RealBall cvz_alternating_sum(const std::function<RealBall(long, mpfr_prec_t)>& a, long terms,
                             mpfr_prec_t prec) {
    auto run = [&](long n) {
        // d = ((3 + sqrt 8)^n + (3 - sqrt 8)^n) / 2 via d_{j+1} = 6 d_j - d_{j-1}
        mpz_class dprev = 1, d = 3;
        for (long j = 1; j < n; ++j) {
            mpz_class next = 6 * d - dprev;
            dprev = d;
            d = next;
        }
        mpq_class bq(-1), cq = -mpq_class(d);
        RealBall s(prec);
        for (long k = 0; k < n; ++k) {
            cq = bq - cq;
            s = s + RealBall::from_rational(cq, prec) * a(k, prec);
            bq *= mpq_class((k + n) * (k - n) * 2, (2 * k + 1) * (k + 1));
            bq.canonicalize();
        }
        return s / RealBall::from_rational(mpq_class(d), prec);
    };
    RealBall first = run(terms);
    RealBall second = run(terms + 32);
    // inflate by the observed disagreement plus its uncertainty
    RealBall diff = (first - second).abs();
    mpq_class pad, rad_q;
    mpfr_get_q(pad.get_mpq_t(), diff.mid().raw());
    mpfr_get_q(rad_q.get_mpq_t(), diff.rad().raw());
    pad = abs(pad) + rad_q;
    return second.inflated(pad * 16);
}

RealBall zeta_via_eta(const RealBall& s, mpfr_prec_t prec) {
    auto a = [&](long k, mpfr_prec_t wp) {
        // (k+1)^(-s) = exp(-s log(k+1))
        RealBall base = RealBall::from_long(k + 1, wp);
        return (-(s * base.log())).exp();
    };
    long terms = static_cast<long>(prec) / 2 + 48;
    RealBall eta = cvz_alternating_sum(a, terms, prec);
    // zeta(s) = eta(s) / (1 - 2^(1-s))
    RealBall one = RealBall::from_long(1, prec);
    RealBall two_pow = ((one - s) * RealBall::from_long(2, prec).log()).exp();
    return eta / (one - two_pow);
}

RealBall l_chi4_alternating(const RealBall& s, mpfr_prec_t prec) {
    auto a = [&](long k, mpfr_prec_t wp) {
        RealBall base = RealBall::from_long(2 * k + 1, wp);
        return (-(s * base.log())).exp();
    };
    long terms = static_cast<long>(prec) / 2 + 48;
    return cvz_alternating_sum(a, terms, prec);
}

RealBall numeric_derivative(const std::function<RealBall(const RealBall&, mpfr_prec_t)>& fn,
                            const mpq_class& at, long hbits, mpfr_prec_t prec) {
    mpq_class h = mpq_class(1) / mpq_class(mpz_class(1) << hbits);
    auto eval = [&](const mpq_class& shift) {
        return fn(RealBall::from_rational(at + shift, prec), prec);
    };
    // (f(x-2h) - 8 f(x-h) + 8 f(x+h) - f(x+2h)) / (12 h)
    RealBall num = eval(-2 * h) - RealBall::from_long(8, prec) * eval(-h) +
                   RealBall::from_long(8, prec) * eval(h) - eval(2 * h);
    return num / RealBall::from_rational(12 * h, prec);
}

std::vector<mpz_class> random_weil_numerator(long q, int genus, std::mt19937& rng) {
    long amax = static_cast<long>(2.0 * std::sqrt(static_cast<double>(q)));
    std::uniform_int_distribution<long> coeff(-amax, amax);
    std::vector<mpz_class> poly = {1};
    for (int i = 0; i < genus; ++i) {
        long a = coeff(rng);
        // multiply by (1 - a T + q T^2)
        std::vector<mpz_class> next(poly.size() + 2, mpz_class(0));
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] += poly[j];
            next[j + 1] -= a * poly[j];
            next[j + 2] += q * poly[j];
        }
        poly = std::move(next);
    }
    return poly;
}

SchemeExpr random_scheme(std::mt19937& rng, int depth, bool profiled) {
    std::uniform_int_distribution<int> pick(0, 99);
    auto coin = [&](int pct) { return pick(rng) < pct; };
    const long qs[] = {2, 3, 4, 5, 7, 8, 9, 11, 13};
    std::uniform_int_distribution<int> qpick(0, 8);
    std::uniform_int_distribution<int> ppick(0, 4);
    const long small_primes[] = {2, 3, 5, 7, 11};

    if (depth <= 0 || coin(35)) {
        int which = pick(rng) % (profiled ? 4 : 6);
        switch (which) {
        case 0: return SchemeExpr::spec_fq(qs[qpick(rng)]);
        case 1: return SchemeExpr::affine_line(qs[qpick(rng)]);
        case 2: {
            std::set<long> removed;
            int k = pick(rng) % 3;
            for (int i = 0; i < k; ++i) removed.insert(small_primes[ppick(rng)]);
            return SchemeExpr::number_ring(FieldSpec::rationals(), removed);
        }
        case 3: return SchemeExpr::spec_fq(qs[qpick(rng)]);
        case 4: {
            long q = qs[qpick(rng)];
            return SchemeExpr::curve(q, random_weil_numerator(q, 1 + pick(rng) % 2, rng));
        }
        default: {
            const long discs[] = {5, 8, -4, -3, 12, -7, 13};
            return SchemeExpr::number_ring(FieldSpec::quadratic(discs[pick(rng) % 7]));
        }
        }
    }
    if (coin(50)) {
        std::vector<SchemeExpr> parts;
        int k = 2 + pick(rng) % 2;
        for (int i = 0; i < k; ++i) parts.push_back(random_scheme(rng, depth - 1, profiled));
        return SchemeExpr::disjoint(std::move(parts));
    }
    long p = small_primes[ppick(rng)];
    int style = pick(rng) % 3;
    if (style == 0) {
        std::set<long> removed;
        if (coin(50)) removed.insert(p == 2 ? 3L : 2L);
        return SchemeExpr::glue(SchemeExpr::number_ring(FieldSpec::rationals(), removed),
                                PointSel::fiber_over(p), SchemeExpr::affine_line(p),
                                PointSel::curve_point(1));
    }
    if (style == 1) {
        long q = qs[qpick(rng)];
        return SchemeExpr::glue(SchemeExpr::affine_line(q), PointSel::curve_point(1),
                                SchemeExpr::affine_line(q), PointSel::curve_point(1));
    }
    long q = qs[qpick(rng)];
    return SchemeExpr::glue(SchemeExpr::spec_fq(q), PointSel::curve_point(1),
                            SchemeExpr::affine_line(q), PointSel::curve_point(1));
}

} // namespace zeta1d::oracles
