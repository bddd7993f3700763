#include "zeta1d/dirichlet.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

namespace zeta1d {

namespace {

long power_mod(long base, long exp, long mod) {
    if (mod == 1) return 0;
    long result = 1;
    long b = ((base % mod) + mod) % mod;
    while (exp > 0) {
        if (exp & 1) result = static_cast<long>(static_cast<__int128>(result) * b % mod);
        b = static_cast<long>(static_cast<__int128>(b) * b % mod);
        exp >>= 1;
    }
    return result;
}

long mul_mod(long a, long b, long mod) {
    if (mod == 1) return 0;
    return static_cast<long>(static_cast<__int128>(a) * b % mod);
}

std::vector<std::pair<long, int>> factorize_long(long n) {
    std::vector<std::pair<long, int>> factors;
    for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            factors.emplace_back(p, e);
        }
    }
    if (n > 1) factors.emplace_back(n, 1);
    return factors;
}

long primitive_root_mod_p(long p) {
    if (p == 2) return 1;
    long phi = p - 1;
    auto prime_factors = factorize_long(phi);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (auto& [q, e] : prime_factors) {
            (void)e;
            if (power_mod(g, phi / q, p) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw Error(ErrCode::InternalInconsistency, "no primitive root found");
}

// x = value mod pe, x = 1 mod modulus/pe (pe || modulus)
long crt_lift(long value, long pe, long modulus) {
    long rest = modulus / pe;
    if (rest == 1) return ((value % modulus) + modulus) % modulus;
    mpz_class g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), mpz_class(pe).get_mpz_t(),
               mpz_class(rest).get_mpz_t());
    mpz_class res = mpz_class(pe) * u + mpz_class(value) * rest * v;
    res = ((res % modulus) + modulus) % modulus;
    return res.get_si();
}

constexpr long kMaxModulus = 200000;

} // namespace

UnitGroup::UnitGroup(long modulus) : modulus_(modulus) {
    if (modulus < 1) throw Error(ErrCode::InvalidField, "modulus must be positive");
    if (modulus > kMaxModulus) throw Error(ErrCode::InvalidField, "modulus too large");
    long m = modulus;
    int two_exp = 0;
    while (m % 2 == 0) { m /= 2; ++two_exp; }
    for (auto& [p, e] : factorize_long(m)) {
        long pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        long g = primitive_root_mod_p(p);
        if (e > 1 && power_mod(g, p - 1, p * p) == 1) g += p;
        factors_.push_back({crt_lift(g % pe, pe, modulus), pe / p * (p - 1)});
    }
    if (two_exp == 2) {
        factors_.push_back({crt_lift(3, 4, modulus), 2});
    } else if (two_exp >= 3) {
        long pe = 1L << two_exp;
        factors_.push_back({crt_lift(pe - 1, pe, modulus), 2});
        factors_.push_back({crt_lift(5, pe, modulus), 1L << (two_exp - 2)});
    }
    for (auto& f : factors_) {
        order_ *= f.order;
        exponent_ = std::lcm(exponent_, f.order);
    }
}

bool UnitGroup::is_unit(long u) const {
    if (modulus_ == 1) return true;
    long um = ((u % modulus_) + modulus_) % modulus_;
    return std::gcd(um, modulus_) == 1;
}

std::vector<long> UnitGroup::decompose(long u) const {
    if (!is_unit(u)) throw Error(ErrCode::InternalInconsistency, "not a unit");
    std::vector<long> exps(factors_.size(), 0);
    if (modulus_ == 1) return exps;
    long um = ((u % modulus_) + modulus_) % modulus_;
    // Walk the group as a product of cyclic factors until um is hit.
    // Enumeration order: mixed-radix counter over factor exponents.
    long value = 1;
    while (true) {
        if (value == um) return exps;
        std::size_t j = 0;
        for (; j < factors_.size(); ++j) {
            exps[j] += 1;
            value = mul_mod(value, factors_[j].generator, modulus_);
            if (exps[j] < factors_[j].order) break;
            // wrap: g^order = 1, so value is already reduced
            exps[j] = 0;
        }
        if (j == factors_.size())
            throw Error(ErrCode::InternalInconsistency, "unit not generated by factor basis");
    }
}

std::vector<long> UnitGroup::elements() const {
    std::vector<long> out;
    if (modulus_ == 1) return {0};
    for (long u = 1; u < modulus_; ++u)
        if (std::gcd(u, modulus_) == 1) out.push_back(u);
    return out;
}

std::vector<long> UnitGroup::span(const std::vector<long>& gens) const {
    std::set<long> subgroup = {modulus_ == 1 ? 0L : 1L};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<long> current(subgroup.begin(), subgroup.end());
        for (long h : current) {
            for (long g : gens) {
                if (!is_unit(g)) throw Error(ErrCode::InvalidField, "subgroup generator not a unit");
                long gm = ((g % modulus_) + modulus_) % modulus_;
                long prod = modulus_ == 1 ? 0 : mul_mod(h, gm, modulus_);
                if (subgroup.insert(prod).second) grew = true;
            }
        }
    }
    return std::vector<long>(subgroup.begin(), subgroup.end());
}

namespace {

// Shared unit groups and dlog tables; behaves as if absent (pure data).
struct UnitGroupEntry {
    UnitGroup group;
    std::unordered_map<long, std::vector<long>> dlog;
    explicit UnitGroupEntry(long m) : group(m) {
        std::vector<long> exps(group.factors().size(), 0);
        long value = group.modulus() == 1 ? 0 : 1;
        while (true) {
            dlog.emplace(value, exps);
            std::size_t j = 0;
            for (; j < exps.size(); ++j) {
                exps[j] += 1;
                value = mul_mod(value, group.factors()[j].generator, group.modulus());
                if (exps[j] < group.factors()[j].order) break;
                exps[j] = 0;
            }
            if (j == exps.size()) break;
        }
    }
};

const UnitGroupEntry& unit_group_cached(long m) {
    static std::map<long, std::unique_ptr<UnitGroupEntry>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<UnitGroupEntry>(m)).first;
    return *it->second;
}

const std::vector<long>& dlog_lookup(const UnitGroupEntry& entry, long u) {
    long m = entry.group.modulus();
    long um = m == 1 ? 0 : ((u % m) + m) % m;
    auto it = entry.dlog.find(um);
    if (it == entry.dlog.end())
        throw Error(ErrCode::InternalInconsistency, "dlog of a non-unit requested");
    return it->second;
}

// Value exponent of the character with exponent vector exps on the unit u:
// chi(u) = zeta_lambda^t where lambda = group exponent.
long value_exponent(const UnitGroupEntry& entry, const std::vector<long>& exps, long u) {
    const auto& xs = dlog_lookup(entry, u);
    long lambda = entry.group.exponent();
    long t = 0;
    for (std::size_t j = 0; j < exps.size(); ++j) {
        long d = entry.group.factors()[j].order;
        t = (t + mul_mod(exps[j] % d, xs[j] % d, lambda) % lambda * (lambda / d)) % lambda;
    }
    return t;
}

} // namespace

CyclotomicNumber RootOfUnity::to_cyclotomic(long level) const {
    if (level % order != 0)
        throw Error(ErrCode::InternalInconsistency, "root of unity does not embed in level");
    return CyclotomicNumber::root_of_unity(level, exponent * (level / order));
}

ComplexBall RootOfUnity::to_complex(mpfr_prec_t prec) const {
    RealBall s(prec), c(prec);
    RealBall::sin_cos_2pi(mpq_class(exponent, order), prec, s, c);
    return ComplexBall(c, s);
}

DirichletCharacter DirichletCharacter::trivial() {
    DirichletCharacter chi;
    chi.conductor_ = 1;
    chi.order_ = 1;
    chi.parity_ = 0;
    return chi;
}

DirichletCharacter DirichletCharacter::from_modulus(long m, const std::vector<long>& exps) {
    const auto& entry = unit_group_cached(m);
    const UnitGroup& U = entry.group;
    if (exps.size() != U.factors().size())
        throw Error(ErrCode::InternalInconsistency, "character exponent vector has wrong shape");

    // Conductor: smallest divisor f of m such that chi is trivial on units = 1 mod f.
    long conductor = m;
    std::vector<long> divisors;
    for (long d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        divisors.push_back(d);
        if (d != m / d) divisors.push_back(m / d);
    }
    std::sort(divisors.begin(), divisors.end());
    for (long f : divisors) {
        bool trivial_on_kernel = true;
        for (long u = 1; u <= m; u += f) {
            if (std::gcd(u % m == 0 ? m : u % m, m) != 1) continue;
            if (value_exponent(entry, exps, u % m) != 0) {
                trivial_on_kernel = false;
                break;
            }
        }
        if (trivial_on_kernel) { conductor = f; break; }
    }

    DirichletCharacter chi;
    chi.conductor_ = conductor;
    const auto& fentry = unit_group_cached(conductor);
    const UnitGroup& Uf = fentry.group;
    long lambda_m = U.exponent();
    chi.exponents_.assign(Uf.factors().size(), 0);

    // Transport generator values from modulus m to the primitive modulus f:
    // lift each canonical generator of (Z/f)^* to a unit mod m congruent to it
    // mod f; the character value is independent of the lift.
    auto mfact = factorize_long(m);
    for (std::size_t i = 0; i < Uf.factors().size(); ++i) {
        long gi = Uf.factors()[i].generator;
        long di = Uf.factors()[i].order;
        // CRT: u = gi mod p^vp(f) for p | f, u = 1 mod p^vp(m) for p not | f
        mpz_class u(1), mod(1);
        for (auto& [p, e] : mfact) {
            long pe = 1;
            for (int t = 0; t < e; ++t) pe *= p;
            long target;
            if (conductor % p == 0) {
                long pf = 1;
                long fc = conductor;
                while (fc % p == 0) { fc /= p; pf *= p; }
                target = gi % pf;
                // any unit lift mod pe works; pick the same residue
                long lift = target;
                while (std::gcd(lift, pe) != 1) lift += pf;
                target = lift % pe;
            } else {
                target = 1 % pe;
            }
            // combine u (mod mod) with target (mod pe)
            mpz_class g, s, t2;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t2.get_mpz_t(), mod.get_mpz_t(),
                       mpz_class(pe).get_mpz_t());
            mpz_class combined = u + mod * s * (mpz_class(target) - u);
            mod *= pe;
            combined %= mod;
            if (combined < 0) combined += mod;
            u = combined;
        }
        long um = m == 1 ? 0 : static_cast<long>(mpz_class(u % m).get_si());
        long t = value_exponent(entry, exps, um);
        // chi(gi) has order dividing di, so t * di is a multiple of lambda_m.
        if ((static_cast<__int128>(t) * di) % lambda_m != 0)
            throw Error(ErrCode::InternalInconsistency, "primitive exponent not integral");
        chi.exponents_[i] =
            static_cast<long>((static_cast<__int128>(t) * di / lambda_m) % di);
    }

    // order = lcm over factors of d_i / gcd(c_i, d_i)
    long order = 1;
    for (std::size_t i = 0; i < Uf.factors().size(); ++i) {
        long di = Uf.factors()[i].order;
        long ci = chi.exponents_[i];
        order = std::lcm(order, di / std::gcd(ci == 0 ? di : ci, di));
    }
    chi.order_ = order;

    // parity: chi(-1)
    if (conductor <= 2) {
        chi.parity_ = 0;
    } else {
        long t = value_exponent(fentry, chi.exponents_, conductor - 1);
        long lambda_f = Uf.exponent();
        if (t == 0)
            chi.parity_ = 0;
        else if (2 * t == lambda_f)
            chi.parity_ = 1;
        else
            throw Error(ErrCode::InternalInconsistency, "chi(-1) not a sign");
    }
    return chi;
}

std::optional<RootOfUnity> DirichletCharacter::value(const mpz_class& k) const {
    if (conductor_ == 1) return RootOfUnity{1, 0};
    mpz_class km = k % conductor_;
    if (km < 0) km += conductor_;
    long u = static_cast<long>(km.get_si());
    if (std::gcd(u == 0 ? conductor_ : u, conductor_) != 1) return std::nullopt;
    const auto& entry = unit_group_cached(conductor_);
    long t = value_exponent(entry, exponents_, u);
    long lambda = entry.group.exponent();
    // reduce from zeta_lambda^t to zeta_order^(t*order/lambda)
    if ((static_cast<__int128>(t) * order_) % lambda != 0)
        throw Error(ErrCode::InternalInconsistency, "character value outside mu_order");
    long e = static_cast<long>((static_cast<__int128>(t) * order_ / lambda) % order_);
    return RootOfUnity{order_, e};
}

CyclotomicNumber DirichletCharacter::value_cyclotomic(const mpz_class& k, long level) const {
    auto v = value(k);
    if (!v) return CyclotomicNumber::rational(0, level);
    return v->to_cyclotomic(level);
}

ComplexBall DirichletCharacter::value_complex(const mpz_class& k, mpfr_prec_t prec) const {
    auto v = value(k);
    if (!v) return ComplexBall(RealBall(prec), RealBall(prec));
    return v->to_complex(prec);
}

DirichletCharacter DirichletCharacter::conjugate() const {
    DirichletCharacter chi(*this);
    const auto& entry = unit_group_cached(conductor_);
    for (std::size_t i = 0; i < chi.exponents_.size(); ++i) {
        long d = entry.group.factors()[i].order;
        chi.exponents_[i] = (d - chi.exponents_[i]) % d;
    }
    return chi;
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const {
    long M = std::lcm(conductor_, o.conductor_);
    const auto& entry = unit_group_cached(M);
    const UnitGroup& U = entry.group;
    std::vector<long> exps(U.factors().size(), 0);
    for (std::size_t i = 0; i < U.factors().size(); ++i) {
        long g = U.factors()[i].generator;
        long d = U.factors()[i].order;
        auto v1 = value(g), v2 = o.value(g);
        if (!v1 || !v2) throw Error(ErrCode::InternalInconsistency, "generator not unit mod lcm");
        long L = std::lcm(v1->order, v2->order);
        long t = (v1->exponent * (L / v1->order) + v2->exponent * (L / v2->order)) % L;
        if ((static_cast<__int128>(t) * d) % L != 0)
            throw Error(ErrCode::InternalInconsistency, "product exponent not integral");
        exps[i] = static_cast<long>((static_cast<__int128>(t) * d / L) % d);
    }
    return from_modulus(M, exps);
}

CharacterGroup character_group(const FieldSpec& field) {
    field.validate();
    auto [m, subgroup] = field.modulus_subgroup();
    const auto& entry = unit_group_cached(m);
    const UnitGroup& U = entry.group;

    CharacterGroup out;
    out.field = field;

    std::vector<long> exps(U.factors().size(), 0);
    while (true) {
        bool trivial_on_h = true;
        for (long h : subgroup) {
            if (value_exponent(entry, exps, h) != 0) { trivial_on_h = false; break; }
        }
        if (trivial_on_h) out.chars.push_back(DirichletCharacter::from_modulus(m, exps));
        std::size_t j = 0;
        for (; j < exps.size(); ++j) {
            exps[j] += 1;
            if (exps[j] < U.factors()[j].order) break;
            exps[j] = 0;
        }
        if (j == exps.size()) break;
    }
    std::sort(out.chars.begin(), out.chars.end());
    long degree = field.degree();
    if (static_cast<long>(out.chars.size()) != degree)
        throw Error(ErrCode::InternalInconsistency, "character count does not match field degree");
    return out;
}

const mpq_class bernoulli_number(unsigned long k) {
    static std::vector<mpq_class> cache = {mpq_class(1), mpq_class(-1, 2)};
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    while (cache.size() <= k) {
        unsigned long ksize = cache.size();
        mpq_class acc(0);
        for (unsigned long j = 0; j < ksize; ++j) {
            mpz_class binom;
            mpz_bin_uiui(binom.get_mpz_t(), ksize + 1, j);
            acc += binom * cache[j];
        }
        acc /= -static_cast<long>(ksize + 1);
        acc.canonicalize();
        cache.push_back(acc);
    }
    return cache[k];
}

mpq_class bernoulli_polynomial(unsigned long k, const mpq_class& x) {
    mpq_class acc(0);
    mpq_class xpow(1);
    // sum_j C(k, j) B_j x^(k-j); accumulate x powers from the top term down
    for (long j = static_cast<long>(k); j >= 0; --j) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), k, static_cast<unsigned long>(j));
        acc += binom * bernoulli_number(static_cast<unsigned long>(j)) * xpow;
        if (j > 0) xpow *= x;
    }
    acc.canonicalize();
    return acc;
}

CyclotomicNumber generalized_bernoulli(long k, const DirichletCharacter& chi) {
    if (k < 1) throw Error(ErrCode::UsageError, "generalized Bernoulli index must be >= 1");
    long f = chi.conductor();
    long e = chi.order();
    std::vector<mpq_class> coeffs(static_cast<std::size_t>(e), mpq_class(0));
    mpz_class f_pow;
    mpz_pow_ui(f_pow.get_mpz_t(), mpz_class(f).get_mpz_t(), static_cast<unsigned long>(k - 1));
    for (long a = 1; a <= f; ++a) {
        auto v = chi.value(a);
        if (!v) continue;
        mpq_class term = bernoulli_polynomial(static_cast<unsigned long>(k), mpq_class(a, f));
        term *= f_pow;
        long idx = v->exponent * (e / v->order);
        coeffs[static_cast<std::size_t>(idx % e)] += term;
    }
    return CyclotomicNumber::from_coefficients(e, std::move(coeffs));
}

CyclotomicNumber l_value_negative(long n, const DirichletCharacter& chi) {
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "L-value weight must be negative");
    long k = 1 - n;
    CyclotomicNumber b = generalized_bernoulli(k, chi);
    return b.scaled(mpq_class(-1, k));
}

SplittingData splitting_data(const FieldSpec& field, long p) {
    field.validate();
    if (!is_prime(p)) throw Error(ErrCode::UsageError, "splitting requires a rational prime");
    auto [m, subgroup] = field.modulus_subgroup();
    long degree = field.degree();

    long m_prime = m;
    while (m_prime % p == 0) m_prime /= p;

    // image of H in (Z/m')^*
    std::set<long> proj;
    for (long h : subgroup) proj.insert(m_prime == 1 ? 0 : ((h % m_prime) + m_prime) % m_prime);

    long phi_mp = unit_group_cached(m_prime).group.order();
    long deg_inertia_fixed = phi_mp / static_cast<long>(proj.size());

    SplittingData s;
    s.e = degree / deg_inertia_fixed;
    // f = order of p in (Z/m')^* / proj(H)
    long pk = m_prime == 1 ? 0 : (p % m_prime);
    long f = 1;
    long cur = pk;
    while (m_prime != 1 && proj.find(cur) == proj.end()) {
        cur = mul_mod(cur, pk, m_prime);
        ++f;
        if (f > degree)
            throw Error(ErrCode::InternalInconsistency, "residue degree exceeds field degree");
    }
    s.f = m_prime == 1 ? 1 : f;
    s.g = deg_inertia_fixed / s.f;
    if (s.e * s.f * s.g != degree)
        throw Error(ErrCode::InternalInconsistency, "efg does not match degree");
    return s;
}

namespace {

bool complex_meets_tolerance(const ComplexBall& z, long bits) {
    return z.real().meets_tolerance(bits) && z.imag().meets_tolerance(bits);
}

ComplexBall gauss_sum_at(const DirichletCharacter& chi, mpfr_prec_t wp) {
    long f = chi.conductor();
    ComplexBall sum(static_cast<mpfr_prec_t>(wp));
    for (long a = 1; a <= f; ++a) {
        auto v = chi.value(a);
        if (!v) continue;
        RealBall s(wp), c(wp);
        RealBall::sin_cos_2pi(mpq_class(a, f), wp, s, c);
        sum = sum + v->to_complex(wp) * ComplexBall(c, s);
    }
    return sum;
}

} // namespace

ComplexBall gauss_sum(const DirichletCharacter& chi, long precision_bits) {
    if (precision_bits < 64)
        throw Error(ErrCode::UsageError, "gauss_sum requires precision_bits >= 64");
    for (int attempt = 0; attempt < 3; ++attempt) {
        mpfr_prec_t wp = static_cast<mpfr_prec_t>((precision_bits + 32) << attempt);
        ComplexBall tau = gauss_sum_at(chi, wp);
        // |tau|^2 = f is an internal accuracy check on the root-of-unity path.
        if (!tau.abs_squared().contains(mpq_class(chi.conductor())))
            throw Error(ErrCode::InternalInconsistency, "gauss sum fails |tau|^2 = f");
        if (complex_meets_tolerance(tau, precision_bits)) return tau;
    }
    throw Error(ErrCode::PrecisionUnachievable, "gauss sum did not reach requested precision");
}

RealBall hurwitz_zeta(long s, long a, long f, long precision_bits) {
    if (s < 2) throw Error(ErrCode::UsageError, "hurwitz_zeta needs integer s >= 2");
    if (a < 1 || a > f) throw Error(ErrCode::UsageError, "hurwitz_zeta needs 0 < a/f <= 1");
    mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits + 16);
    mpq_class target = mpq_class(1) / mpq_class(mpz_class(1) << (precision_bits + 8));

    for (long K = std::max<long>(16, precision_bits / 4); K <= 1 << 20; K *= 2) {
        // All Euler-Maclaurin data is exact rational for integer s:
        //   sum_{k<K} (f/(kf+a))^s + T1 + T2 + sum_j B_2j/(2j)! (s)_{2j-1} base^(s+2j-1)
        mpq_class sum(0);
        for (long k = 0; k < K; ++k) {
            mpq_class term(f, k * f + a);
            mpq_class pw(1);
            for (long i = 0; i < s; ++i) pw *= term;
            sum += pw;
        }
        mpq_class base(f, K * f + a); // 1/(K + a/f)
        mpq_class base_pow(1);
        for (long i = 0; i < s - 1; ++i) base_pow *= base;
        sum += base_pow / (s - 1); // (K+x)^(1-s)/(s-1)
        base_pow *= base;          // (K+x)^(-s)
        sum += base_pow / 2;

        mpq_class base_sq = base * base;
        mpz_class poch(s);              // (s)_1
        mpz_class fact(2);              // (2j)! at j=1
        mpq_class pw = base_pow * base; // (K+x)^(-s-1)
        mpq_class prev_abs(-1);
        for (long j = 1; j <= 4096; ++j) {
            mpq_class term = bernoulli_number(2 * static_cast<unsigned long>(j)) * poch * pw;
            term /= fact;
            mpq_class tabs = abs(term);
            if (prev_abs >= 0 && tabs >= prev_abs) break; // divergence: enlarge K
            sum += term;
            prev_abs = tabs;
            // advance to j+1
            poch *= mpz_class(s + 2 * j - 1) * mpz_class(s + 2 * j);
            fact *= mpz_class(2 * j + 1) * mpz_class(2 * j + 2);
            pw *= base_sq;
            mpq_class next = abs(mpq_class(bernoulli_number(2 * static_cast<unsigned long>(j) + 2) *
                                           poch * pw / fact));
            mpq_class bound = 4 * next;
            if (bound <= target) {
                RealBall r = RealBall::from_rational(sum, wp);
                return r.inflated(bound);
            }
        }
    }
    throw Error(ErrCode::PrecisionUnachievable, "hurwitz_zeta did not converge");
}

ComplexBall l_value_positive(long s, const DirichletCharacter& chi, long precision_bits) {
    long f = chi.conductor();
    mpfr_prec_t wp = static_cast<mpfr_prec_t>(precision_bits + 32);
    ComplexBall sum(wp);
    for (long a = 1; a <= f; ++a) {
        auto v = chi.value(a);
        if (!v) continue;
        RealBall h = hurwitz_zeta(s, a, f, precision_bits + 16);
        sum = sum + v->to_complex(wp).scale(h);
    }
    mpz_class fs;
    mpz_pow_ui(fs.get_mpz_t(), mpz_class(f).get_mpz_t(), static_cast<unsigned long>(s));
    return sum.scale(RealBall::from_rational(mpq_class(1) / mpq_class(fs), wp));
}

ComplexBall l_derivative_negative(long n, const DirichletCharacter& chi, long precision_bits) {
    if (precision_bits < 64)
        throw Error(ErrCode::UsageError, "l_derivative_negative requires precision_bits >= 64");
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "weight must be negative");
    if (!chi.vanishes_at(n))
        throw Error(ErrCode::NotAVanishingPoint, "L(n, chi) is nonzero at this weight");

    long a = chi.parity();
    long m = (-n - a) / 2;
    long mp = m + a;
    // Q = (-1)^m m! (2m')! / (2 * 4^m' * m'!)
    mpz_class m_fact, mp_fact, mp2_fact;
    mpz_fac_ui(m_fact.get_mpz_t(), static_cast<unsigned long>(m));
    mpz_fac_ui(mp_fact.get_mpz_t(), static_cast<unsigned long>(mp));
    mpz_fac_ui(mp2_fact.get_mpz_t(), static_cast<unsigned long>(2 * mp));
    mpq_class q_factor = mpq_class(m_fact * mp2_fact) /
                         mpq_class(2 * (mpz_class(1) << (2 * mp)) * mp_fact);
    if (m % 2 != 0) q_factor = -q_factor;
    mpz_class f_pow;
    mpz_pow_ui(f_pow.get_mpz_t(), mpz_class(chi.conductor()).get_mpz_t(),
               static_cast<unsigned long>(-n));
    q_factor *= f_pow;

    for (int attempt = 0; attempt < 3; ++attempt) {
        long bits = (precision_bits + 64) << attempt;
        mpfr_prec_t wp = static_cast<mpfr_prec_t>(bits);
        ComplexBall tau = gauss_sum(chi, bits);
        ComplexBall lpos = l_value_positive(1 - n, chi.conjugate(), bits);
        RealBall pi_pow = RealBall::pi(wp).pow(n);
        ComplexBall result = tau.mul_i_pow(-a) * lpos;
        result = result.scale(pi_pow * RealBall::from_rational(q_factor, wp));
        if (complex_meets_tolerance(result, precision_bits)) return result;
    }
    throw Error(ErrCode::PrecisionUnachievable,
                "l_derivative_negative did not reach requested precision");
}

} // namespace zeta1d
