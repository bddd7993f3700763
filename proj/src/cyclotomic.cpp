#include "zeta1d/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>

#include "zeta1d/errors.hpp"

namespace zeta1d {

namespace {

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

int moebius(long n) {
    int mu = 1;
    for (auto& [p, e] : factorize_long(n)) {
        (void)p;
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

// e_N as an integer vector scaled by 1/N: e_N[k] = c_N(k)/N.
const std::vector<mpz_class>& idempotent_numerators(long N) {
    static std::map<long, std::vector<mpz_class>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    std::vector<mpz_class> v(static_cast<std::size_t>(N));
    for (long k = 0; k < N; ++k) v[static_cast<std::size_t>(k)] = ramanujan_sum(N, k);
    return cache.emplace(N, std::move(v)).first->second;
}

} // namespace

long euler_phi(long n) {
    long result = n;
    for (auto& [p, e] : factorize_long(n)) {
        (void)e;
        result -= result / p;
    }
    return result;
}

mpz_class ramanujan_sum(long N, long k) {
    // c_N(k) = sum_{d | gcd(k mod N, N)} d * mu(N/d)
    long g = std::gcd(((k % N) + N) % N, N);
    if (g == 0) g = N;
    mpz_class total = 0;
    for (long d = 1; d * d <= g; ++d) {
        if (g % d != 0) continue;
        long d2 = g / d;
        total += mpz_class(d) * moebius(N / d);
        if (d2 != d) total += mpz_class(d2) * moebius(N / d2);
    }
    return total;
}

void CyclotomicNumber::canonicalize() {
    const long N = level_;
    if (N == 1) return;
    const auto& e = idempotent_numerators(N);
    std::vector<mpq_class> out(static_cast<std::size_t>(N), mpq_class(0));
    for (long i = 0; i < N; ++i) {
        const mpq_class& c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        for (long j = 0; j < N; ++j) {
            const mpz_class& w = e[static_cast<std::size_t>(j)];
            if (w == 0) continue;
            out[static_cast<std::size_t>((i + j) % N)] += c * w;
        }
    }
    for (auto& c : out) {
        c /= N;
        c.canonicalize();
    }
    coeffs_ = std::move(out);
}

CyclotomicNumber CyclotomicNumber::rational(const mpq_class& value, long level) {
    CyclotomicNumber x;
    x.level_ = level;
    x.coeffs_.assign(static_cast<std::size_t>(level), mpq_class(0));
    x.coeffs_[0] = value;
    x.canonicalize();
    return x;
}

CyclotomicNumber CyclotomicNumber::root_of_unity(long level, long exponent) {
    CyclotomicNumber x;
    x.level_ = level;
    x.coeffs_.assign(static_cast<std::size_t>(level), mpq_class(0));
    x.coeffs_[static_cast<std::size_t>(((exponent % level) + level) % level)] = 1;
    x.canonicalize();
    return x;
}

CyclotomicNumber CyclotomicNumber::from_coefficients(long level, std::vector<mpq_class> coeffs) {
    if (level < 1 || coeffs.size() != static_cast<std::size_t>(level))
        throw Error(ErrCode::InternalInconsistency, "bad cyclotomic coefficient vector");
    CyclotomicNumber x;
    x.level_ = level;
    x.coeffs_ = std::move(coeffs);
    x.canonicalize();
    return x;
}

bool CyclotomicNumber::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool CyclotomicNumber::operator==(const CyclotomicNumber& o) const {
    if (level_ == o.level_) return coeffs_ == o.coeffs_;
    long l = std::lcm(level_, o.level_);
    return embedded(l).coeffs_ == o.embedded(l).coeffs_;
}

CyclotomicNumber CyclotomicNumber::operator-() const {
    CyclotomicNumber x(*this);
    for (auto& c : x.coeffs_) c = -c;
    return x;
}

CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    if (a.level_ != b.level_) {
        long l = std::lcm(a.level_, b.level_);
        return a.embedded(l) + b.embedded(l);
    }
    CyclotomicNumber x(a);
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += b.coeffs_[i];
    return x; // sum of ideal members stays canonical
}

CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return a + (-b);
}

CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    if (a.level_ != b.level_) {
        long l = std::lcm(a.level_, b.level_);
        return a.embedded(l) * b.embedded(l);
    }
    const long N = a.level_;
    CyclotomicNumber x;
    x.level_ = N;
    x.coeffs_.assign(static_cast<std::size_t>(N), mpq_class(0));
    for (long i = 0; i < N; ++i) {
        const mpq_class& ca = a.coeffs_[static_cast<std::size_t>(i)];
        if (ca == 0) continue;
        for (long j = 0; j < N; ++j) {
            const mpq_class& cb = b.coeffs_[static_cast<std::size_t>(j)];
            if (cb == 0) continue;
            x.coeffs_[static_cast<std::size_t>((i + j) % N)] += ca * cb;
        }
    }
    // product of ideal members stays canonical (the ideal is closed under *)
    return x;
}

CyclotomicNumber CyclotomicNumber::scaled(const mpq_class& s) const {
    CyclotomicNumber x(*this);
    for (auto& c : x.coeffs_) c *= s;
    return x;
}

CyclotomicNumber CyclotomicNumber::galois(long a) const {
    const long N = level_;
    long am = ((a % N) + N) % N;
    if (std::gcd(am, N) != 1)
        throw Error(ErrCode::InternalInconsistency, "galois exponent not coprime to the level");
    CyclotomicNumber x;
    x.level_ = N;
    x.coeffs_.assign(static_cast<std::size_t>(N), mpq_class(0));
    for (long k = 0; k < N; ++k)
        x.coeffs_[static_cast<std::size_t>((k * am) % N)] = coeffs_[static_cast<std::size_t>(k)];
    return x; // sigma_a fixes e_N, so the permuted vector is canonical
}

CyclotomicNumber CyclotomicNumber::embedded(long new_level) const {
    if (new_level == level_) return *this;
    if (new_level % level_ != 0)
        throw Error(ErrCode::InternalInconsistency, "cyclotomic embedding needs a divisible level");
    const long step = new_level / level_;
    CyclotomicNumber x;
    x.level_ = new_level;
    x.coeffs_.assign(static_cast<std::size_t>(new_level), mpq_class(0));
    for (long k = 0; k < level_; ++k)
        x.coeffs_[static_cast<std::size_t>(k * step)] = coeffs_[static_cast<std::size_t>(k)];
    x.canonicalize();
    return x;
}

std::optional<mpq_class> CyclotomicNumber::as_rational() const {
    const long N = level_;
    if (N == 1) return coeffs_[0];
    // Galois-stable <=> rational; a rational r is stored as r * e_N with
    // degree-0 coordinate r * phi(N) / N.
    mpq_class value = coeffs_[0] * N / euler_phi(N);
    value.canonicalize();
    if (*this == rational(value, N)) return value;
    return std::nullopt;
}

ComplexBall CyclotomicNumber::to_complex(mpfr_prec_t prec) const {
    RealBall re(prec), im(prec);
    for (long k = 0; k < level_; ++k) {
        const mpq_class& c = coeffs_[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        RealBall s(prec), co(prec);
        RealBall::sin_cos_2pi(mpq_class(k, level_), prec, s, co);
        RealBall cb = RealBall::from_rational(c, prec);
        re = re + cb * co;
        im = im + cb * s;
    }
    return ComplexBall(re, im);
}

} // namespace zeta1d
