#include "zeta1d/numeric.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace zeta1d {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

// rad += 2^(exp(x) - prec(x)), an over-estimate of the rounding error of the
// correctly rounded midpoint x.
void add_ulp(Mpfr& rad, const Mpfr& x) {
    if (x.is_zero()) return;
    mpfr_exp_t e = mpfr_get_exp(x.raw());
    Mpfr ulp(kRadPrec);
    mpfr_set_ui_2exp(ulp.raw(), 1, e - x.prec(), MPFR_RNDU);
    mpfr_add(rad.raw(), rad.raw(), ulp.raw(), MPFR_RNDU);
}

// |x.mid| + x.rad, rounded up.
Mpfr upper_abs(const RealBall& x) {
    Mpfr u(kRadPrec);
    mpfr_abs(u.raw(), x.mid().raw(), MPFR_RNDU);
    mpfr_add(u.raw(), u.raw(), x.rad().raw(), MPFR_RNDU);
    return u;
}

// |x.mid| - x.rad, rounded down, floored at 0.
Mpfr lower_abs(const RealBall& x) {
    Mpfr l(kRadPrec);
    mpfr_abs(l.raw(), x.mid().raw(), MPFR_RNDD);
    mpfr_sub(l.raw(), l.raw(), x.rad().raw(), MPFR_RNDD);
    if (mpfr_sgn(l.raw()) < 0) mpfr_set_zero(l.raw(), 1);
    return l;
}

} // namespace

RealBall::RealBall(mpfr_prec_t prec) : mid_(prec), rad_(kRadPrec) {}

void RealBall::bump_radius_ulp() { add_ulp(rad_, mid_); }

RealBall RealBall::from_rational(const mpq_class& q, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_q(r.mid_.raw(), q.get_mpq_t(), MPFR_RNDN);
    if (t != 0) r.bump_radius_ulp();
    return r;
}

RealBall RealBall::from_integer(const mpz_class& z, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_z(r.mid_.raw(), z.get_mpz_t(), MPFR_RNDN);
    if (t != 0) r.bump_radius_ulp();
    return r;
}

RealBall RealBall::from_long(long v, mpfr_prec_t prec) {
    RealBall r(prec);
    mpfr_set_si(r.mid_.raw(), v, MPFR_RNDN);
    return r;
}

RealBall RealBall::pi(mpfr_prec_t prec) {
    RealBall r(prec);
    mpfr_const_pi(r.mid_.raw(), MPFR_RNDN);
    r.bump_radius_ulp();
    return r;
}

bool RealBall::contains_zero() const {
    Mpfr a(kRadPrec);
    mpfr_abs(a.raw(), mid_.raw(), MPFR_RNDD);
    return mpfr_cmp(a.raw(), rad_.raw()) <= 0;
}

namespace {

// A finite mpfr value is an exact rational; the enclosure predicates below
// are therefore decided exactly.
mpq_class to_exact_rational(const Mpfr& x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x.raw());
    return q;
}

} // namespace

bool RealBall::contains(const mpq_class& q) const {
    mpq_class d = to_exact_rational(mid_) - q;
    if (d < 0) d = -d;
    return d <= to_exact_rational(rad_);
}

bool RealBall::overlaps(const RealBall& o) const {
    mpq_class d = to_exact_rational(mid_) - to_exact_rational(o.mid_);
    if (d < 0) d = -d;
    return d <= to_exact_rational(rad_) + to_exact_rational(o.rad_);
}

bool RealBall::meets_tolerance(long bits) const {
    mpq_class m = to_exact_rational(mid_);
    if (m < 0) m = -m;
    if (m < 1) m = 1;
    mpq_class scale(1);
    if (bits >= 0)
        scale = mpq_class(1, 1) / mpq_class(mpz_class(1) << bits);
    else
        scale = mpq_class(mpz_class(1) << (-bits));
    return to_exact_rational(rad_) <= m * scale;
}

bool RealBall::within_absolute(const mpq_class& eps) const {
    return to_exact_rational(rad_) <= eps;
}

RealBall RealBall::operator-() const {
    RealBall r(*this);
    mpfr_neg(r.mid_.raw(), r.mid_.raw(), MPFR_RNDN);
    return r;
}

RealBall RealBall::abs() const {
    RealBall r(*this);
    mpfr_abs(r.mid_.raw(), r.mid_.raw(), MPFR_RNDN);
    return r;
}

RealBall RealBall::inflated(const mpq_class& extra) const {
    RealBall r(*this);
    Mpfr e(kRadPrec);
    mpfr_set_q(e.raw(), extra.get_mpq_t(), MPFR_RNDU);
    mpfr_add(r.rad_.raw(), r.rad_.raw(), e.raw(), MPFR_RNDU);
    return r;
}

RealBall operator+(const RealBall& a, const RealBall& b) {
    RealBall r(std::max(a.prec(), b.prec()));
    mpfr_add(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
    mpfr_add(r.rad_.raw(), a.rad_.raw(), b.rad_.raw(), MPFR_RNDU);
    r.bump_radius_ulp();
    return r;
}

RealBall operator-(const RealBall& a, const RealBall& b) {
    RealBall r(std::max(a.prec(), b.prec()));
    mpfr_sub(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
    mpfr_add(r.rad_.raw(), a.rad_.raw(), b.rad_.raw(), MPFR_RNDU);
    r.bump_radius_ulp();
    return r;
}

RealBall operator*(const RealBall& a, const RealBall& b) {
    RealBall r(std::max(a.prec(), b.prec()));
    mpfr_mul(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
    // |a||rb| + |b||ra| + ra*rb
    Mpfr am = upper_abs(a), bm = upper_abs(b);
    Mpfr t(kRadPrec);
    mpfr_mul(t.raw(), am.raw(), b.rad_.raw(), MPFR_RNDU);
    mpfr_add(r.rad_.raw(), r.rad_.raw(), t.raw(), MPFR_RNDU);
    mpfr_mul(t.raw(), bm.raw(), a.rad_.raw(), MPFR_RNDU);
    mpfr_add(r.rad_.raw(), r.rad_.raw(), t.raw(), MPFR_RNDU);
    r.bump_radius_ulp();
    return r;
}

RealBall operator/(const RealBall& a, const RealBall& b) {
    if (b.contains_zero())
        throw Error(ErrCode::PrecisionUnachievable, "division by a ball containing zero");
    RealBall r(std::max(a.prec(), b.prec()));
    mpfr_div(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
    // |a/b - am/bm| <= (ra + |am/bm| rb) / (|bm| - rb)
    Mpfr q(kRadPrec);
    mpfr_abs(q.raw(), r.mid_.raw(), MPFR_RNDU);
    mpfr_mul(q.raw(), q.raw(), b.rad_.raw(), MPFR_RNDU);
    mpfr_add(q.raw(), q.raw(), a.rad_.raw(), MPFR_RNDU);
    Mpfr den(kRadPrec);
    mpfr_abs(den.raw(), b.mid_.raw(), MPFR_RNDD);
    mpfr_sub(den.raw(), den.raw(), b.rad_.raw(), MPFR_RNDD);
    mpfr_div(q.raw(), q.raw(), den.raw(), MPFR_RNDU);
    mpfr_add(r.rad_.raw(), r.rad_.raw(), q.raw(), MPFR_RNDU);
    r.bump_radius_ulp();
    return r;
}

RealBall RealBall::sqrt() const {
    Mpfr low = lower_abs(*this);
    if (mid_.sign() < 0 || contains_zero())
        throw Error(ErrCode::PrecisionUnachievable, "sqrt of a ball not strictly positive");
    RealBall r(prec());
    mpfr_sqrt(r.mid_.raw(), mid_.raw(), MPFR_RNDN);
    // |sqrt(x) - sqrt(m)| <= rad / sqrt(low)
    Mpfr s(kRadPrec);
    mpfr_sqrt(s.raw(), low.raw(), MPFR_RNDD);
    mpfr_div(s.raw(), rad_.raw(), s.raw(), MPFR_RNDU);
    mpfr_add(r.rad_.raw(), r.rad_.raw(), s.raw(), MPFR_RNDU);
    r.bump_radius_ulp();
    return r;
}

RealBall RealBall::pow(long e) const {
    if (e == 0) return RealBall::from_long(1, prec());
    bool inv = e < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    RealBall acc = RealBall::from_long(1, prec());
    RealBall base = *this;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    if (inv) return RealBall::from_long(1, prec()) / acc;
    return acc;
}

RealBall RealBall::log() const {
    Mpfr low = lower_abs(*this);
    if (mid_.sign() <= 0 || contains_zero())
        throw Error(ErrCode::PrecisionUnachievable, "log of a ball not strictly positive");
    RealBall r(prec());
    mpfr_log(r.mid_.raw(), mid_.raw(), MPFR_RNDN);
    // |log x - log m| <= rad / low
    Mpfr t(kRadPrec);
    mpfr_div(t.raw(), rad_.raw(), low.raw(), MPFR_RNDU);
    mpfr_add(r.rad_.raw(), r.rad_.raw(), t.raw(), MPFR_RNDU);
    r.bump_radius_ulp();
    return r;
}

RealBall RealBall::exp() const {
    // only valid for small radii: |e^(m+d) - e^m| <= e^m (e^rad - 1) <= 2 e^m rad for rad <= 1/2
    if (mpfr_cmp_d(rad_.raw(), 0.5) > 0)
        throw Error(ErrCode::PrecisionUnachievable, "exp of a wide ball");
    RealBall r(prec());
    mpfr_exp(r.mid_.raw(), mid_.raw(), MPFR_RNDN);
    Mpfr t = upper_abs(r);
    mpfr_mul(t.raw(), t.raw(), rad_.raw(), MPFR_RNDU);
    mpfr_mul_2si(t.raw(), t.raw(), 1, MPFR_RNDU);
    mpfr_add(r.rad_.raw(), r.rad_.raw(), t.raw(), MPFR_RNDU);
    r.bump_radius_ulp();
    return r;
}

void RealBall::sin_cos_2pi(const mpq_class& turns, mpfr_prec_t prec, RealBall& sin_out,
                           RealBall& cos_out) {
    // angle = 2*pi*turns as a ball, then sin/cos (Lipschitz constant 1).
    RealBall two_pi = RealBall::pi(prec) * RealBall::from_long(2, prec);
    RealBall angle = two_pi * RealBall::from_rational(turns, prec);
    RealBall s(prec), c(prec);
    mpfr_sin_cos(s.mid_.raw(), c.mid_.raw(), angle.mid().raw(), MPFR_RNDN);
    mpfr_set(s.rad_.raw(), angle.rad().raw(), MPFR_RNDU);
    mpfr_set(c.rad_.raw(), angle.rad().raw(), MPFR_RNDU);
    s.bump_radius_ulp();
    c.bump_radius_ulp();
    sin_out = s;
    cos_out = c;
}

std::string RealBall::to_decimal(std::size_t digits) const {
    char fmt[32];
    std::snprintf(fmt, sizeof fmt, "%%.%zuRe", digits);
    std::vector<char> buf(digits + 64);
    mpfr_snprintf(buf.data(), buf.size(), fmt, mid_.raw());
    return std::string(buf.data());
}

std::string RealBall::radius_decimal() const {
    std::vector<char> buf(64);
    mpfr_snprintf(buf.data(), buf.size(), "%.2Re", rad_.raw());
    return std::string(buf.data());
}

ComplexBall ComplexBall::from_real(const RealBall& re) {
    return ComplexBall(re, RealBall(re.prec()));
}

ComplexBall ComplexBall::one(mpfr_prec_t prec) {
    return ComplexBall(RealBall::from_long(1, prec), RealBall(prec));
}

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
    return ComplexBall(a.re_ + b.re_, a.im_ + b.im_);
}

ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
    return ComplexBall(a.re_ - b.re_, a.im_ - b.im_);
}

ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
    return ComplexBall(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
}

ComplexBall ComplexBall::scale(const RealBall& s) const {
    return ComplexBall(re_ * s, im_ * s);
}

ComplexBall ComplexBall::mul_i_pow(long k) const {
    switch (((k % 4) + 4) % 4) {
    case 0: return *this;
    case 1: return ComplexBall(-im_, re_);
    case 2: return ComplexBall(-re_, -im_);
    default: return ComplexBall(im_, -re_);
    }
}

RealBall ComplexBall::to_real_checked() const {
    if (!im_.contains_zero())
        throw Error(ErrCode::InternalInconsistency,
                    "expected a real value but the imaginary enclosure excludes zero");
    RealBall r = re_;
    Mpfr extra = upper_abs(im_);
    mpfr_add(r.rad_.raw(), r.rad_.raw(), extra.raw(), MPFR_RNDU);
    return r;
}

} // namespace zeta1d
