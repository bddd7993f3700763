#ifndef ZETA1D_NUMERIC_HPP
#define ZETA1D_NUMERIC_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

#include "zeta1d/errors.hpp"

namespace zeta1d {

/// RAII value wrapper around mpfr_t.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Mpfr(const Mpfr& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Mpfr(Mpfr&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

/// Real number known to lie in [mid - rad, mid + rad].
///
/// Midpoints carry the working precision; radii are kept at a fixed small
/// precision and always rounded upward, so every operation yields a true
/// enclosure (each correctly rounded midpoint op adds one ulp to the radius).
class RealBall {
public:
    RealBall() : RealBall(64) {}
    explicit RealBall(mpfr_prec_t prec);

    static RealBall from_rational(const mpq_class& q, mpfr_prec_t prec);
    static RealBall from_integer(const mpz_class& z, mpfr_prec_t prec);
    static RealBall from_long(long v, mpfr_prec_t prec);
    static RealBall pi(mpfr_prec_t prec);

    const Mpfr& mid() const { return mid_; }
    const Mpfr& rad() const { return rad_; }
    mpfr_prec_t prec() const { return mid_.prec(); }

    bool contains_zero() const;
    bool is_nonzero() const { return !contains_zero(); }
    /// True when [mid-rad, mid+rad] contains q.
    bool contains(const mpq_class& q) const;
    /// True when the two enclosures intersect.
    bool overlaps(const RealBall& o) const;
    /// rad <= 2^-bits * max(1, |mid|)
    bool meets_tolerance(long bits) const;
    /// rad <= eps (an absolute rational bound)
    bool within_absolute(const mpq_class& eps) const;

    RealBall operator-() const;
    RealBall abs() const;
    /// Same midpoint with the radius enlarged by an exact bound.
    RealBall inflated(const mpq_class& extra) const;

    friend RealBall operator+(const RealBall& a, const RealBall& b);
    friend RealBall operator-(const RealBall& a, const RealBall& b);
    friend RealBall operator*(const RealBall& a, const RealBall& b);
    /// Throws PrecisionUnachievable when the divisor ball straddles zero.
    friend RealBall operator/(const RealBall& a, const RealBall& b);

    RealBall sqrt() const;
    /// Integer power (e may be negative; base must exclude zero for e < 0).
    RealBall pow(long e) const;
    /// Natural log; the ball must be strictly positive.
    RealBall log() const;
    RealBall exp() const;

    /// sin(2*pi*q) and cos(2*pi*q) for exact rational q.
    static void sin_cos_2pi(const mpq_class& turns, mpfr_prec_t prec, RealBall& sin_out,
                            RealBall& cos_out);

    std::string to_decimal(std::size_t digits = 30) const;
    std::string radius_decimal() const;
    double to_double() const { return mid_.to_double(); }

private:
    Mpfr mid_;
    Mpfr rad_; // nonnegative, 64-bit, upward-rounded
    void bump_radius_ulp();
    friend class ComplexBall;
};

/// Rectangular complex enclosure.
class ComplexBall {
public:
    ComplexBall() = default;
    explicit ComplexBall(mpfr_prec_t prec) : re_(prec), im_(prec) {}
    ComplexBall(RealBall re, RealBall im) : re_(std::move(re)), im_(std::move(im)) {}

    static ComplexBall from_real(const RealBall& re);
    static ComplexBall one(mpfr_prec_t prec);

    const RealBall& real() const { return re_; }
    const RealBall& imag() const { return im_; }

    ComplexBall conj() const { return ComplexBall(re_, -im_); }
    ComplexBall operator-() const { return ComplexBall(-re_, -im_); }

    friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b);
    friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b);
    friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b);
    ComplexBall scale(const RealBall& s) const;
    /// Multiply by i^k.
    ComplexBall mul_i_pow(long k) const;

    RealBall abs_squared() const { return re_ * re_ + im_ * im_; }

    /// Coerce to a real ball; the imaginary enclosure must contain zero.
    /// The imaginary uncertainty is folded into the returned radius.
    RealBall to_real_checked() const;

private:
    RealBall re_, im_;
};

} // namespace zeta1d

#endif
