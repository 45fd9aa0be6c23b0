#include "fermat/complex_ball.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace fermat {

namespace {
constexpr mpfr_prec_t kRadiusPrec = 64;
}

Mpfr::Mpfr(mpfr_prec_t prec) { mpfr_init2(value_, prec); mpfr_set_zero(value_, 1); }

Mpfr::Mpfr(const Mpfr& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_swap(value_, other.value_);
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
    if (this != &other) {
        mpfr_set_prec(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

Mpfr::~Mpfr() { mpfr_clear(value_); }

ComplexBall::ComplexBall(long precision_bits)
    : prec_(precision_bits), re_(precision_bits), im_(precision_bits), rad_(kRadiusPrec) {}

// rad += magnitude * 2^(shift - prec), rounded up.
void ComplexBall::add_rounding_error(const Mpfr& magnitude, long shift) {
    Mpfr err(kRadiusPrec);
    mpfr_mul_2si(err.get(), magnitude.get(), shift - prec_, MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), err.get(), MPFR_RNDU);
}

ComplexBall ComplexBall::from_rational(const mpq_class& q, long precision_bits) {
    ComplexBall b(precision_bits);
    mpfr_set_q(b.re_.get(), q.get_mpq_t(), MPFR_RNDN);
    Mpfr mag(kRadiusPrec);
    mpfr_abs(mag.get(), b.re_.get(), MPFR_RNDU);
    b.add_rounding_error(mag, 1);
    return b;
}

ComplexBall ComplexBall::unit_root(long num, long den, long precision_bits) {
    ComplexBall b(precision_bits);
    long period = 2 * den;
    long k = ((num % period) + period) % period;
    if (k == 0) {
        mpfr_set_ui(b.re_.get(), 1, MPFR_RNDN);
        return b;
    }
    if (2 * k == period) {
        mpfr_set_si(b.re_.get(), -1, MPFR_RNDN);
        return b;
    }
    // Extra guard bits for the angle; the result is rounded to prec.
    Mpfr angle(precision_bits + 32);
    mpfr_const_pi(angle.get(), MPFR_RNDN);
    mpfr_mul_si(angle.get(), angle.get(), k, MPFR_RNDN);
    mpfr_div_si(angle.get(), angle.get(), den, MPFR_RNDN);
    mpfr_sin_cos(b.im_.get(), b.re_.get(), angle.get(), MPFR_RNDN);
    // angle error <= 8*2^-(prec+32) (three roundings on a value < 8);
    // sin/cos are 1-Lipschitz and correctly rounded.
    Mpfr one(kRadiusPrec);
    mpfr_set_ui(one.get(), 1, MPFR_RNDU);
    b.add_rounding_error(one, 2);
    return b;
}

ComplexBall ComplexBall::real_root(const mpz_class& c, unsigned long n, long precision_bits) {
    ComplexBall b(precision_bits);
    Mpfr base(std::max<long>(precision_bits, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)) + 8));
    mpfr_set_z(base.get(), c.get_mpz_t(), MPFR_RNDN);
    mpfr_rootn_ui(b.re_.get(), base.get(), n, MPFR_RNDN);
    Mpfr mag(kRadiusPrec);
    mpfr_abs(mag.get(), b.re_.get(), MPFR_RNDU);
    b.add_rounding_error(mag, 1);
    return b;
}

ComplexBall ComplexBall::operator+(const ComplexBall& o) const {
    ComplexBall r(std::min(prec_, o.prec_));
    mpfr_add(r.re_.get(), re_.get(), o.re_.get(), MPFR_RNDN);
    mpfr_add(r.im_.get(), im_.get(), o.im_.get(), MPFR_RNDN);
    mpfr_add(r.rad_.get(), rad_.get(), o.rad_.get(), MPFR_RNDU);
    Mpfr mag(kRadiusPrec);
    Mpfr tmp(kRadiusPrec);
    mpfr_abs(mag.get(), r.re_.get(), MPFR_RNDU);
    mpfr_abs(tmp.get(), r.im_.get(), MPFR_RNDU);
    mpfr_add(mag.get(), mag.get(), tmp.get(), MPFR_RNDU);
    r.add_rounding_error(mag, 1);
    return r;
}

ComplexBall ComplexBall::operator-() const {
    ComplexBall r(*this);
    mpfr_neg(r.re_.get(), r.re_.get(), MPFR_RNDN);
    mpfr_neg(r.im_.get(), r.im_.get(), MPFR_RNDN);
    return r;
}

ComplexBall ComplexBall::operator-(const ComplexBall& o) const { return *this + (-o); }

ComplexBall ComplexBall::operator*(const ComplexBall& o) const {
    const long prec = std::min(prec_, o.prec_);
    ComplexBall r(prec);
    Mpfr p1(prec), p2(prec);
    mpfr_mul(p1.get(), re_.get(), o.re_.get(), MPFR_RNDN);
    mpfr_mul(p2.get(), im_.get(), o.im_.get(), MPFR_RNDN);
    mpfr_sub(r.re_.get(), p1.get(), p2.get(), MPFR_RNDN);
    mpfr_mul(p1.get(), re_.get(), o.im_.get(), MPFR_RNDN);
    mpfr_mul(p2.get(), im_.get(), o.re_.get(), MPFR_RNDN);
    mpfr_add(r.im_.get(), p1.get(), p2.get(), MPFR_RNDN);

    // A, B: upper bounds on |center| via the 1-norm.
    Mpfr a(kRadiusPrec), b(kRadiusPrec), tmp(kRadiusPrec);
    mpfr_abs(a.get(), re_.get(), MPFR_RNDU);
    mpfr_abs(tmp.get(), im_.get(), MPFR_RNDU);
    mpfr_add(a.get(), a.get(), tmp.get(), MPFR_RNDU);
    mpfr_abs(b.get(), o.re_.get(), MPFR_RNDU);
    mpfr_abs(tmp.get(), o.im_.get(), MPFR_RNDU);
    mpfr_add(b.get(), b.get(), tmp.get(), MPFR_RNDU);

    // |a|*rb + |b|*ra + ra*rb
    mpfr_mul(r.rad_.get(), a.get(), o.rad_.get(), MPFR_RNDU);
    mpfr_mul(tmp.get(), b.get(), rad_.get(), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), tmp.get(), MPFR_RNDU);
    mpfr_mul(tmp.get(), rad_.get(), o.rad_.get(), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), tmp.get(), MPFR_RNDU);

    Mpfr m(kRadiusPrec);
    mpfr_mul(m.get(), a.get(), b.get(), MPFR_RNDU);
    r.add_rounding_error(m, 3);
    return r;
}

double ComplexBall::center_modulus_upper() const {
    return std::abs(re_.to_double(MPFR_RNDA)) + std::abs(im_.to_double(MPFR_RNDA));
}

bool ComplexBall::contains_zero() const {
    return mpfr_cmpabs(re_.get(), rad_.get()) <= 0 && mpfr_cmpabs(im_.get(), rad_.get()) <= 0;
}

bool ComplexBall::overlaps(const ComplexBall& o) const {
    ComplexBall diff = *this - o;
    return diff.contains_zero();
}

bool ComplexBall::contains(double re, double im) const {
    ComplexBall p(prec_);
    mpfr_set_d(p.re_.get(), re, MPFR_RNDN);
    mpfr_set_d(p.im_.get(), im, MPFR_RNDN);
    return overlaps(p);
}

std::string ComplexBall::to_string(int digits) const {
    std::ostringstream out;
    out.precision(digits);
    out << "[" << real() << (imag() < 0 ? " - " : " + ") << std::abs(imag()) << "i +/- "
        << radius() << "]";
    return out.str();
}

} // namespace fermat
