#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace fermat {

// Minimal RAII holder for an mpfr_t.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec);
    Mpfr(const Mpfr& other);
    Mpfr(Mpfr&& other) noexcept;
    Mpfr& operator=(const Mpfr& other);
    Mpfr& operator=(Mpfr&& other) noexcept;
    ~Mpfr();

    mpfr_ptr get() noexcept { return value_; }
    mpfr_srcptr get() const noexcept { return value_; }
    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }

private:
    mpfr_t value_;
};

// A closed disc {z : |z - center| <= radius} in the complex plane.
// Every operation returns a disc containing all exact results obtainable
// from points of the operand discs; rounding errors of the center are
// folded into the radius with upward rounding.
class ComplexBall {
public:
    explicit ComplexBall(long precision_bits);

    static ComplexBall from_rational(const mpq_class& q, long precision_bits);
    // exp(i*pi*num/den)
    static ComplexBall unit_root(long num, long den, long precision_bits);
    // the real positive n-th root of a positive integer c
    static ComplexBall real_root(const mpz_class& c, unsigned long n, long precision_bits);

    long precision() const noexcept { return prec_; }

    ComplexBall operator+(const ComplexBall& o) const;
    ComplexBall operator-(const ComplexBall& o) const;
    ComplexBall operator*(const ComplexBall& o) const;
    ComplexBall operator-() const;
    ComplexBall& operator+=(const ComplexBall& o) { return *this = *this + o; }

    double real() const { return re_.to_double(); }
    double imag() const { return im_.to_double(); }
    double radius() const { return rad_.to_double(MPFR_RNDU); }
    // Upper bound on |center|.
    double center_modulus_upper() const;

    // False only when 0 is certainly outside the disc.
    bool contains_zero() const;
    bool certainly_nonzero() const { return !contains_zero(); }
    // True when the two discs intersect (a necessary condition for equality).
    bool overlaps(const ComplexBall& o) const;
    bool contains(double re, double im) const;

    std::string to_string(int digits = 17) const;

private:
    long prec_;
    Mpfr re_;
    Mpfr im_;
    Mpfr rad_;

    void add_rounding_error(const Mpfr& magnitude, long shift);
};

} // namespace fermat
