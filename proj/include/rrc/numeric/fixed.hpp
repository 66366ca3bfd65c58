#pragma once

#include "rrc/rational.hpp"

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace rrc::numeric {

/// Integer division n / d with round-half-to-even; d must be positive.
Integer round_div(const Integer& n, const Integer& d);
/// n / 2^shift with round-half-to-even.
Integer round_shift(const Integer& n, unsigned long shift);

/// Binary fixed-point number: value = mantissa * 2^-frac_bits.
///
/// Addition, subtraction and negation are exact. Every other arithmetic
/// operation rounds its exact result once, to nearest with ties to even, so
/// the error per operation is at most 2^-(frac_bits+1). Both operands of a
/// binary operation must carry the same frac_bits.
class Fixed {
public:
    Fixed() = default;
    Fixed(Integer mantissa, int frac_bits) : mantissa_(std::move(mantissa)), frac_bits_(frac_bits) {}

    static Fixed zero(int frac_bits) { return Fixed(Integer(0), frac_bits); }
    static Fixed one(int frac_bits);
    static Fixed from_int(long value, int frac_bits);

    const Integer& mantissa() const { return mantissa_; }
    Integer& mantissa() { return mantissa_; }
    int frac_bits() const { return frac_bits_; }

    Rational to_rational() const;
    double to_double() const;
    /// Rounded re-expression at a different number of fractional bits.
    Fixed rescaled(int frac_bits) const;

    Fixed operator-() const { return Fixed(-mantissa_, frac_bits_); }
    Fixed& operator+=(const Fixed& o);
    Fixed& operator-=(const Fixed& o);
    friend Fixed operator+(Fixed a, const Fixed& b) { return a += b; }
    friend Fixed operator-(Fixed a, const Fixed& b) { return a -= b; }
    friend Fixed operator*(const Fixed& a, const Fixed& b);
    /// a * q with a single rounding.
    friend Fixed operator*(const Fixed& a, const Rational& q);
    friend Fixed operator*(const Rational& q, const Fixed& a) { return a * q; }
    /// a / b with a single rounding; b must be nonzero.
    friend Fixed operator/(const Fixed& a, const Fixed& b);

    Fixed abs() const { return Fixed(::abs(mantissa_), frac_bits_); }
    int sign() const { return sgn(mantissa_); }

    friend bool operator==(const Fixed& a, const Fixed& b) {
        return a.frac_bits_ == b.frac_bits_ && a.mantissa_ == b.mantissa_;
    }
    friend std::strong_ordering operator<=>(const Fixed& a, const Fixed& b);

    /// Decimal string faithful to the stored binary value (enough digits to round-trip).
    std::string to_decimal() const;

private:
    Integer mantissa_{0};
    int frac_bits_ = 0;
};

/// |result - p/q| <= 2^-(B+1), ties to even.
Fixed fixed_from_rational(const Integer& p, const Integer& q, int frac_bits);
Fixed fixed_from_rational(const Rational& value, int frac_bits);
/// Smallest Fixed >= value / largest Fixed <= value.
Fixed fixed_ceil(const Rational& value, int frac_bits);
Fixed fixed_floor(const Rational& value, int frac_bits);

class ComplexFixed {
public:
    ComplexFixed() = default;
    ComplexFixed(Fixed re, Fixed im) : re_(std::move(re)), im_(std::move(im)) {}
    static ComplexFixed zero(int frac_bits) { return {Fixed::zero(frac_bits), Fixed::zero(frac_bits)}; }
    static ComplexFixed one(int frac_bits) { return {Fixed::one(frac_bits), Fixed::zero(frac_bits)}; }
    static ComplexFixed from_rational(const Rational& re, const Rational& im, int frac_bits);

    const Fixed& re() const { return re_; }
    const Fixed& im() const { return im_; }
    Fixed& re() { return re_; }
    Fixed& im() { return im_; }
    int frac_bits() const { return re_.frac_bits(); }

    ComplexFixed conj() const { return {re_, -im_}; }
    ComplexFixed operator-() const { return {-re_, -im_}; }
    ComplexFixed& operator+=(const ComplexFixed& o);
    ComplexFixed& operator-=(const ComplexFixed& o);
    friend ComplexFixed operator+(ComplexFixed a, const ComplexFixed& b) { return a += b; }
    friend ComplexFixed operator-(ComplexFixed a, const ComplexFixed& b) { return a -= b; }
    /// Each component is the exactly accumulated sum of products, rounded once.
    friend ComplexFixed operator*(const ComplexFixed& a, const ComplexFixed& b);
    friend ComplexFixed operator*(const ComplexFixed& a, const Rational& q);
    /// a / b = a * conj(b) / |b|^2, one rounding per component.
    friend ComplexFixed operator/(const ComplexFixed& a, const ComplexFixed& b);

    ComplexFixed rescaled(int frac_bits) const { return {re_.rescaled(frac_bits), im_.rescaled(frac_bits)}; }
    /// Exact |z|^2 as a rational.
    Rational norm() const;
    /// Upper bound on |z| as a rational with a small denominator.
    Rational abs_upper() const;

    friend bool operator==(const ComplexFixed& a, const ComplexFixed& b) = default;

private:
    Fixed re_;
    Fixed im_;
};

/// z^e for e >= 0 by binary exponentiation.
ComplexFixed pow(const ComplexFixed& z, unsigned long e);

/// pi rounded to nearest at `frac_bits` (memoized per precision).
Fixed pi_fixed(int frac_bits);

/// e^{2 pi i j / N}, each component within 2^-(B+1) + 2^-(B+20) of the true value.
/// Computed by exact octant reduction of j/N plus a Taylor series at B+32 bits.
ComplexFixed root_of_unity(long long j, long long N, int frac_bits);

}  // namespace rrc::numeric
