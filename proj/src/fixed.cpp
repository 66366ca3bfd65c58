#include "rrc/numeric/fixed.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <mutex>

namespace rrc::numeric {

namespace {

Integer resolve_tie(Integer q, int cmp_twice_rem_vs_div) {
    if (cmp_twice_rem_vs_div > 0 || (cmp_twice_rem_vs_div == 0 && mpz_odd_p(q.get_mpz_t()))) {
        q += 1;
    }
    return q;
}

}  // namespace

Integer round_div(const Integer& n, const Integer& d) {
    assert(d > 0);
    Integer q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (r == 0) return q;
    Integer twice = r * 2;
    return resolve_tie(std::move(q), cmp(twice, d));
}

Integer round_shift(const Integer& n, unsigned long shift) {
    if (shift == 0) return n;
    Integer q, r;
    mpz_fdiv_q_2exp(q.get_mpz_t(), n.get_mpz_t(), shift);
    mpz_fdiv_r_2exp(r.get_mpz_t(), n.get_mpz_t(), shift);
    if (r == 0) return q;
    // Compare r with 2^(shift-1).
    const auto top = mpz_sizeinbase(r.get_mpz_t(), 2);
    int c;
    if (top < shift) {
        c = -1;
    } else {
        // r has exactly `shift` bits: r >= 2^(shift-1); equality iff it is a power of two.
        c = (mpz_scan1(r.get_mpz_t(), 0) == shift - 1) ? 0 : 1;
    }
    return resolve_tie(std::move(q), c);
}

Fixed Fixed::one(int frac_bits) {
    Integer m(1);
    m <<= frac_bits;
    return Fixed(std::move(m), frac_bits);
}

Fixed Fixed::from_int(long value, int frac_bits) {
    Integer m(value);
    m <<= frac_bits;
    return Fixed(std::move(m), frac_bits);
}

Rational Fixed::to_rational() const {
    Integer den(1);
    den <<= frac_bits_;
    Rational q(mantissa_, den);
    q.canonicalize();
    return q;
}

double Fixed::to_double() const {
    return mpz_get_d(mantissa_.get_mpz_t()) / std::ldexp(1.0, frac_bits_) ;
}

Fixed Fixed::rescaled(int frac_bits) const {
    if (frac_bits >= frac_bits_) {
        Integer m = mantissa_;
        m <<= (frac_bits - frac_bits_);
        return Fixed(std::move(m), frac_bits);
    }
    return Fixed(round_shift(mantissa_, static_cast<unsigned long>(frac_bits_ - frac_bits)), frac_bits);
}

Fixed& Fixed::operator+=(const Fixed& o) {
    assert(frac_bits_ == o.frac_bits_);
    mantissa_ += o.mantissa_;
    return *this;
}

Fixed& Fixed::operator-=(const Fixed& o) {
    assert(frac_bits_ == o.frac_bits_);
    mantissa_ -= o.mantissa_;
    return *this;
}

Fixed operator*(const Fixed& a, const Fixed& b) {
    assert(a.frac_bits_ == b.frac_bits_);
    Integer prod = a.mantissa_ * b.mantissa_;
    return Fixed(round_shift(prod, static_cast<unsigned long>(a.frac_bits_)), a.frac_bits_);
}

Fixed operator*(const Fixed& a, const Rational& q) {
    Integer num = a.mantissa_ * q.get_num();
    return Fixed(round_div(num, q.get_den()), a.frac_bits_);
}

Fixed operator/(const Fixed& a, const Fixed& b) {
    assert(a.frac_bits_ == b.frac_bits_);
    assert(b.mantissa_ != 0);
    Integer num = a.mantissa_;
    num <<= a.frac_bits_;
    Integer den = b.mantissa_;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    return Fixed(round_div(num, den), a.frac_bits_);
}

std::strong_ordering operator<=>(const Fixed& a, const Fixed& b) {
    int c;
    if (a.frac_bits_ == b.frac_bits_) {
        c = cmp(a.mantissa_, b.mantissa_);
    } else {
        c = cmp(a.to_rational(), b.to_rational());
    }
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string Fixed::to_decimal() const {
    // m / 2^B = m * 5^B / 10^B exactly.
    Integer scaled;
    mpz_ui_pow_ui(scaled.get_mpz_t(), 5, static_cast<unsigned long>(frac_bits_));
    scaled *= ::abs(mantissa_);
    std::string digits = scaled.get_str();
    const auto B = static_cast<std::size_t>(frac_bits_);
    if (digits.size() <= B) digits.insert(0, B + 1 - digits.size(), '0');
    std::string whole = digits.substr(0, digits.size() - B);
    std::string frac = digits.substr(digits.size() - B);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    std::string out = (mantissa_ < 0 ? "-" : "") + whole;
    if (!frac.empty()) out += "." + frac;
    return out;
}

Fixed fixed_from_rational(const Integer& p, const Integer& q, int frac_bits) {
    assert(q != 0);
    Integer num = p;
    Integer den = q;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    num <<= frac_bits;
    return Fixed(round_div(num, den), frac_bits);
}

Fixed fixed_from_rational(const Rational& value, int frac_bits) {
    return fixed_from_rational(value.get_num(), value.get_den(), frac_bits);
}

Fixed fixed_ceil(const Rational& value, int frac_bits) {
    Integer num = value.get_num();
    num <<= frac_bits;
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), value.get_den_mpz_t());
    return Fixed(std::move(q), frac_bits);
}

Fixed fixed_floor(const Rational& value, int frac_bits) {
    Integer num = value.get_num();
    num <<= frac_bits;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), value.get_den_mpz_t());
    return Fixed(std::move(q), frac_bits);
}

ComplexFixed ComplexFixed::from_rational(const Rational& re, const Rational& im, int frac_bits) {
    return {fixed_from_rational(re, frac_bits), fixed_from_rational(im, frac_bits)};
}

ComplexFixed& ComplexFixed::operator+=(const ComplexFixed& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

ComplexFixed& ComplexFixed::operator-=(const ComplexFixed& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

ComplexFixed operator*(const ComplexFixed& a, const ComplexFixed& b) {
    const int B = a.frac_bits();
    assert(B == b.frac_bits());
    const auto shift = static_cast<unsigned long>(B);
    Integer re = a.re_.mantissa() * b.re_.mantissa() - a.im_.mantissa() * b.im_.mantissa();
    Integer im = a.re_.mantissa() * b.im_.mantissa() + a.im_.mantissa() * b.re_.mantissa();
    return {Fixed(round_shift(re, shift), B), Fixed(round_shift(im, shift), B)};
}

ComplexFixed operator*(const ComplexFixed& a, const Rational& q) {
    return {a.re_ * q, a.im_ * q};
}

ComplexFixed operator/(const ComplexFixed& a, const ComplexFixed& b) {
    const int B = a.frac_bits();
    assert(B == b.frac_bits());
    const Integer& br = b.re_.mantissa();
    const Integer& bi = b.im_.mantissa();
    Integer den = br * br + bi * bi;
    assert(den != 0);
    Integer re = a.re_.mantissa() * br + a.im_.mantissa() * bi;
    Integer im = a.im_.mantissa() * br - a.re_.mantissa() * bi;
    re <<= B;
    im <<= B;
    return {Fixed(round_div(re, den), B), Fixed(round_div(im, den), B)};
}

Rational ComplexFixed::norm() const {
    Rational r = re_.to_rational();
    Rational i = im_.to_rational();
    return r * r + i * i;
}

Rational ComplexFixed::abs_upper() const {
    Integer sq = re_.mantissa() * re_.mantissa() + im_.mantissa() * im_.mantissa();
    Integer root;
    mpz_sqrt(root.get_mpz_t(), sq.get_mpz_t());
    if (root * root < sq) root += 1;
    Integer den(1);
    den <<= frac_bits();
    Rational q(root, den);
    q.canonicalize();
    return q;
}

ComplexFixed pow(const ComplexFixed& z, unsigned long e) {
    ComplexFixed result = ComplexFixed::one(z.frac_bits());
    ComplexFixed base = z;
    bool first = true;
    while (e > 0) {
        if (e & 1UL) {
            result = first ? base : result * base;
            first = false;
        }
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

namespace {

// Sum of (-1)^k / ((2k+1) x^(2k+1)) scaled by 2^bits, each step truncated.
Integer atan_inverse(unsigned long x, unsigned long bits) {
    Integer power(1);
    power <<= bits;
    power /= x;
    Integer sum = power;
    const unsigned long x2 = x * x;
    for (unsigned long k = 1;; ++k) {
        power /= x2;
        if (power == 0) break;
        Integer term = power / (2 * k + 1);
        if (k % 2 == 1) {
            sum -= term;
        } else {
            sum += term;
        }
    }
    return sum;
}

}  // namespace

Fixed pi_fixed(int frac_bits) {
    static std::mutex mu;
    static std::map<int, Fixed> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(frac_bits); it != cache.end()) return it->second;
    }
    const auto work = static_cast<unsigned long>(frac_bits) + 32;
    Integer pi = 16 * atan_inverse(5, work) - 4 * atan_inverse(239, work);
    Fixed result(round_shift(pi, 32), frac_bits);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(frac_bits, result);
    return result;
}

namespace {

struct CosSin {
    Integer cos;
    Integer sin;
};

// cos and sin of 2*pi*g for rational g in [0, 1/8], at `work` fractional bits.
CosSin cos_sin_turns(const Rational& g, int work) {
    const auto w = static_cast<unsigned long>(work);
    if (g == 0) {
        Integer one(1);
        one <<= w;
        return {one, Integer(0)};
    }
    const Fixed pi = pi_fixed(work);
    Integer phi = round_div(2 * pi.mantissa() * g.get_num(), g.get_den());
    Integer phi2 = round_shift(phi * phi, w);

    Integer one(1);
    one <<= w;
    Integer c = one;
    Integer term = one;
    for (unsigned long k = 1; term != 0; ++k) {
        term = round_shift(term * phi2, w);
        term /= (2 * k - 1) * (2 * k);
        if (k % 2 == 1) {
            c -= term;
        } else {
            c += term;
        }
    }
    Integer s = phi;
    term = phi;
    for (unsigned long k = 1; term != 0; ++k) {
        term = round_shift(term * phi2, w);
        term /= (2 * k) * (2 * k + 1);
        if (k % 2 == 1) {
            s -= term;
        } else {
            s += term;
        }
    }
    return {c, s};
}

}  // namespace

ComplexFixed root_of_unity(long long j, long long N, int frac_bits) {
    assert(N > 0);
    j %= N;
    if (j < 0) j += N;
    const int guard = 32;
    const int work = frac_bits + guard;

    // j/N = q/4 + g with q in {0..3} and g in [0, 1/4).
    const long long quadrant = (4 * j) / N;
    Rational g(Integer(static_cast<long>(4 * j - quadrant * N)), Integer(static_cast<long>(4 * N)));
    g.canonicalize();
    Integer c, s;
    if (g <= Rational(1, 8)) {
        auto cs = cos_sin_turns(g, work);
        c = std::move(cs.cos);
        s = std::move(cs.sin);
    } else {
        Rational h = Rational(1, 4) - g;
        auto cs = cos_sin_turns(h, work);
        c = std::move(cs.sin);
        s = std::move(cs.cos);
    }
    for (long long q = 0; q < quadrant; ++q) {
        Integer next_c = -s;
        s = std::move(c);
        c = std::move(next_c);
    }
    return {Fixed(round_shift(c, guard), frac_bits), Fixed(round_shift(s, guard), frac_bits)};
}

}  // namespace rrc::numeric
