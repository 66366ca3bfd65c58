#pragma once

#include "rrc/rational.hpp"

#include <mpfr.h>

#include <string>

namespace rrc::numeric {

/// Thin RAII holder for an MPFR number. Used only for certified scalar
/// bounds (Jensen budget, exponential thresholds, geometric tails), where
/// every operation is called with an explicit directed rounding mode.
class Real {
public:
    static constexpr mpfr_prec_t kDefaultPrecision = 256;

    explicit Real(mpfr_prec_t precision = kDefaultPrecision) { mpfr_init2(v_, precision); mpfr_set_zero(v_, 1); }
    Real(const Rational& q, mpfr_rnd_t rnd, mpfr_prec_t precision = kDefaultPrecision) : Real(precision) {
        mpfr_set_q(v_, q.get_mpq_t(), rnd);
    }
    static Real from_long(long value, mpfr_prec_t precision = kDefaultPrecision) {
        Real r(precision);
        mpfr_set_si(r.v_, value, MPFR_RNDN);
        return r;
    }
    Real(const Real& other) : Real(mpfr_get_prec(other.v_)) { mpfr_set(v_, other.v_, MPFR_RNDN); }
    Real(Real&& other) noexcept : Real(mpfr_get_prec(other.v_)) { mpfr_swap(v_, other.v_); }
    Real& operator=(const Real& other) {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    /// Exact conversion (MPFR values are dyadic rationals).
    Rational to_rational() const {
        Rational q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Scientific notation with `digits` significant digits, rounded in direction `rnd`.
    std::string to_string(int digits = 20, mpfr_rnd_t rnd = MPFR_RNDN) const;

    friend int compare(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }

private:
    mpfr_t v_;
};

/// Upper bound on log(q) for rational q > 0.
Real log_up(const Rational& q);
/// Lower bound on log(q) for rational q > 0.
Real log_down(const Rational& q);
/// Lower bound on exp(-x) given an upper bound x.
Real exp_neg_down(const Real& x_upper);
/// Upper bound on exp(-x) given a lower bound x.
Real exp_neg_up(const Real& x_lower);

/// Largest power of two not exceeding x, as an exponent: floor(log2(x)) for x > 0.
long floor_log2(const Real& x);

}  // namespace rrc::numeric
