#include "rrc/numeric/real.hpp"

#include <vector>

namespace rrc::numeric {

std::string Real::to_string(int digits, mpfr_rnd_t rnd) const {
    if (mpfr_zero_p(v_)) return "0";
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    const char* fmt = rnd == MPFR_RNDU ? "%.*RUe" : rnd == MPFR_RNDD ? "%.*RDe" : "%.*RNe";
    mpfr_snprintf(buf.data(), buf.size(), fmt, digits - 1, v_);
    return std::string(buf.data());
}

Real log_up(const Rational& q) {
    Real x(q, MPFR_RNDU);
    mpfr_log(x.get(), x.get(), MPFR_RNDU);
    return x;
}

Real log_down(const Rational& q) {
    Real x(q, MPFR_RNDD);
    mpfr_log(x.get(), x.get(), MPFR_RNDD);
    return x;
}

Real exp_neg_down(const Real& x_upper) {
    Real y(x_upper);
    mpfr_neg(y.get(), y.get(), MPFR_RNDN);  // exact
    mpfr_exp(y.get(), y.get(), MPFR_RNDD);
    return y;
}

Real exp_neg_up(const Real& x_lower) {
    Real y(x_lower);
    mpfr_neg(y.get(), y.get(), MPFR_RNDN);
    mpfr_exp(y.get(), y.get(), MPFR_RNDU);
    return y;
}

long floor_log2(const Real& x) {
    // MPFR stores x = m * 2^e with m in [1/2, 1).
    return static_cast<long>(mpfr_get_exp(x.get())) - 1;
}

}  // namespace rrc::numeric
