#pragma once

#include "rrc/coeff_model.hpp"
#include "rrc/numeric/fixed.hpp"
#include "rrc/params.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace rrc {

struct QMargin {
    Rational value;   // Q_n(x_j) as computed (a dyadic rational)
    Rational radius;  // certified |true - value| bound
    Rational margin;  // threshold - (|value| + radius)
};

struct PolynomialCertificate {
    std::vector<Rational> coefficients;  // 1, eps_1..eps_n
    std::vector<Rational> targets;
    /// alpha e^{-2 beta} / (2(s - 1)) for the beta that drove degree selection, rounded down.
    Rational q_threshold;
    /// Same quantity with the Jensen constant C(A), rounded down.
    Rational q_threshold_rigorous;
    std::vector<QMargin> q_margins;
    /// A e^{-n alpha} / (alpha (L + n)), rounded up.
    Rational q_tail_bound;
    std::vector<std::pair<Rational, Rational>> brackets;
    long root_count = 0;

    long degree() const { return static_cast<long>(coefficients.size()) - 1; }
};

/// (1, eps_1, ..., eps_n). Throws Error(MembershipViolation) naming the first k with eps_k not in E_k.
PolynomialCertificate assemble_polynomial(const CoefficientModel& model, const std::vector<Rational>& eps);

/// Integer coefficients D c_k for the least common denominator D of the c_k.
std::vector<Integer> integer_coefficients(const std::vector<Rational>& coefficients);

/// Sign of sum c_k x^k at rational x, exactly (homogeneous Horner over the integers).
int exact_sign(const std::vector<Integer>& coefficients, const Rational& x);
inline int exact_sign(const PolynomialCertificate& cert, const Rational& x) {
    return exact_sign(integer_coefficients(cert.coefficients), x);
}

struct SignCount {
    long sign_changes = 0;
    long exact_zeros = 0;
};

/// Strict sign changes between adjacent grid points; exact zeros are counted
/// separately and split the sequence.
SignCount count_sign_changes(const PolynomialCertificate& cert, const std::vector<Rational>& grid);

/// Q_n(x) = 1/L + sum eps_k x^k / (L + k) by Horner at `frac_bits`, with radius (n + 2) 2^-frac_bits.
QMargin evaluate_q(const std::vector<Rational>& coefficients, long L, const Rational& x, int frac_bits,
                   const Rational& threshold);

/// alpha e^{-2 beta} / (2(s - 1)), rounded down.
Rational q_threshold(const Rational& alpha, int s, const Rational& beta);

/// Fills q_threshold, q_threshold_rigorous, q_margins and q_tail_bound. Throws
/// Error(SmallnessFailed) when some |Q_n(x_j)| + radius reaches q_threshold.
void check_q_smallness(PolynomialCertificate& cert, const BuildParameters& params, bool enforce = true);

struct CertifyOptions {
    int max_depth = 64;
    long evaluation_budget = 1024;
};

/// Sign-change brackets inside I(alpha): the targets plus midpoints first, then
/// breadth-first bisection of equal-sign gaps. Throws Error(NotEnoughRoots) below r.
void certify(PolynomialCertificate& cert, const BuildParameters& params, const CertifyOptions& options = {});

/// Independent pass: every bracket lies in [lo, hi], the brackets are ordered and
/// disjoint, and the endpoint signs are opposite. Returns false on the first failure.
bool brackets_valid(const PolynomialCertificate& cert, const Rational& lo, const Rational& hi);

}  // namespace rrc
