#pragma once

#include "rrc/coeff_model.hpp"
#include "rrc/numeric/real.hpp"
#include "rrc/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rrc {

/// How the degree and the decomposition gate are chosen.
///
/// rigorous:  n from the sufficient-degree inequality with the Jensen constant
///            C(A) = (9 pi / sqrt 2) log(4 max(1, A)), and sum |nu_k| < delta enforced
///            (with eta/ell retries).
/// practical: n from the same inequality with a calibrated constant in place of
///            C(A); sum |nu_k| < delta is measured and reported but not enforced.
///            Roots are still certified exactly by sign changes.
enum class Profile { practical, rigorous };

Profile parse_profile(const std::string& name);
std::string to_string(Profile profile);

/// Calibrated Jensen constant for degree selection in the practical profile.
inline Rational default_practical_jensen_c() { return Rational(1, 16); }

struct ParameterOverrides {
    std::optional<Rational> eta;
    std::optional<long> ell;
    std::optional<int> s;
    bool s_r_plus_one = false;
    std::optional<int> precision_bits;
    std::optional<long long> fft_size;
    std::optional<long> degree;
    std::optional<Rational> c_prec;
    std::optional<Rational> degree_jensen_c;
    /// Hard cap on the selected degree; exceeding it raises Infeasible.
    long max_degree = 2'000'000;
};

struct BuildParameters {
    Profile profile = Profile::practical;
    int r = 1;
    int s = 2;
    Rational eta;
    Rational alpha;    // eta / (2s)
    Rational mu;       // 1 - eta / s
    long L = 1;
    long n = 0;
    Rational delta;
    Rational Lambda;   // 3 Psi
    Rational Psi;      // 3MA + 1
    long ell = 1;
    int precision_bits = 64;
    long long fft_size = 2;
    Rational c_prec;

    // Model constants.
    Rational A;
    int M = 1;
    Rational a;

    /// Upper bound on (9 pi/sqrt 2) log(4 max(1, A)).
    Rational jensen_C;
    /// Upper bound on jensen_C / alpha + L log(1/(1 - 2 alpha)).
    Rational beta;
    /// Constant used in place of jensen_C when selecting n (equal to jensen_C when rigorous).
    Rational degree_jensen_C;
    /// Upper bound on the budget used for degree selection.
    Rational beta_degree;

    /// Contour radius for the aliasing estimate, 1 - eta/(2s).
    Rational contour_radius() const { return 1 - eta / (2 * s); }
};

/// Points x_1 < ... < x_s tiling I(alpha) = [1 - 2 alpha, 1 - alpha] into s - 1 equal parts.
struct TargetPoints {
    std::vector<Rational> points;
    Integer common_denominator;
    Rational product_lower_bound;  // exact product of the points

    std::size_t size() const { return points.size(); }
};

/// Upper bound on C(A) = (9 pi / sqrt 2) log(4 max(1, A)), rounded up at 128 bits.
Rational jensen_constant(const Rational& A);

/// Upper bound on C / alpha + L log(1 / (1 - 2 alpha)).
Rational jensen_budget(const Rational& C, const Rational& alpha, long L);

/// True iff n alpha + log(alpha (L + n) / A) + log(alpha / (2(s - 1))) > 2 beta, with the
/// left side rounded down and beta an upper bound (so "true" is certified).
bool degree_suffices(long n, const Rational& alpha, long L, int s, const Rational& A, const Rational& beta);

/// Smallest n for which degree_suffices holds.
long select_degree(const Rational& alpha, long L, int s, const Rational& A, const Rational& beta);

/// Upper bound on max_{|z| = u} |B(z) G_ell(z)| used by the contour-shift estimates:
/// 3^s (1 - eta)^-2 u^{-ell-1} (2 + 2/ell).
numeric::Real contour_majorant(int s, const Rational& eta, long ell);

/// Upper bound on sum_{t >= 1} |c_{k + tN}| valid for every k >= 0.
numeric::Real aliasing_bound(int s, const Rational& eta, long ell, long long N);

/// Upper bound on sum_{i > n} |nu_i| = mu sum_{i > n} |c_i|.
numeric::Real decomposition_tail_bound(int s, const Rational& eta, const Rational& mu, long ell, long n);

/// Smallest power of two N > n + 1 whose aliasing bound is below 2^-(B+4).
long long select_fft_size(int s, const Rational& eta, long ell, long n, int precision_bits);

BuildParameters select_parameters(const CoefficientModel& model, int r, const ParameterOverrides& overrides = {},
                                  Profile profile = Profile::practical);

/// Exact checks of every BuildParameters invariant, including the two trap safety
/// inequalities mu Lambda - Psi >= Psi and (1/L + delta) Lambda + A <= Psi / M.
/// Throws Error(Infeasible) naming the first violated invariant.
void check_parameters(const BuildParameters& p);

TargetPoints target_points(const BuildParameters& params);
/// Same layout for explicit (s, alpha); used by tests and tooling.
TargetPoints target_points(int s, const Rational& alpha, const Rational& eta);

nlohmann::json params_to_json(const BuildParameters& p);
BuildParameters params_from_json(const nlohmann::json& j);

}  // namespace rrc
