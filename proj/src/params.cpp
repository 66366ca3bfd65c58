#include "rrc/params.hpp"

#include "rrc/error.hpp"
#include "rrc/numeric/fft.hpp"

#include <algorithm>
#include <numeric>

namespace rrc {

using numeric::Real;

Profile parse_profile(const std::string& name) {
    if (name == "practical") return Profile::practical;
    if (name == "rigorous") return Profile::rigorous;
    throw Error(Stage::validation, "BadProfile", "'" + name + "' (expected practical or rigorous)");
}

std::string to_string(Profile profile) { return profile == Profile::rigorous ? "rigorous" : "practical"; }

namespace {

constexpr mpfr_prec_t kBoundPrecision = 128;

[[noreturn]] void infeasible(const std::string& what) { throw Error(Stage::validation, "Infeasible", what); }

Rational rational_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace

Rational jensen_constant(const Rational& A) {
    Real pi(kBoundPrecision), root2(kBoundPrecision), lg(kBoundPrecision);
    mpfr_const_pi(pi.get(), MPFR_RNDU);
    mpfr_mul_ui(pi.get(), pi.get(), 9, MPFR_RNDU);
    mpfr_sqrt_ui(root2.get(), 2, MPFR_RNDD);
    mpfr_div(pi.get(), pi.get(), root2.get(), MPFR_RNDU);
    Rational arg = 4 * rational_max(Rational(1), A);
    mpfr_set_q(lg.get(), arg.get_mpq_t(), MPFR_RNDU);
    mpfr_log(lg.get(), lg.get(), MPFR_RNDU);
    mpfr_mul(pi.get(), pi.get(), lg.get(), MPFR_RNDU);
    return pi.to_rational();
}

Rational jensen_budget(const Rational& C, const Rational& alpha, long L) {
    Real first(C / alpha, MPFR_RNDU, kBoundPrecision);
    Real second = numeric::log_up(1 / (1 - 2 * alpha));
    mpfr_mul_si(second.get(), second.get(), L, MPFR_RNDU);
    mpfr_add(first.get(), first.get(), second.get(), MPFR_RNDU);
    return first.to_rational();
}

bool degree_suffices(long n, const Rational& alpha, long L, int s, const Rational& A, const Rational& beta) {
    if (n < 0) return false;
    Real lhs(Rational(n) * alpha, MPFR_RNDD);
    Real t1 = numeric::log_down(alpha * (L + n) / A);
    Real t2 = numeric::log_down(alpha / (2 * (s - 1)));
    mpfr_add(lhs.get(), lhs.get(), t1.get(), MPFR_RNDD);
    mpfr_add(lhs.get(), lhs.get(), t2.get(), MPFR_RNDD);
    Real rhs(2 * beta, MPFR_RNDU);
    return compare(lhs, rhs) > 0;
}

long select_degree(const Rational& alpha, long L, int s, const Rational& A, const Rational& beta) {
    long hi = 1;
    while (!degree_suffices(hi, alpha, L, s, A, beta)) hi *= 2;
    long lo = hi / 2;  // fails (or is 0, for which we test explicitly below)
    if (lo == 0 && degree_suffices(0, alpha, L, s, A, beta)) return 0;
    while (hi - lo > 1) {
        long mid = lo + (hi - lo) / 2;
        if (degree_suffices(mid, alpha, L, s, A, beta)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

Real contour_majorant(int s, const Rational& eta, long ell) {
    const Rational u = 1 - eta / (2 * s);
    Integer three_s;
    mpz_ui_pow_ui(three_s.get_mpz_t(), 3, static_cast<unsigned long>(s));
    Rational exact = Rational(three_s) / ((1 - eta) * (1 - eta)) * (2 + Rational(2, ell));
    exact.canonicalize();
    Real k(exact, MPFR_RNDU, kBoundPrecision);
    Real inv_u(1 / u, MPFR_RNDU, kBoundPrecision);
    mpfr_pow_ui(inv_u.get(), inv_u.get(), static_cast<unsigned long>(ell + 1), MPFR_RNDU);
    mpfr_mul(k.get(), k.get(), inv_u.get(), MPFR_RNDU);
    return k;
}

Real aliasing_bound(int s, const Rational& eta, long ell, long long N) {
    const Rational u = 1 - eta / (2 * s);
    Real uN(u, MPFR_RNDU, kBoundPrecision);
    mpfr_pow_ui(uN.get(), uN.get(), static_cast<unsigned long>(N), MPFR_RNDU);
    Real denom(kBoundPrecision);
    mpfr_ui_sub(denom.get(), 1, uN.get(), MPFR_RNDD);
    Real k = contour_majorant(s, eta, ell);
    mpfr_mul(k.get(), k.get(), uN.get(), MPFR_RNDU);
    mpfr_div(k.get(), k.get(), denom.get(), MPFR_RNDU);
    return k;
}

Real decomposition_tail_bound(int s, const Rational& eta, const Rational& mu, long ell, long n) {
    const Rational u = 1 - eta / (2 * s);
    Real un(u, MPFR_RNDU, kBoundPrecision);
    mpfr_pow_ui(un.get(), un.get(), static_cast<unsigned long>(n + 2), MPFR_RNDU);
    Real k = contour_majorant(s, eta, ell);
    mpfr_mul(k.get(), k.get(), un.get(), MPFR_RNDU);
    Real factor(mu / (1 - u), MPFR_RNDU, kBoundPrecision);
    mpfr_mul(k.get(), k.get(), factor.get(), MPFR_RNDU);
    return k;
}

long long select_fft_size(int s, const Rational& eta, long ell, long n, int precision_bits) {
    long long N = 2;
    while (N <= n + 1) N *= 2;
    Real target = Real::from_long(1, kBoundPrecision);
    mpfr_div_2si(target.get(), target.get(), precision_bits + 4, MPFR_RNDN);
    while (compare(aliasing_bound(s, eta, ell, N), target) >= 0) {
        if (N > (1LL << 40)) infeasible("no FFT size up to 2^40 meets the aliasing criterion");
        N *= 2;
    }
    return N;
}

BuildParameters select_parameters(const CoefficientModel& model, int r, const ParameterOverrides& ov,
                                  Profile profile) {
    if (r < 1) infeasible("r must be at least 1");
    BuildParameters p;
    p.profile = profile;
    p.r = r;
    p.A = model.bound_A;
    p.M = model.balance_M;
    p.a = model.balance_a;
    const Rational M(p.M);

    p.Psi = 3 * M * p.A + 1;
    p.Lambda = 3 * p.Psi;
    p.delta = std::min(Rational(Rational(1) / (9 * M)), Rational(p.a / (6 * M * p.Psi)));

    p.s = ov.s ? *ov.s : (ov.s_r_plus_one ? r + 1 : 2 * r);
    if (p.s < 2) infeasible("s must be at least 2");
    p.eta = ov.eta ? *ov.eta : Rational(1, 8);
    if (p.eta <= 0 || p.eta >= Rational(1, 3)) infeasible("eta must lie in (0, 1/3)");
    p.alpha = p.eta / (2 * p.s);
    p.mu = 1 - p.eta / p.s;

    Rational L0 = std::max({Rational(6 * M * p.Psi / p.a), Rational(9 * M), Rational(2 * p.s / p.eta)});
    p.L = ceil(L0).get_si();

    long ell_min = floor(2 / p.delta).get_si() + 1;
    p.ell = ov.ell ? *ov.ell : ell_min;

    p.jensen_C = jensen_constant(p.A);
    p.beta = jensen_budget(p.jensen_C, p.alpha, p.L);
    if (profile == Profile::rigorous) {
        p.degree_jensen_C = p.jensen_C;
    } else {
        p.degree_jensen_C = ov.degree_jensen_c ? *ov.degree_jensen_c : default_practical_jensen_c();
    }
    p.beta_degree = jensen_budget(p.degree_jensen_C, p.alpha, p.L);

    p.c_prec = ov.c_prec ? *ov.c_prec : Rational(3);
    p.precision_bits = ov.precision_bits ? *ov.precision_bits : static_cast<int>(ceil(p.c_prec * r).get_si()) + 64;

    p.n = ov.degree ? *ov.degree : select_degree(p.alpha, p.L, p.s, p.A, p.beta_degree);
    if (p.n > ov.max_degree) {
        infeasible("selected degree " + std::to_string(p.n) + " exceeds the cap " + std::to_string(ov.max_degree));
    }
    p.fft_size = ov.fft_size ? *ov.fft_size : select_fft_size(p.s, p.eta, p.ell, p.n, p.precision_bits);
    check_parameters(p);
    return p;
}

void check_parameters(const BuildParameters& p) {
    const Rational M(p.M);
    if (p.Psi != 3 * M * p.A + 1 || p.Lambda != 3 * p.Psi) infeasible("Psi = 3MA + 1 and Lambda = 3 Psi");
    if (p.delta <= 0 || p.delta > Rational(1) / (9 * M) || p.delta > p.a / (6 * M * p.Psi)) {
        infeasible("delta <= min(1/(9M), a/(6M(3MA+1)))");
    }
    if (p.alpha != p.eta / (2 * p.s) || p.mu != 1 - p.eta / p.s) infeasible("alpha = eta/(2s), mu = 1 - eta/s");
    const Rational L(p.L);
    if (L < 6 * M * p.Psi / p.a || L < 9 * M || L < 2 * p.s / p.eta) {
        infeasible("L >= max(6M(3MA+1)/a, 9M, 2s/eta)");
    }
    if (Rational(p.ell) <= 2 / p.delta) infeasible("ell > 2/delta");
    if (p.fft_size <= p.n + 1 || !numeric::is_power_of_two(p.fft_size)) {
        infeasible("N must be a power of two greater than n + 1");
    }
    if ((L + 1) / L * p.mu > 1 - p.eta / (2 * p.s)) infeasible("(L+1)/L * mu <= 1 - eta/(2s)");
    if (p.mu * p.Lambda - p.Psi < p.Psi) infeasible("mu Lambda - Psi >= Psi");
    if ((1 / L + p.delta) * p.Lambda + p.A > p.Psi / M) infeasible("(1/L + delta) Lambda + A <= Psi / M");
    if (p.precision_bits < 16) infeasible("precision_bits must be at least 16");
}

TargetPoints target_points(int s, const Rational& alpha, const Rational& eta) {
    if (s < 2) infeasible("target layout needs s >= 2");
    TargetPoints t;
    const Rational start = 1 - 2 * alpha;
    const Rational step = alpha / (s - 1);
    Integer den(1);
    Rational product(1);
    for (int j = 0; j < s; ++j) {
        Rational x = start + step * j;
        x.canonicalize();
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
        product *= x;
        t.points.push_back(x);
    }
    t.common_denominator = den;
    t.product_lower_bound = product;
    if (product < 1 - eta) {
        throw Error(Stage::validation, "ProductTooSmall", "prod x_j = " + to_decimal(product) + " < 1 - eta");
    }
    return t;
}

TargetPoints target_points(const BuildParameters& params) { return target_points(params.s, params.alpha, params.eta); }

nlohmann::json params_to_json(const BuildParameters& p) {
    return nlohmann::json{
        {"profile", to_string(p.profile)},
        {"r", p.r},
        {"s", p.s},
        {"eta", to_string(p.eta)},
        {"alpha", to_string(p.alpha)},
        {"mu", to_string(p.mu)},
        {"L", p.L},
        {"n", p.n},
        {"delta", to_string(p.delta)},
        {"Lambda", to_string(p.Lambda)},
        {"Psi", to_string(p.Psi)},
        {"ell", p.ell},
        {"precision_bits", p.precision_bits},
        {"fft_size", p.fft_size},
        {"c_prec", to_string(p.c_prec)},
        {"A", to_string(p.A)},
        {"M", p.M},
        {"a", to_string(p.a)},
        {"jensen_C", to_string(p.jensen_C)},
        {"jensen_C_decimal", to_decimal(p.jensen_C)},
        {"beta", to_string(p.beta)},
        {"beta_decimal", to_decimal(p.beta)},
        {"degree_jensen_C", to_string(p.degree_jensen_C)},
        {"beta_degree", to_string(p.beta_degree)},
    };
}

BuildParameters params_from_json(const nlohmann::json& j) {
    auto rat = [&](const char* key) { return parse_rational(j.at(key).get<std::string>()); };
    BuildParameters p;
    p.profile = parse_profile(j.at("profile").get<std::string>());
    p.r = j.at("r").get<int>();
    p.s = j.at("s").get<int>();
    p.eta = rat("eta");
    p.alpha = rat("alpha");
    p.mu = rat("mu");
    p.L = j.at("L").get<long>();
    p.n = j.at("n").get<long>();
    p.delta = rat("delta");
    p.Lambda = rat("Lambda");
    p.Psi = rat("Psi");
    p.ell = j.at("ell").get<long>();
    p.precision_bits = j.at("precision_bits").get<int>();
    p.fft_size = j.at("fft_size").get<long long>();
    p.c_prec = rat("c_prec");
    p.A = rat("A");
    p.M = j.at("M").get<int>();
    p.a = rat("a");
    p.jensen_C = rat("jensen_C");
    p.beta = rat("beta");
    p.degree_jensen_C = rat("degree_jensen_C");
    p.beta_degree = rat("beta_degree");
    return p;
}

}  // namespace rrc
