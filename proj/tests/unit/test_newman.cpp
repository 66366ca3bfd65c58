#include "rrc/error.hpp"
#include "rrc/newman.hpp"

#include <doctest.h>

#include <sstream>

using namespace rrc;
using numeric::fixed_from_rational;

namespace {

Rational ulp(int B) { return Rational(Integer(1), Integer(1) << B); }

ComplexFixed point(const Rational& re, const Rational& im, int B) { return ComplexFixed::from_rational(re, im, B); }

Rational dist(const ComplexFixed& z, const Rational& re, const Rational& im) {
    return std::max(abs(Rational(z.re().to_rational() - re)), abs(Rational(z.im().to_rational() - im)));
}

// s = 1 instance with x_1 = 97/100.
BuildParameters toy(long n, long long N, int B) {
    BuildParameters p;
    p.s = 1;
    p.eta = Rational(1, 8);
    p.mu = 1 - p.eta;
    p.alpha = p.eta / 2;
    p.ell = 32;
    p.n = n;
    p.fft_size = N;
    p.precision_bits = B;
    p.delta = Rational(1, 24);
    return p;
}

}  // namespace

TEST_CASE("blaschke_eval") {
    const int B = 64;
    const std::vector<Rational> one{Rational(1, 2)};
    // s = 1, t = 1/2, z = 1: (1 - t)/(t (t - 1)) = -1/t
    CHECK(dist(blaschke_eval(one, 1, ComplexFixed::one(B)), -2, 0) <= 8 * ulp(B));
    // z = 0: prod 1/t_j^2
    const std::vector<Rational> xs{Rational(9, 10), Rational(19, 20), Rational(99, 100)};
    const Rational mu(15, 16);
    Rational expect(1);
    for (const auto& x : xs) expect /= (mu * x) * (mu * x);
    CHECK(dist(blaschke_eval(xs, mu, ComplexFixed::zero(B)), expect, 0) <= 64 * ulp(B));
    // |z| = 1: |B| = prod 1/(mu x_j)
    Rational modulus(1);
    for (const auto& x : xs) modulus /= mu * x;
    for (long long j : {1LL, 5LL, 13LL}) {
        ComplexFixed z = numeric::root_of_unity(j, 32, B);
        ComplexFixed b = blaschke_eval(xs, mu, z);
        CHECK(abs(Rational(b.norm() - modulus * modulus)) <= 4096 * ulp(B));
    }
    CHECK_THROWS_AS(blaschke_eval(one, 1, point(Rational(1, 2), 0, B)), Error);
}

TEST_CASE("g_ell_eval") {
    const int B = 64;
    CHECK(dist(g_ell_eval(7, ComplexFixed::one(B)), 0, 0) <= 16 * ulp(B));
    CHECK(dist(g_ell_eval(2, point(-1, 0, B)), 2, 0) <= 16 * ulp(B));
    // double root at 1: the symmetric difference quotient vanishes like h^2
    for (long ell : {3L, 10L}) {
        const Rational h(1, 1 << 12);
        ComplexFixed plus = g_ell_eval(ell, point(1 + h, 0, B));
        ComplexFixed minus = g_ell_eval(ell, point(1 - h, 0, B));
        const Rational q = (plus.re().to_rational() - minus.re().to_rational()) / (2 * h);
        CHECK(abs(q) < Rational(ell * ell * ell, 1 << 10));
    }
}

TEST_CASE("decomposition identity and structure") {
    auto p = select_parameters(builtin_model("littlewood"), 2);
    auto t = target_points(p);
    auto d = compute_decomposition(p, t, {.enforce_delta = false});
    REQUIRE(d.degree() == p.n);
    CHECK(d.sum_bound == d.U.front());
    CHECK(d.tail_bound == d.U.back());
    for (std::size_t k = 0; k + 1 < d.U.size(); ++k) {
        CHECK(d.U[k] >= d.U[k + 1]);
        CHECK(d.U[k].to_rational() >= d.nu[k].abs().to_rational() + d.U[k + 1].to_rational() - ulp(p.precision_bits - 2));
    }
    CHECK(d.max_imag.to_rational() <= d.numeric_slack.to_rational());
    const Rational residual = verify_decomposition(d, t.points);
    CHECK(residual <= decomposition_residual_threshold(d));
    // the threshold recomputed from the bound fields
    Rational mu_pow(1);
    for (long k = 0; k <= p.n; ++k) mu_pow *= p.mu;
    CHECK(decomposition_residual_threshold(d) ==
          d.tail_bound.to_rational() * mu_pow + Rational(static_cast<long>(d.fft_size)) * ulp(p.precision_bits - 6));
    CHECK(!d.delta_gate);
    CHECK_THROWS_AS(compute_decomposition(p, t), Error);

    SUBCASE("perturbing nu_0 by 2 delta breaks the identity") {
        auto bad = d;
        bad.nu[0] += fixed_from_rational(2 * p.delta, p.precision_bits);
        CHECK(decomposition_residual(bad, t.points) >= 2 * p.delta - residual);
        CHECK_THROWS_AS(verify_decomposition(bad, t.points), Error);
    }
    SUBCASE("no targets") {
        CHECK(decomposition_residual(d, {}) == 0);
    }
    SUBCASE("thread count does not change the result") {
        auto d4 = compute_decomposition(p, t, {.enforce_delta = false, .threads = 4});
        CHECK(d4.nu == d.nu);
        CHECK(d4.U == d.U);
    }
    SUBCASE("csv dump") {
        std::ostringstream out;
        write_decomposition_csv(out, d);
        const std::string s = out.str();
        CHECK(s.rfind("k,nu_k,U_k\n", 0) == 0);
        CHECK(std::count(s.begin(), s.end(), '\n') == p.n + 3);
    }
}

TEST_CASE("FFT path matches direct summation on an s = 1 toy instance") {
    const int B = 64;
    auto p = toy(60, 1024, B);
    const std::vector<Rational> x{Rational(97, 100)};
    auto fast = compute_decomposition(p, x, {.enforce_delta = false});
    auto slow = compute_decomposition(p, x, {.enforce_delta = false, .direct = true});
    for (long k = 0; k <= p.n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        CHECK(abs(Rational(fast.nu[i].to_rational() - slow.nu[i].to_rational())) <= ulp(B - 6));
    }
    CHECK(verify_decomposition(fast, x) <= decomposition_residual_threshold(fast));
}

TEST_CASE("aliasing guard") {
    auto p = toy(60, 128, 64);
    const std::vector<Rational> x{Rational(97, 100)};
    try {
        compute_decomposition(p, x, {.enforce_delta = false});
        FAIL("expected AliasingTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == "AliasingTooLarge");
        CHECK(e.stage() == Stage::decomposition);
    }
}

TEST_CASE("retry step shrinks sum |nu|") {
    auto model = builtin_model("littlewood");
    auto p1 = select_parameters(model, 2);
    ParameterOverrides ov;
    ov.eta = p1.eta / 2;
    ov.ell = p1.ell * 2;
    auto p2 = select_parameters(model, 2, ov);
    auto d1 = compute_decomposition(p1, target_points(p1), {.enforce_delta = false});
    auto d2 = compute_decomposition(p2, target_points(p2), {.enforce_delta = false});
    CHECK(d2.sum_bound <= d1.sum_bound);
}
