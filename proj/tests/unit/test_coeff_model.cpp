#include "rrc/coeff_model.hpp"
#include "rrc/error.hpp"

#include <doctest.h>

using namespace rrc;

namespace {

std::vector<std::vector<Rational>> sets(std::initializer_list<std::initializer_list<long>> v) {
    std::vector<std::vector<Rational>> out;
    for (auto s : v) {
        out.emplace_back();
        for (long e : s) out.back().emplace_back(e);
    }
    return out;
}

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

}  // namespace

TEST_CASE("builtin families") {
    auto lw = builtin_model("littlewood");
    CHECK(lw.period == 1);
    CHECK(lw.bound_A == 1);
    CHECK(lw.balance_M == 1);
    CHECK(lw.balance_a == 1);
    CHECK(lw.min_at(5) == -1);
    CHECK(lw.max_at(5) == 1);

    auto nw = builtin_model("newman");
    CHECK(nw.period == 2);
    CHECK(nw.balance_M == 2);
    CHECK(nw.balance_a == 1);
    // E_k = {0, (-1)^k}
    CHECK(nw.set(1) == std::vector<Rational>{-1, 0});
    CHECK(nw.set(2) == std::vector<Rational>{0, 1});
    CHECK(nw.contains(4, 1));
    CHECK(!nw.contains(4, -1));

    auto h1 = builtin_model("height1");
    CHECK(h1.set(1).size() == 3);
    CHECK(kind_of([] { builtin_model("nope"); }) != "");
}

TEST_CASE("balanced_parameters") {
    auto lw = balanced_parameters(1, sets({{-1, 1}}));
    CHECK(lw.M == 1);
    CHECK(lw.a == 1);
    auto nw = balanced_parameters(2, sets({{-1, 0}, {0, 1}}));
    CHECK(nw.M == 2);
    CHECK(nw.a == 1);
    CHECK(kind_of([] { balanced_parameters(1, sets({{1}})); }) == "NotBalanceable");
    CHECK(kind_of([] { balanced_parameters(1, sets({{0, 1}})); }) == "NotBalanceable");

    // repeating the period does not change the answer
    auto twice = balanced_parameters(4, sets({{-1, 0}, {0, 1}, {-1, 0}, {0, 1}}));
    CHECK(twice.M == nw.M);
    CHECK(twice.a == nw.a);
    auto odd = balanced_parameters(3, sets({{-2, 1}, {0, 1}, {-1, 3}}));
    auto odd2 = balanced_parameters(6, sets({{-2, 1}, {0, 1}, {-1, 3}, {-2, 1}, {0, 1}, {-1, 3}}));
    CHECK(odd.M == odd2.M);
    CHECK(odd.a == odd2.a);
}

TEST_CASE("validate_model") {
    CoefficientModel lw = builtin_model("littlewood");
    CHECK_NOTHROW(validate_model(lw));

    CoefficientModel one_sided{"onesided", 1, sets({{0, 1}}), Rational(1), 1, Rational(1)};
    CHECK(kind_of([&] { validate_model(one_sided); }) == "NotBalanced");

    CoefficientModel too_big = lw;
    too_big.sets = sets({{-2, 1}});
    CHECK(kind_of([&] { validate_model(too_big); }) == "BoundViolated");

    // a larger declared M than necessary is still fine when the windows work
    CoefficientModel nw = builtin_model("newman");
    nw.balance_M = 4;
    nw.balance_a = 2;
    CHECK_NOTHROW(validate_model(nw));
    nw.balance_a = 3;
    CHECK(kind_of([&] { validate_model(nw); }) == "NotBalanced");
}

TEST_CASE("make_model sorts, deduplicates and derives constants") {
    auto m = make_model("custom", {{Rational(1), Rational(-1, 2), Rational(1)}, {Rational(0), Rational(-1)}});
    CHECK(m.set(1) == std::vector<Rational>{Rational(-1, 2), Rational(1)});
    CHECK(m.bound_A == 1);
    // M = 1 fails at E_2 (max 0); both length-2 windows have sums -3/2 and 1
    CHECK(m.balance_M == 2);
    CHECK(m.balance_a == 1);
}

TEST_CASE("model JSON round trip") {
    for (const char* name : {"littlewood", "newman", "height1"}) {
        auto m = builtin_model(name);
        auto back = model_from_json(model_to_json(m));
        CHECK(back.period == m.period);
        CHECK(back.sets == m.sets);
        CHECK(back.bound_A == m.bound_A);
        CHECK(back.balance_M == m.balance_M);
        CHECK(back.balance_a == m.balance_a);
    }
    auto j = nlohmann::json::parse(R"({"period":1,"sets":[["1"]]})");
    CHECK(kind_of([&] { model_from_json(j); }) == "NotBalanceable");
    auto k = nlohmann::json::parse(R"({"period":2,"sets":[["-1","0"],["0","1/1"]]})");
    CHECK(model_from_json(k).balance_M == 2);
}
