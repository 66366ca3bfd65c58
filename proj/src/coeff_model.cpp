#include "rrc/coeff_model.hpp"

#include "rrc/error.hpp"

#include <algorithm>
#include <optional>

namespace rrc {

bool CoefficientModel::contains(long long k, const Rational& value) const {
    const auto& s = set(k);
    return std::binary_search(s.begin(), s.end(), value);
}

namespace {

struct WindowSums {
    Rational min_sum;
    Rational max_sum;
};

WindowSums window(const std::vector<std::vector<Rational>>& sets, int offset, int M) {
    const auto period = static_cast<int>(sets.size());
    WindowSums w{0, 0};
    for (int k = 1; k <= M; ++k) {
        const auto& s = sets[static_cast<std::size_t>((offset + k - 1) % period)];
        w.min_sum += s.front();
        w.max_sum += s.back();
    }
    return w;
}

// Largest a such that every window of length M satisfies both inequalities.
Rational best_a(const std::vector<std::vector<Rational>>& sets, int M) {
    std::optional<Rational> a;
    for (int t = 0; t < static_cast<int>(sets.size()); ++t) {
        auto w = window(sets, t, M);
        Rational cand = std::min(Rational(-w.min_sum), w.max_sum);
        if (!a || cand < *a) a = cand;
    }
    return *a;
}

void require_shape(int period, const std::vector<std::vector<Rational>>& sets) {
    if (period < 1 || static_cast<int>(sets.size()) != period) {
        throw Error(Stage::validation, "BadModel",
                    "period " + std::to_string(period) + " does not match " + std::to_string(sets.size()) + " sets");
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].empty()) throw Error(Stage::validation, "BadModel", "set E_" + std::to_string(i + 1) + " is empty");
    }
}

}  // namespace

BalanceParameters balanced_parameters(int period, const std::vector<std::vector<Rational>>& sets) {
    require_shape(period, sets);
    std::vector<std::vector<Rational>> sorted = sets;
    for (auto& s : sorted) std::sort(s.begin(), s.end());
    for (int M = 1; M <= 2 * period; ++M) {
        Rational a = best_a(sorted, M);
        if (a > 0) return {M, a};
    }
    throw Error(Stage::validation, "NotBalanceable",
                "no window length M <= " + std::to_string(2 * period) + " has both min-sum < 0 and max-sum > 0");
}

const CoefficientModel& validate_model(const CoefficientModel& model) {
    require_shape(model.period, model.sets);
    if (model.bound_A <= 0 || model.balance_a <= 0 || model.balance_M < 1) {
        throw Error(Stage::validation, "BadModel", "A, a must be positive and M >= 1");
    }
    for (std::size_t i = 0; i < model.sets.size(); ++i) {
        const auto& s = model.sets[i];
        if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) {
            throw Error(Stage::validation, "BadModel", "set E_" + std::to_string(i + 1) + " is not sorted and duplicate-free");
        }
        for (const auto& e : s) {
            if (abs(e) > model.bound_A) {
                throw Error(Stage::validation, "BoundViolated",
                            "element " + to_string(e) + " of E_" + std::to_string(i + 1) + " exceeds A = " +
                                to_string(model.bound_A));
            }
        }
    }
    for (int t = 0; t < model.period; ++t) {
        auto w = window(model.sets, t, model.balance_M);
        if (w.min_sum > -model.balance_a) {
            throw Error(Stage::validation, "NotBalanced",
                        "offset " + std::to_string(t) + ": min-sum " + to_string(w.min_sum) + " > -a = " +
                            to_string(Rational(-model.balance_a)));
        }
        if (w.max_sum < model.balance_a) {
            throw Error(Stage::validation, "NotBalanced",
                        "offset " + std::to_string(t) + ": max-sum " + to_string(w.max_sum) + " < a = " +
                            to_string(model.balance_a));
        }
    }
    return model;
}

CoefficientModel make_model(std::string name, std::vector<std::vector<Rational>> sets) {
    CoefficientModel m;
    m.name = std::move(name);
    m.period = static_cast<int>(sets.size());
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    require_shape(m.period, sets);
    Rational A = 0;
    for (const auto& s : sets) {
        for (const auto& e : s) A = std::max(A, abs(e));
    }
    auto bp = balanced_parameters(m.period, sets);
    m.sets = std::move(sets);
    m.bound_A = A;
    m.balance_M = bp.M;
    m.balance_a = bp.a;
    validate_model(m);
    return m;
}

CoefficientModel builtin_model(const std::string& name) {
    if (name == "littlewood") return make_model(name, {{-1, 1}});
    if (name == "newman") return make_model(name, {{-1, 0}, {0, 1}});
    if (name == "height1") return make_model(name, {{-1, 0, 1}});
    throw Error(Stage::validation, "UnknownFamily", "'" + name + "' (expected littlewood, newman or height1)");
}

namespace {

Rational rational_from_json(const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw Error(Stage::validation, "BadModel", "rationals must be \"p/q\" strings or integers");
}

}  // namespace

CoefficientModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("period") || !j.contains("sets") || !j["sets"].is_array()) {
        throw Error(Stage::validation, "BadModel", "expected {\"period\": int, \"sets\": [[...], ...]}");
    }
    const int period = j["period"].get<int>();
    std::vector<std::vector<Rational>> sets;
    for (const auto& s : j["sets"]) {
        if (!s.is_array()) throw Error(Stage::validation, "BadModel", "each set must be an array");
        std::vector<Rational> values;
        for (const auto& v : s) values.push_back(rational_from_json(v));
        sets.push_back(std::move(values));
    }
    require_shape(period, sets);
    const std::string name = j.value("name", std::string("custom"));
    if (!j.contains("M") && !j.contains("a") && !j.contains("A")) return make_model(name, std::move(sets));

    CoefficientModel m;
    m.name = name;
    m.period = period;
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    m.sets = std::move(sets);
    Rational A = 0;
    for (const auto& s : m.sets) {
        for (const auto& e : s) A = std::max(A, abs(e));
    }
    m.bound_A = j.contains("A") ? rational_from_json(j["A"]) : A;
    if (j.contains("M") != j.contains("a")) {
        throw Error(Stage::validation, "BadModel", "M and a must be declared together");
    }
    if (j.contains("M")) {
        m.balance_M = j["M"].get<int>();
        m.balance_a = rational_from_json(j["a"]);
    } else {
        auto bp = balanced_parameters(m.period, m.sets);
        m.balance_M = bp.M;
        m.balance_a = bp.a;
    }
    validate_model(m);
    return m;
}

nlohmann::json model_to_json(const CoefficientModel& model) {
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& s : model.sets) {
        nlohmann::json values = nlohmann::json::array();
        for (const auto& e : s) values.push_back(to_string(e));
        sets.push_back(std::move(values));
    }
    return nlohmann::json{{"name", model.name},         {"period", model.period},
                          {"sets", std::move(sets)},    {"A", to_string(model.bound_A)},
                          {"M", model.balance_M},       {"a", to_string(model.balance_a)}};
}

}  // namespace rrc
