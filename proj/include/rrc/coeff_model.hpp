#pragma once

#include "rrc/rational.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace rrc {

/// Periodic family of admissible coefficient sets E_1, E_2, ... .
///
/// E_k = sets[(k - 1) mod period]. Each set is finite, sorted and
/// duplicate-free. The family is balanced with parameters (M, a) when every
/// window of M consecutive sets has min-sum <= -a and max-sum >= a.
struct CoefficientModel {
    std::string name;
    int period = 1;
    std::vector<std::vector<Rational>> sets;
    Rational bound_A;
    int balance_M = 1;
    Rational balance_a;

    /// E_k for k >= 1.
    const std::vector<Rational>& set(long long k) const {
        return sets[static_cast<std::size_t>((k - 1) % period)];
    }
    const Rational& min_at(long long k) const { return set(k).front(); }
    const Rational& max_at(long long k) const { return set(k).back(); }
    bool contains(long long k, const Rational& value) const;
};

struct BalanceParameters {
    int M;
    Rational a;
};

/// Smallest window length M <= 2 * period for which the family is balanced, with
/// the largest a for that M. Throws Error(NotBalanceable) if there is none.
BalanceParameters balanced_parameters(int period, const std::vector<std::vector<Rational>>& sets);

/// Checks the declared (A, M, a) against the sets. Throws BoundViolated or NotBalanced.
const CoefficientModel& validate_model(const CoefficientModel& model);

/// Sorts and deduplicates the sets, sets A = max |e| and derives (M, a); then validates.
CoefficientModel make_model(std::string name, std::vector<std::vector<Rational>> sets);

/// "littlewood" ({-1,1}), "newman" ({0,(-1)^k}) or "height1" ({-1,0,1}).
CoefficientModel builtin_model(const std::string& name);

/// {"period": int, "sets": [["p/q", ...], ...]} with optional "A", "M", "a" declarations.
CoefficientModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const CoefficientModel& model);

}  // namespace rrc
