#pragma once

#include "rrc/coeff_model.hpp"
#include "rrc/newman.hpp"
#include "rrc/params.hpp"

#include <deque>
#include <iosfwd>
#include <optional>
#include <vector>

namespace rrc {

/// State after m steps: psi_m and lambda_{m,1..n}, in fixed point at B fractional bits.
/// Entries lambda_k with k > n - m are kept at zero; they can no longer reach psi.
struct TrapState {
    long m = 0;
    Fixed psi;
    std::vector<Fixed> lambda;  // lambda[k - 1] holds lambda_k
    std::vector<Rational> eps_history;
    Fixed psi_bound;  // mu Lambda, rounded down
    bool escape_flag = false;

    const Fixed& lambda_at(long k) const { return lambda[static_cast<std::size_t>(k - 1)]; }
};

TrapState init_state(const BuildParameters& params);

/// ((L+m+1)/(L+m)) (psi + nu_0 psi + mu lambda_1), rounded once.
Fixed drift_predictor(const TrapState& state, const NewmanDecomposition& dec, const BuildParameters& params);

/// min E_{m+1} when the predictor is >= 0, max E_{m+1} otherwise.
Rational choose_control(const TrapState& state, const CoefficientModel& model, const NewmanDecomposition& dec,
                        const BuildParameters& params);

/// One step of both recurrences, in place. Sets escape_flag when |psi| > mu Lambda.
void step(TrapState& state, const Rational& eps, const NewmanDecomposition& dec, const BuildParameters& params);

struct TraceRow {
    long m = 0;
    Fixed psi;
    Fixed lambda1;
    Rational eps;  // eps_m; 0 for m = 0
};

struct TrapOptions {
    bool full_trace = false;
    /// Stride for the retained full trace.
    long stride = 1;
};

/// Counts of invariant violations observed online, plus the extremes behind them.
struct TrapStats {
    Fixed max_abs_psi;
    long psi_violations = 0;
    long lambda_violations = 0;
    long return_violations = 0;
    long drift_violations = 0;
    long longest_excursion = 0;  // longest run of steps with |psi| > Psi
    double max_lambda_ratio = 0;  // max |lambda_k| / (delta + Lambda U_k), approximate
    Fixed max_drift;
    Rational drift_limit;        // (1/L + delta) Lambda + slack
};

struct TrapResult {
    std::vector<Rational> eps;  // eps_1..eps_n
    std::deque<TraceRow> window;  // last 4M steps
    std::vector<TraceRow> trace;  // every stride-th step, when requested
    TrapStats stats;
};

/// n steps of choose_control + step. Throws Error(TrapEscape) when |psi| leaves
/// [-mu Lambda, mu Lambda]; the message carries the last steps of the trace.
TrapResult run(const BuildParameters& params, const NewmanDecomposition& dec, const CoefficientModel& model,
               const TrapOptions& options = {});

/// CSV "m,psi,lambda1,eps".
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

}  // namespace rrc
