#include "rrc/trap.hpp"

#include "rrc/error.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace rrc {

namespace {

// round(x / (d 2^B)), ties to even; d > 0.
void round_div_ui_2exp(mpz_t out, const mpz_t x, unsigned long d, unsigned long B, mpz_t tmp) {
    const unsigned long r1 = mpz_fdiv_q_ui(out, x, d);
    mpz_fdiv_r_2exp(tmp, out, B);
    mpz_fdiv_q_2exp(out, out, B);
    // tmp in [0, 2^B): compare against 2^(B-1)
    const long top = B == 0 ? -1 : static_cast<long>(mpz_sizeinbase(tmp, 2));
    bool up = false;
    if (B == 0) {
        up = 2 * r1 > d || (2 * r1 == d && mpz_odd_p(out));
    } else if (mpz_sgn(tmp) != 0 && top == static_cast<long>(B)) {
        // tmp >= 2^(B-1)
        if (mpz_scan1(tmp, 0) < B - 1 || r1 > 0) {
            up = true;
        } else {
            up = mpz_odd_p(out);
        }
    }
    if (up) mpz_add_ui(out, out, 1);
}

Integer scaled_ceil(const Rational& value, int B) { return numeric::fixed_ceil(value, B).mantissa(); }

// Exact integers behind mu = mu_num / mu_den.
struct MuParts {
    unsigned long num;
    unsigned long den;
};

MuParts mu_parts(const Rational& mu) {
    if (!mu.get_num().fits_ulong_p() || !mu.get_den().fits_ulong_p()) {
        throw Error(Stage::trap, "BadParameters", "mu numerator/denominator too large");
    }
    return {mu.get_num().get_ui(), mu.get_den().get_ui()};
}

unsigned long step_divisor(const BuildParameters& params, long m, const MuParts& mu) {
    const unsigned long c0 = static_cast<unsigned long>(params.L + m);
    return c0 * mu.den;
}

}  // namespace

TrapState init_state(const BuildParameters& params) {
    const int B = params.precision_bits;
    TrapState s;
    s.m = 0;
    s.psi = Fixed::one(B);
    s.lambda.assign(static_cast<std::size_t>(params.n), Fixed::zero(B));
    s.psi_bound = numeric::fixed_floor(params.mu * params.Lambda, B);
    return s;
}

Fixed drift_predictor(const TrapState& state, const NewmanDecomposition& dec, const BuildParameters& params) {
    const int B = params.precision_bits;
    const MuParts mu = mu_parts(params.mu);
    const unsigned long c1 = static_cast<unsigned long>(params.L + state.m + 1);
    // c1 (mu_d psi 2^B + mu_d psi nu_0 + mu_n lambda_1 2^B) / (c0 mu_d 2^B)
    Integer x = state.psi.mantissa() * dec.nu[0].mantissa();
    Integer head = state.psi.mantissa();
    head <<= B;
    x += head;
    x *= mu.den;
    if (!state.lambda.empty()) {
        Integer l = state.lambda[0].mantissa() * mu.num;
        l <<= B;
        x += l;
    }
    x *= c1;
    Integer out, tmp;
    round_div_ui_2exp(out.get_mpz_t(), x.get_mpz_t(), step_divisor(params, state.m, mu),
                      static_cast<unsigned long>(B), tmp.get_mpz_t());
    return Fixed(std::move(out), B);
}

Rational choose_control(const TrapState& state, const CoefficientModel& model, const NewmanDecomposition& dec,
                        const BuildParameters& params) {
    const Fixed p = drift_predictor(state, dec, params);
    return p.sign() >= 0 ? model.min_at(state.m + 1) : model.max_at(state.m + 1);
}

namespace {

// Applies one step given the already computed predictor.
void advance(TrapState& state, const Fixed& predictor, const Rational& eps, const NewmanDecomposition& dec,
             const BuildParameters& params, mpz_t x, mpz_t p, mpz_t tmp) {
    const int B = params.precision_bits;
    const MuParts mu = mu_parts(params.mu);
    const long n = params.n;
    const unsigned long c1 = static_cast<unsigned long>(params.L + state.m + 1);
    const unsigned long d = step_divisor(params, state.m, mu);

    // lambda_{m+1,k} for k = 1..n-m-1 reads lambda_{m,k+1} and the old psi.
    mpz_mul_ui(p, state.psi.mantissa().get_mpz_t(), mu.den);
    const long live = n - state.m - 1;
    for (long k = 1; k <= live; ++k) {
        auto& slot = state.lambda[static_cast<std::size_t>(k - 1)].mantissa();
        const auto& next = state.lambda[static_cast<std::size_t>(k)].mantissa();
        mpz_mul_ui(x, next.get_mpz_t(), mu.num);
        mpz_mul_2exp(x, x, static_cast<unsigned long>(B));
        mpz_addmul(x, p, dec.nu[static_cast<std::size_t>(k)].mantissa().get_mpz_t());
        mpz_mul_ui(x, x, c1);
        round_div_ui_2exp(slot.get_mpz_t(), x, d, static_cast<unsigned long>(B), tmp);
    }
    if (live >= 0 && live < n) state.lambda[static_cast<std::size_t>(live)].mantissa() = 0;

    state.psi = predictor + numeric::fixed_from_rational(eps, B);
    state.eps_history.push_back(eps);
    ++state.m;
    if (state.psi.abs() > state.psi_bound) state.escape_flag = true;
}

}  // namespace

void step(TrapState& state, const Rational& eps, const NewmanDecomposition& dec, const BuildParameters& params) {
    if (state.escape_flag) throw Error(Stage::trap, "TrapEscape", "step called on an escaped state");
    if (state.m >= params.n) throw Error(Stage::trap, "TrapDone", "all n steps already taken");
    const Fixed predictor = drift_predictor(state, dec, params);
    Integer x, p, tmp;
    advance(state, predictor, eps, dec, params, x.get_mpz_t(), p.get_mpz_t(), tmp.get_mpz_t());
}

TrapResult run(const BuildParameters& params, const NewmanDecomposition& dec, const CoefficientModel& model,
               const TrapOptions& options) {
    const int B = params.precision_bits;
    const long n = params.n;
    if (dec.degree() != n) {
        throw Error(Stage::trap, "BadDecomposition", "decomposition degree differs from n");
    }
    TrapState state = init_state(params);
    TrapResult result;
    TrapStats& st = result.stats;
    st.max_abs_psi = state.psi.abs();
    st.max_drift = Fixed::zero(B);

    const Integer psi_in = numeric::fixed_floor(params.Psi, B).mantissa();
    std::vector<Integer> lambda_cap(static_cast<std::size_t>(n));
    std::vector<double> lambda_cap_d(static_cast<std::size_t>(n));
    for (long k = 1; k <= n; ++k) {
        const Rational cap = params.delta + params.Lambda * dec.U[static_cast<std::size_t>(k)].to_rational();
        lambda_cap[static_cast<std::size_t>(k - 1)] = scaled_ceil(cap, B) + 4;
        lambda_cap_d[static_cast<std::size_t>(k - 1)] = cap.get_d();
    }
    const Rational slack(Integer(1), Integer(1) << (B - 8));
    st.drift_limit = (Rational(1, params.L) + params.delta) * params.Lambda + slack;
    const Integer drift_cap = scaled_ceil(st.drift_limit, B);
    const double scale = std::ldexp(1.0, -B);

    const std::size_t window_len = static_cast<std::size_t>(4 * params.M);
    auto record = [&](const TrapState& s) {
        TraceRow row{s.m, s.psi, s.lambda.empty() ? Fixed::zero(B) : s.lambda[0],
                     s.eps_history.empty() ? Rational(0) : s.eps_history.back()};
        if (options.full_trace && (s.m % std::max(1L, options.stride) == 0 || s.m == n)) result.trace.push_back(row);
        result.window.push_back(std::move(row));
        if (result.window.size() > window_len) result.window.pop_front();
    };
    record(state);

    long last_inside = 0;  // last step with |psi| <= Psi
    Integer x, p, tmp;
    while (state.m < n) {
        const Fixed predictor = drift_predictor(state, dec, params);
        const Rational eps = predictor.sign() >= 0 ? model.min_at(state.m + 1) : model.max_at(state.m + 1);
        const Fixed drift = (predictor - state.psi).abs();
        if (drift > st.max_drift) st.max_drift = drift;
        if (mpz_cmpabs(drift.mantissa().get_mpz_t(), drift_cap.get_mpz_t()) > 0) ++st.drift_violations;

        advance(state, predictor, eps, dec, params, x.get_mpz_t(), p.get_mpz_t(), tmp.get_mpz_t());
        record(state);

        const Fixed a = state.psi.abs();
        if (a > st.max_abs_psi) st.max_abs_psi = a;
        if (state.escape_flag) {
            ++st.psi_violations;
            std::ostringstream msg;
            msg << "|psi| = " << to_decimal(a.to_rational(), 8) << " > mu Lambda = "
                << to_decimal(state.psi_bound.to_rational(), 8) << " at m = " << state.m << "; last steps:";
            for (const auto& row : result.window) {
                msg << " (" << row.m << ", " << row.psi.to_double() << ", " << to_string(row.eps) << ")";
            }
            throw Error(Stage::trap, "TrapEscape", msg.str());
        }
        if (mpz_cmpabs(state.psi.mantissa().get_mpz_t(), psi_in.get_mpz_t()) <= 0) {
            st.longest_excursion = std::max(st.longest_excursion, state.m - last_inside - 1);
            if (state.m - last_inside > params.M) ++st.return_violations;
            last_inside = state.m;
        }

        const long live = n - state.m;
        for (long k = 1; k <= live; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            const Integer& lam = state.lambda[i].mantissa();
            if (sgn(lam) == 0) continue;
            if (mpz_cmpabs(lam.get_mpz_t(), lambda_cap[i].get_mpz_t()) > 0) ++st.lambda_violations;
            const double ratio = std::abs(lam.get_d()) * scale / lambda_cap_d[i];
            if (ratio > st.max_lambda_ratio) st.max_lambda_ratio = ratio;
        }
    }
    if (last_inside < n && n - last_inside >= params.M) {
        st.longest_excursion = std::max(st.longest_excursion, n - last_inside);
        ++st.return_violations;
    }
    result.eps = std::move(state.eps_history);
    return result;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    out << "m,psi,lambda1,eps\n";
    for (const auto& row : rows) {
        out << row.m << ',' << row.psi.to_decimal() << ',' << row.lambda1.to_decimal() << ',' << to_string(row.eps)
            << '\n';
    }
}

}  // namespace rrc
