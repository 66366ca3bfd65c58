#include "rrc/newman.hpp"

#include "rrc/error.hpp"
#include "rrc/numeric/fft.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

namespace rrc {

using numeric::Real;

namespace {

Rational ulp(int frac_bits) {
    Integer den(1);
    den <<= frac_bits;
    return Rational(Integer(1), den);
}

int ceil_log2(const Rational& x) {
    int k = 0;
    Rational p(1);
    while (p < x) {
        p *= 2;
        ++k;
    }
    return k;
}

}  // namespace

ComplexFixed blaschke_eval(std::span<const Rational> targets, const Rational& mu, const ComplexFixed& z) {
    const int B = z.frac_bits();
    const ComplexFixed one = ComplexFixed::one(B);
    Integer pole_sq(1);
    pole_sq <<= 16;  // |t - z|^2 < 2^{-2B+16}, in mantissa units 2^{-2B}
    ComplexFixed product = one;
    for (const auto& x : targets) {
        Rational t = mu * x;
        t.canonicalize();
        ComplexFixed tz = z * t;
        ComplexFixed gap = ComplexFixed(numeric::fixed_from_rational(t, B), Fixed::zero(B)) - z;
        Integer gap_sq = gap.re().mantissa() * gap.re().mantissa() + gap.im().mantissa() * gap.im().mantissa();
        if (gap_sq < pole_sq) throw Error(Stage::decomposition, "PoleHit", "z is within 2^-(B-8) of mu x_j");
        ComplexFixed factor = (one - tz) / (gap * t);
        product = product * factor;
    }
    return product;
}

ComplexFixed g_ell_eval(long ell, const ComplexFixed& z) {
    const int B = z.frac_bits();
    const ComplexFixed one = ComplexFixed::one(B);
    ComplexFixed inv = one / z;
    ComplexFixed tail = numeric::pow(inv, static_cast<unsigned long>(ell + 1));
    return one - inv * Rational(Integer(ell + 1), Integer(ell)) + tail * Rational(Integer(1), Integer(ell));
}

namespace {

// Componentwise error bound for one sample B(z)G_ell(z) at `work` bits, relative to
// the exact value at the exact root of unity. Per Blaschke factor the numerator and
// denominator each carry a few ulps; dividing by |t - z| >= 1 - t_max amplifies them.
// Binary exponentiation of z^-1 contributes about (ell + 1) relative ulps.
Rational sample_error_bound(std::span<const Rational> targets, const Rational& mu, long ell, int work) {
    Rational t_max(0);
    for (const auto& x : targets) t_max = std::max(t_max, Rational(mu * x));
    const Rational per_factor = 8 + 8 / (1 - t_max);
    const auto s = static_cast<long>(targets.size());
    const Rational g_rel = 4 * Rational(ell + 2) + 16;
    const Rational mag_B = [&] {
        Rational m(1);
        for (const auto& x : targets) m /= mu * x;
        return m;
    }();
    const Rational mag_G = 2 + Rational(2, ell);
    // Factor 2 absorbs second-order terms.
    return 2 * mag_B * mag_G * (per_factor * s + g_rel + 4) * ulp(work);
}

std::vector<ComplexFixed> sample_integrand(const BuildParameters& params, std::span<const Rational> targets,
                                           const numeric::RootTable& table, unsigned threads) {
    const long long N = table.size();
    std::vector<ComplexFixed> samples(static_cast<std::size_t>(N));
    auto work = [&](long long begin, long long end) {
        for (long long j = begin; j < end; ++j) {
            const auto& z = table(j);
            samples[static_cast<std::size_t>(j)] = blaschke_eval(targets, params.mu, z) * g_ell_eval(params.ell, z);
        }
    };
    threads = std::max(1U, threads);
    if (threads == 1 || N < 64) {
        work(0, N);
        return samples;
    }
    std::vector<std::thread> pool;
    const long long chunk = (N + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        long long begin = std::min(N, static_cast<long long>(t) * chunk);
        long long end = std::min(N, begin + chunk);
        pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
    return samples;
}

}  // namespace

NewmanDecomposition compute_decomposition(const BuildParameters& params, std::span<const Rational> targets,
                                          const DecompositionOptions& options) {
    const int B = params.precision_bits;
    const long long N = params.fft_size;
    const long n = params.n;
    if (!numeric::is_power_of_two(N) || N <= n + 1) {
        throw Error(Stage::decomposition, "BadFftSize", "N = " + std::to_string(N) + " must be a power of two > n + 1");
    }
    const int s = static_cast<int>(targets.size());

    Real alias = aliasing_bound(s, params.eta, params.ell, N);
    {
        Real limit = Real::from_long(1);
        mpfr_div_2si(limit.get(), limit.get(), B + 4, MPFR_RNDN);
        if (compare(alias, limit) >= 0) {
            throw Error(Stage::decomposition, "AliasingTooLarge",
                        "N = " + std::to_string(N) + " leaves aliasing " + alias.to_string(6) + " >= 2^-(B+4)");
        }
    }

    // Working precision: enough guard bits that sampling plus the inverse FFT stay
    // below 2^-(B+2) per coefficient.
    const Rational F_max = [&] {
        Rational m = 2 + Rational(2, params.ell);
        for (const auto& x : targets) m /= params.mu * x;
        return m;
    }();
    int work = B + 24;
    Rational numeric_err;
    for (;; work += 8) {
        Rational sample_err = sample_error_bound(targets, params.mu, params.ell, work);
        Rational fft_err = numeric::fft_error_bound(N, F_max + sample_err, work, numeric::FftDirection::inverse);
        numeric_err = params.mu * (sample_err + fft_err);
        if (numeric_err <= ulp(B + 2)) break;
    }

    auto table = numeric::RootTable::shared(N, work);
    auto samples = sample_integrand(params, targets, *table, options.threads);

    std::vector<ComplexFixed> c_hat(static_cast<std::size_t>(n + 1));
    if (options.direct) {
        // c_k = (1/N) sum_j F_j z_j^{k+1}
        const unsigned long shift = static_cast<unsigned long>(ceil_log2(Rational(static_cast<long>(N))));
        for (long k = 0; k <= n; ++k) {
            ComplexFixed acc = ComplexFixed::zero(work);
            for (long long j = 0; j < N; ++j) {
                acc += samples[static_cast<std::size_t>(j)] * (*table)((j * (k + 1)) % N);
            }
            acc.re().mantissa() = numeric::round_shift(acc.re().mantissa(), shift);
            acc.im().mantissa() = numeric::round_shift(acc.im().mantissa(), shift);
            c_hat[static_cast<std::size_t>(k)] = std::move(acc);
        }
    } else {
        auto spectrum = numeric::fft(samples, numeric::FftDirection::inverse);
        for (long k = 0; k <= n; ++k) c_hat[static_cast<std::size_t>(k)] = std::move(spectrum[static_cast<std::size_t>(k + 1)]);
    }

    NewmanDecomposition dec;
    dec.mu = params.mu;
    dec.fft_size = N;
    dec.frac_bits = B;
    dec.contour_radius = params.contour_radius();
    dec.nu.reserve(static_cast<std::size_t>(n + 1));
    Fixed max_imag = Fixed::zero(work);
    const Rational minus_mu = -params.mu;
    for (long k = 0; k <= n; ++k) {
        const auto& c = c_hat[static_cast<std::size_t>(k)];
        Fixed nu = c.re() * minus_mu;
        if (k == 0) nu -= Fixed::one(work);
        dec.nu.push_back(nu.rescaled(B));
        Fixed im = (c.im() * params.mu).abs();
        if (im > max_imag) max_imag = im;
    }
    dec.max_imag = max_imag.rescaled(B);

    // Per-coefficient slack: aliasing, working-precision error, final rounding.
    dec.aliasing_bound = numeric::fixed_ceil(alias.to_rational(), B);
    dec.numeric_slack = numeric::fixed_ceil(numeric_err + ulp(B + 1), B);
    dec.tail_bound =
        numeric::fixed_ceil(decomposition_tail_bound(s, params.eta, params.mu, params.ell, n).to_rational(), B);

    const Fixed per_coeff = dec.aliasing_bound + dec.numeric_slack;
    dec.U.assign(static_cast<std::size_t>(n + 2), Fixed::zero(B));
    dec.U[static_cast<std::size_t>(n + 1)] = dec.tail_bound;
    for (long k = n; k >= 0; --k) {
        const auto i = static_cast<std::size_t>(k);
        dec.U[i] = dec.U[i + 1] + dec.nu[i].abs() + per_coeff;
    }
    dec.sum_bound = dec.U.front();
    dec.delta_gate = dec.sum_bound.to_rational() < params.delta;
    if (options.enforce_delta && !dec.delta_gate) {
        throw Error(Stage::decomposition, "DeltaExceeded",
                    "sum |nu_k| <= " + to_decimal(dec.sum_bound.to_rational(), 8) + " is not below delta = " +
                        to_string(params.delta));
    }
    return dec;
}

Rational decomposition_residual_threshold(const NewmanDecomposition& dec) {
    Rational mu_pow(1);
    for (long k = 0; k <= dec.degree(); ++k) mu_pow *= dec.mu;
    return dec.tail_bound.to_rational() * mu_pow + Rational(static_cast<long>(dec.fft_size)) * ulp(dec.frac_bits - 6);
}

Rational decomposition_residual(const NewmanDecomposition& dec, std::span<const Rational> targets) {
    const int B = dec.frac_bits;
    Rational worst(0);
    for (const auto& x : targets) {
        Rational t = dec.mu * x;
        t.canonicalize();
        Fixed acc = dec.nu.back();
        for (long k = dec.degree() - 1; k >= 0; --k) acc = acc * t + dec.nu[static_cast<std::size_t>(k)];
        Rational lhs = 1 / x - 1;
        Rational r = abs(Rational(lhs - acc.to_rational()));
        worst = std::max(worst, r);
    }
    (void)B;
    return worst;
}

Rational verify_decomposition(const NewmanDecomposition& dec, std::span<const Rational> targets) {
    Rational residual = decomposition_residual(dec, targets);
    Rational threshold = decomposition_residual_threshold(dec);
    if (residual > threshold) {
        throw Error(Stage::decomposition, "ResidualTooLarge",
                    "max residual " + to_decimal(residual, 6) + " exceeds " + to_decimal(threshold, 6));
    }
    return residual;
}

void write_decomposition_csv(std::ostream& out, const NewmanDecomposition& dec) {
    out << "k,nu_k,U_k\n";
    for (std::size_t k = 0; k < dec.nu.size(); ++k) {
        out << k << ',' << dec.nu[k].to_decimal() << ',' << dec.U[k].to_decimal() << '\n';
    }
    out << dec.nu.size() << ",," << dec.U.back().to_decimal() << '\n';
}

}  // namespace rrc
