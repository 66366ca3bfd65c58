#pragma once

#include "rrc/numeric/fixed.hpp"
#include "rrc/params.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace rrc {

using numeric::ComplexFixed;
using numeric::Fixed;

/// Coefficients nu_0..nu_n with
///   x_j^{-1} - 1 = sum_k nu_k mu^k x_j^k   at every target x_j,
/// together with certified bounds on what the truncation and the discrete
/// contour integral leave out.
struct NewmanDecomposition {
    std::vector<Fixed> nu;  // nu_0..nu_n
    /// U_k >= sum_{i >= k} |nu_i| for the exact coefficients, k = 0..n+1.
    std::vector<Fixed> U;
    Rational mu;
    Fixed sum_bound;       // == U_0
    Fixed aliasing_bound;  // >= |sum_{t>=1} c_{k+tN}| for all 0 <= k <= n
    Fixed tail_bound;      // >= sum_{i>n} |nu_i|, == U_{n+1}
    Fixed max_imag;        // max_k |mu Im c_k| as computed
    Fixed numeric_slack;   // per-coefficient error budget from rounding
    Rational contour_radius;
    long long fft_size = 0;
    int frac_bits = 0;
    bool delta_gate = false;  // sum_bound < delta

    long degree() const { return static_cast<long>(nu.size()) - 1; }
};

/// prod_j (1 - t_j z) / (t_j (t_j - z)) with t_j = mu x_j, multiplied left to right.
/// Throws Error(PoleHit) when some |t_j - z| < 2^-(B-8).
ComplexFixed blaschke_eval(std::span<const Rational> targets, const Rational& mu, const ComplexFixed& z);

/// G_ell(z) = 1 - ((ell+1)/ell) z^-1 + (1/ell) z^{-ell-1}; z^{-ell-1} by binary exponentiation.
ComplexFixed g_ell_eval(long ell, const ComplexFixed& z);

struct DecompositionOptions {
    /// Raise DeltaExceeded when sum_bound >= delta.
    bool enforce_delta = true;
    /// Threads for the N samples of B * G_ell; the result does not depend on it.
    unsigned threads = 1;
    /// Use direct O(nN) summation instead of the FFT (oracle/debug path).
    bool direct = false;
};

/// Samples B(z) G_ell(z) at the N-th roots of unity, extracts c_0..c_n with one inverse
/// FFT and sets nu_0 = -mu c_0 - 1, nu_k = -mu c_k. Throws AliasingTooLarge when the
/// contour-shift estimate for N is not below 2^-(B+4), DeltaExceeded (if enforced).
NewmanDecomposition compute_decomposition(const BuildParameters& params, std::span<const Rational> targets,
                                          const DecompositionOptions& options = {});
inline NewmanDecomposition compute_decomposition(const BuildParameters& params, const TargetPoints& targets,
                                                 const DecompositionOptions& options = {}) {
    return compute_decomposition(params, targets.points, options);
}

/// U_{n+1} mu^{n+1} + N 2^-(B-6).
Rational decomposition_residual_threshold(const NewmanDecomposition& dec);

/// max_j |x_j^{-1} - 1 - sum_{k<=n} nu_k mu^k x_j^k| (Horner at the decomposition precision).
Rational decomposition_residual(const NewmanDecomposition& dec, std::span<const Rational> targets);

/// Residual, or Error(ResidualTooLarge) when it exceeds the threshold.
Rational verify_decomposition(const NewmanDecomposition& dec, std::span<const Rational> targets);

/// CSV "k,nu_k,U_k" with exact decimal expansions of the fixed-point values.
void write_decomposition_csv(std::ostream& out, const NewmanDecomposition& dec);

}  // namespace rrc
