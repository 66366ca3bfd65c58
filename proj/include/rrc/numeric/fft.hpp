#pragma once

#include "rrc/numeric/fixed.hpp"

#include <memory>
#include <span>
#include <vector>

namespace rrc::numeric {

enum class FftDirection { forward, inverse };

/// The N-th roots of unity e^{2 pi i j/N}, j = 0..N-1, at a fixed precision.
class RootTable {
public:
    RootTable(long long N, int frac_bits);

    long long size() const { return static_cast<long long>(roots_.size()); }
    int frac_bits() const { return frac_bits_; }
    /// e^{2 pi i j/N} for any integer j (reduced mod N).
    const ComplexFixed& operator()(long long j) const;

    /// Shared table for (N, frac_bits); built once per process.
    static std::shared_ptr<const RootTable> shared(long long N, int frac_bits);

private:
    std::vector<ComplexFixed> roots_;
    int frac_bits_;
};

bool is_power_of_two(long long n);

/// Radix-2 decimation-in-time transform.
///   forward: X_k = sum_j v_j e^{-2 pi i jk/N}
///   inverse: x_k = (1/N) sum_j v_j e^{+2 pi i jk/N}
/// Throws rrc::Error(LengthNotPowerOfTwo) otherwise. Single-threaded with a fixed
/// butterfly order, so results are bit-identical across runs.
std::vector<ComplexFixed> fft(std::span<const ComplexFixed> v, FftDirection direction);

/// Componentwise error bound of fft() against the exact transform of the same input,
/// for inputs of complex modulus at most max_abs. Each butterfly stage at most doubles
/// earlier errors and adds one twiddle-product rounding (modulus <= 2^-(B-1/2)) scaled by
/// the current magnitude, which gives for the forward transform
///   N * (log2(N) * max_abs + 2) * 2^-B,
/// and for the inverse that quantity divided by N plus the final 2^-(B+1) halving error.
Rational fft_error_bound(long long N, const Rational& max_abs, int frac_bits, FftDirection direction);

/// Error bound of a direct O(N^2) DFT evaluated with the same roots and precision:
/// N * (max_abs + 1) * 2^-B (forward); divided by N plus 2^-(B+1) for the inverse.
Rational direct_dft_error_bound(long long N, const Rational& max_abs, int frac_bits, FftDirection direction);

/// Direct O(N^2) summation; test oracle and debug path.
std::vector<ComplexFixed> direct_dft(std::span<const ComplexFixed> v, FftDirection direction);

}  // namespace rrc::numeric
