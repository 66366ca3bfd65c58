#pragma once

#include "rrc/rational.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace rrc {

/// q = q_1^v with q_1(t) = q_0(1 - 2t/n) and q_0 the normalized Dirichlet kernel of
/// order ell = ceil(sqrt n) written in t = cos y.
struct DampingPolynomial {
    long n = 0;
    long ell = 0;
    int v = 0;
    /// Integer coefficients of 1 + 2 sum_{k<=ell} T_k(t); q_0 is this over 2 ell + 1.
    std::vector<Integer> kernel;
    std::vector<Rational> q1_coeffs;
    /// >= sum_{k=1}^n |q_1(k)|^v; exact when sum_exact.
    Rational sum_check;
    bool sum_exact = false;
    /// q_0 alternates in sign at rational points next to cos(i pi / ell), i = 0..ell.
    bool roots_real = false;
    /// 4k N_k^2 <= (n^ell (2 ell + 1))^2 for k = 1..n, when checked.
    std::optional<bool> pointwise_ok;
    long m = 0;
};

/// Coefficients of T_k in the monomial basis.
std::vector<Integer> chebyshev_t(long k);

/// Throws Error(SumCheckFailed) if no v <= 64 passes.
DampingPolynomial build_damping(long n, const Rational& A, long pointwise_limit = 256);

/// v(A) ceil(sqrt n): no admissible P_n has more roots in (0, 1].
long upper_bound(long n, const Rational& A);

/// Smallest v >= 4 with 2^{1-v} A < 1.
int damping_power(const Rational& A);

long ceil_sqrt(long n);

nlohmann::json damping_to_json(const DampingPolynomial& d, const Rational& A);

}  // namespace rrc
