#include "rrc/bounds.hpp"

#include "rrc/error.hpp"
#include "rrc/numeric/real.hpp"

#include <mpfr.h>

namespace rrc {

long ceil_sqrt(long n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), Integer(n).get_mpz_t());
    long s = r.get_si();
    if (s * s < n) ++s;
    return s;
}

int damping_power(const Rational& A) {
    int v = 4;
    // 2^{1-v} A < 1  <=>  A < 2^{v-1}
    while (A >= Rational(Integer(1) << (v - 1))) ++v;
    return v;
}

std::vector<Integer> chebyshev_t(long k) {
    std::vector<Integer> prev{1}, cur{0, 1};
    if (k == 0) return prev;
    for (long j = 1; j < k; ++j) {
        std::vector<Integer> next(cur.size() + 1, Integer(0));
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

namespace {

std::vector<Integer> dirichlet_kernel(long ell) {
    std::vector<Integer> d(static_cast<std::size_t>(ell + 1), Integer(0));
    d[0] = 1;
    std::vector<Integer> prev{1}, cur{0, 1};
    for (long k = 1; k <= ell; ++k) {
        for (std::size_t i = 0; i < cur.size(); ++i) d[i] += 2 * cur[i];
        std::vector<Integer> next(cur.size() + 1, Integer(0));
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return d;
}

// sum d_i p^i q^{ell-i}
Integer homogeneous(const std::vector<Integer>& d, const Integer& p, const Integer& q) {
    Integer h = d.back();
    Integer qpow(1);
    for (std::size_t i = d.size() - 1; i-- > 0;) {
        h *= p;
        qpow *= q;
        mpz_addmul(h.get_mpz_t(), d[i].get_mpz_t(), qpow.get_mpz_t());
    }
    return h;
}

bool kernel_alternates(const std::vector<Integer>& d, long ell) {
    // q_0(cos(i pi / ell)) = (-1)^i / (2 ell + 1); 128-bit rational neighbours keep the sign.
    int expected = 1;
    for (long i = 0; i <= ell; ++i) {
        Rational t;
        if (i == 0) {
            t = 1;
        } else if (i == ell) {
            t = -1;
        } else {
            numeric::Real x(128);
            mpfr_const_pi(x.get(), MPFR_RNDN);
            mpfr_mul_si(x.get(), x.get(), i, MPFR_RNDN);
            mpfr_div_si(x.get(), x.get(), ell, MPFR_RNDN);
            mpfr_cos(x.get(), x.get(), MPFR_RNDN);
            t = x.to_rational();
        }
        if (sgn(homogeneous(d, t.get_num(), t.get_den())) != expected) return false;
        expected = -expected;
    }
    return true;
}

std::vector<Rational> substitute(const std::vector<Integer>& d, long ell, long n) {
    // q_0(1 - 2t/n) by Horner on coefficient vectors.
    std::vector<Rational> acc{Rational(d.back())};
    const Rational slope(-2, n);
    for (std::size_t i = d.size() - 1; i-- > 0;) {
        std::vector<Rational> next(acc.size() + 1, Rational(0));
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next[j] += acc[j];
            next[j + 1] += acc[j] * slope;
        }
        next[0] += d[i];
        acc = std::move(next);
    }
    for (auto& c : acc) {
        c /= 2 * ell + 1;
        c.canonicalize();
    }
    return acc;
}

}  // namespace

DampingPolynomial build_damping(long n, const Rational& A, long pointwise_limit) {
    if (n < 1) throw Error(Stage::validation, "BadArgument", "n must be at least 1");
    if (A <= 0) throw Error(Stage::validation, "BadArgument", "A must be positive");
    DampingPolynomial out;
    out.n = n;
    out.ell = ceil_sqrt(n);
    const long ell = out.ell;
    out.kernel = dirichlet_kernel(ell);
    out.q1_coeffs = substitute(out.kernel, ell, n);
    out.roots_real = kernel_alternates(out.kernel, ell);

    // q_1(k) = N_k / den with N_k = sum d_i (n - 2k)^i n^{ell-i}, den = n^ell (2 ell + 1).
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(ell));
    den *= 2 * ell + 1;
    std::vector<Integer> N(static_cast<std::size_t>(n));
    for (long k = 1; k <= n; ++k) N[static_cast<std::size_t>(k - 1)] = abs(homogeneous(out.kernel, Integer(n - 2 * k), Integer(n)));

    if (n <= pointwise_limit) {
        const Integer den_sq = den * den;
        bool ok = true;
        for (long k = 1; k <= n && ok; ++k) {
            const Integer& Nk = N[static_cast<std::size_t>(k - 1)];
            ok = 4 * k * Nk * Nk <= den_sq;
        }
        out.pointwise_ok = ok;
    }

    out.sum_exact = n <= 4096;
    const int W = 64;
    for (int v = damping_power(A); v <= 64; ++v) {
        Integer sum(0), p;
        if (out.sum_exact) {
            for (const auto& Nk : N) {
                mpz_pow_ui(p.get_mpz_t(), Nk.get_mpz_t(), static_cast<unsigned long>(v));
                sum += p;
            }
            Integer den_v;
            mpz_pow_ui(den_v.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(v));
            out.sum_check = Rational(sum, den_v);
        } else {
            // ceil(|q_1(k)| 2^W)^v, summed exactly, over 2^{W v}
            for (const auto& Nk : N) {
                Integer u = Nk << W;
                mpz_cdiv_q(u.get_mpz_t(), u.get_mpz_t(), den.get_mpz_t());
                mpz_pow_ui(p.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(v));
                sum += p;
            }
            out.sum_check = Rational(sum, Integer(1) << (W * v));
        }
        out.sum_check.canonicalize();
        if (out.sum_check * A < 1) {
            out.v = v;
            out.m = static_cast<long>(v) * ell;
            return out;
        }
    }
    throw Error(Stage::verification, "SumCheckFailed", "no v <= 64 gives sum |q_1(k)|^v < 1/A");
}

long upper_bound(long n, const Rational& A) { return build_damping(n, A, 0).m; }

nlohmann::json damping_to_json(const DampingPolynomial& d, const Rational& A) {
    return {{"n", d.n}, {"A", to_string(A)}, {"v", d.v}, {"m", d.m}, {"sum_check", to_string(d.sum_check)}};
}

}  // namespace rrc
