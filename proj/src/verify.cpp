#include "rrc/verify.hpp"

#include "rrc/error.hpp"
#include "rrc/numeric/real.hpp"

#include <algorithm>
#include <deque>

namespace rrc {

using numeric::Real;

PolynomialCertificate assemble_polynomial(const CoefficientModel& model, const std::vector<Rational>& eps) {
    PolynomialCertificate cert;
    cert.coefficients.reserve(eps.size() + 1);
    cert.coefficients.emplace_back(1);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const auto k = static_cast<long long>(i + 1);
        if (!model.contains(k, eps[i])) {
            throw Error(Stage::verification, "MembershipViolation",
                        "eps_" + std::to_string(k) + " = " + to_string(eps[i]) + " is not in E_" + std::to_string(k));
        }
        cert.coefficients.push_back(eps[i]);
    }
    return cert;
}

std::vector<Integer> integer_coefficients(const std::vector<Rational>& coefficients) {
    Integer D(1);
    for (const auto& c : coefficients) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> out;
    out.reserve(coefficients.size());
    for (const auto& c : coefficients) out.push_back(c.get_num() * (D / c.get_den()));
    return out;
}

int exact_sign(const std::vector<Integer>& c, const Rational& x) {
    if (c.empty()) return 0;
    const Integer& p = x.get_num();
    const Integer& q = x.get_den();
    // sum c_k p^k q^{n-k}
    Integer h = c.back();
    Integer qpow(1);
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        h *= p;
        qpow *= q;
        if (sgn(c[i]) != 0) mpz_addmul(h.get_mpz_t(), c[i].get_mpz_t(), qpow.get_mpz_t());
    }
    return sgn(h);
}

SignCount count_sign_changes(const PolynomialCertificate& cert, const std::vector<Rational>& grid) {
    const auto c = integer_coefficients(cert.coefficients);
    SignCount out;
    int prev = 0;
    for (const auto& x : grid) {
        const int s = exact_sign(c, x);
        if (s == 0) {
            ++out.exact_zeros;
        } else if (prev != 0 && s != prev) {
            ++out.sign_changes;
        }
        prev = s;
    }
    return out;
}

QMargin evaluate_q(const std::vector<Rational>& coefficients, long L, const Rational& x, int frac_bits,
                   const Rational& threshold) {
    const long n = static_cast<long>(coefficients.size()) - 1;
    auto term = [&](long k) {
        Rational a = (k == 0 ? Rational(1) : coefficients[static_cast<std::size_t>(k)]) / Rational(L + k);
        return numeric::fixed_from_rational(a, frac_bits);
    };
    numeric::Fixed h = term(n);
    for (long k = n - 1; k >= 0; --k) h = h * x + term(k);
    QMargin q;
    q.value = h.to_rational();
    q.radius = Rational(Integer(n + 2), Integer(1) << frac_bits);
    q.margin = threshold - (abs(q.value) + q.radius);
    return q;
}

Rational q_threshold(const Rational& alpha, int s, const Rational& beta) {
    Real e = numeric::exp_neg_down(Real(Rational(2 * beta), MPFR_RNDU));
    Real f(alpha / (2 * (s - 1)), MPFR_RNDD);
    mpfr_mul(e.get(), e.get(), f.get(), MPFR_RNDD);
    return e.to_rational();
}

namespace {

// Bits needed to resolve a positive threshold: ceil(-log2 t), at least 0.
int resolution_bits(const Rational& t) {
    if (t <= 0) return 0;
    Real r(t, MPFR_RNDD);
    return std::max(0L, -numeric::floor_log2(r));
}

}  // namespace

void check_q_smallness(PolynomialCertificate& cert, const BuildParameters& params, bool enforce) {
    cert.q_threshold = q_threshold(params.alpha, params.s, params.beta_degree);
    cert.q_threshold_rigorous = q_threshold(params.alpha, params.s, params.beta);
    const int bits = std::max(resolution_bits(cert.q_threshold), resolution_bits(cert.q_threshold_rigorous));
    const int work = std::max(params.precision_bits + 64, bits + 64);

    Real t = numeric::exp_neg_up(Real(Rational(cert.degree() * params.alpha), MPFR_RNDD));
    Real f(params.A / (params.alpha * (params.L + cert.degree())), MPFR_RNDU);
    mpfr_mul(t.get(), t.get(), f.get(), MPFR_RNDU);
    cert.q_tail_bound = t.to_rational();

    cert.q_margins.clear();
    for (std::size_t j = 0; j < cert.targets.size(); ++j) {
        cert.q_margins.push_back(evaluate_q(cert.coefficients, params.L, cert.targets[j], work, cert.q_threshold));
        if (enforce && cert.q_margins.back().margin <= 0) {
            const auto& q = cert.q_margins.back();
            throw Error(Stage::verification, "SmallnessFailed",
                        "j = " + std::to_string(j + 1) + ": |Q_n(x_j)| = " + to_decimal(abs(q.value), 6) +
                            " is not below " + to_decimal(cert.q_threshold, 6));
        }
    }
}

void certify(PolynomialCertificate& cert, const BuildParameters& params, const CertifyOptions& options) {
    const auto c = integer_coefficients(cert.coefficients);
    std::vector<Rational> grid;
    for (std::size_t j = 0; j < cert.targets.size(); ++j) {
        if (j > 0) {
            Rational mid = (cert.targets[j - 1] + cert.targets[j]) / 2;
            mid.canonicalize();
            grid.push_back(mid);
        }
        grid.push_back(cert.targets[j]);
    }
    std::sort(grid.begin(), grid.end());

    struct Gap {
        Rational a, b;
        int sign;
        int depth;
    };
    std::vector<std::pair<Rational, Rational>> brackets;
    std::deque<Gap> gaps;
    std::vector<int> signs;
    signs.reserve(grid.size());
    for (const auto& x : grid) signs.push_back(exact_sign(c, x));
    long evaluations = static_cast<long>(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (signs[i] == 0) brackets.emplace_back(grid[i], grid[i]);
        if (i == 0) continue;
        if (signs[i - 1] != 0 && signs[i] != 0) {
            if (signs[i - 1] != signs[i]) {
                brackets.emplace_back(grid[i - 1], grid[i]);
            } else {
                gaps.push_back({grid[i - 1], grid[i], signs[i], 0});
            }
        }
    }

    while (static_cast<long>(brackets.size()) < params.r && !gaps.empty() &&
           evaluations < options.evaluation_budget) {
        Gap g = std::move(gaps.front());
        gaps.pop_front();
        Rational mid = (g.a + g.b) / 2;
        mid.canonicalize();
        const int s = exact_sign(c, mid);
        ++evaluations;
        if (s == 0) {
            brackets.emplace_back(mid, mid);
        } else if (s != g.sign) {
            brackets.emplace_back(g.a, mid);
            brackets.emplace_back(mid, g.b);
        } else if (g.depth + 1 < options.max_depth) {
            gaps.push_back({g.a, mid, s, g.depth + 1});
            gaps.push_back({mid, g.b, s, g.depth + 1});
        }
    }
    std::sort(brackets.begin(), brackets.end());
    cert.brackets = std::move(brackets);
    cert.root_count = static_cast<long>(cert.brackets.size());
    if (cert.root_count < params.r) {
        throw Error(Stage::verification, "NotEnoughRoots",
                    "found " + std::to_string(cert.root_count) + " sign-change brackets, need " +
                        std::to_string(params.r) + " (" + std::to_string(evaluations) + " exact evaluations)");
    }
}

bool brackets_valid(const PolynomialCertificate& cert, const Rational& lo, const Rational& hi) {
    const auto c = integer_coefficients(cert.coefficients);
    const std::pair<Rational, Rational>* prev = nullptr;
    for (const auto& br : cert.brackets) {
        const auto& [a, b] = br;
        if (a < lo || b > hi || a > b) return false;
        if (prev) {
            // open brackets may share an endpoint; a zero point may not sit on a neighbour
            if (a < prev->second) return false;
            if (a == prev->second && (a == b || prev->first == prev->second)) return false;
        }
        if (a == b) {
            if (exact_sign(c, a) != 0) return false;
        } else if (exact_sign(c, a) * exact_sign(c, b) != -1) {
            return false;
        }
        prev = &br;
    }
    return static_cast<long>(cert.brackets.size()) == cert.root_count;
}

}  // namespace rrc
