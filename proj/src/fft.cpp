#include "rrc/numeric/fft.hpp"

#include "rrc/error.hpp"

#include <map>
#include <mutex>
#include <utility>

namespace rrc::numeric {

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

RootTable::RootTable(long long N, int frac_bits) : frac_bits_(frac_bits) {
    roots_.reserve(static_cast<std::size_t>(N));
    for (long long j = 0; j < N; ++j) roots_.push_back(root_of_unity(j, N, frac_bits));
}

const ComplexFixed& RootTable::operator()(long long j) const {
    const long long N = size();
    j %= N;
    if (j < 0) j += N;
    return roots_[static_cast<std::size_t>(j)];
}

std::shared_ptr<const RootTable> RootTable::shared(long long N, int frac_bits) {
    static std::mutex mu;
    static std::map<std::pair<long long, int>, std::shared_ptr<const RootTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(N, frac_bits);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    auto table = std::make_shared<const RootTable>(N, frac_bits);
    cache.emplace(key, table);
    return table;
}

namespace {

int log2_exact(long long N) {
    int k = 0;
    while ((1LL << k) < N) ++k;
    return k;
}

void require_power_of_two(std::size_t n) {
    if (!is_power_of_two(static_cast<long long>(n))) {
        throw Error(Stage::decomposition, "LengthNotPowerOfTwo", "fft length " + std::to_string(n));
    }
}

}  // namespace

std::vector<ComplexFixed> fft(std::span<const ComplexFixed> v, FftDirection direction) {
    require_power_of_two(v.size());
    const auto N = static_cast<long long>(v.size());
    std::vector<ComplexFixed> a(v.begin(), v.end());
    if (N == 1) return a;
    const int B = a.front().frac_bits();
    const int bits = log2_exact(N);

    for (long long i = 0; i < N; ++i) {
        long long rev = 0;
        for (int b = 0; b < bits; ++b) {
            if (i & (1LL << b)) rev |= 1LL << (bits - 1 - b);
        }
        if (i < rev) std::swap(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(rev)]);
    }

    auto table = RootTable::shared(N, B);
    const long long sign = direction == FftDirection::forward ? -1 : 1;
    for (long long len = 2; len <= N; len <<= 1) {
        const long long stride = N / len;
        const long long half = len / 2;
        for (long long start = 0; start < N; start += len) {
            for (long long k = 0; k < half; ++k) {
                auto& even = a[static_cast<std::size_t>(start + k)];
                auto& odd = a[static_cast<std::size_t>(start + k + half)];
                ComplexFixed t = k == 0 ? odd : (*table)(sign * k * stride) * odd;
                odd = even - t;
                even += t;
            }
        }
    }

    if (direction == FftDirection::inverse) {
        const auto shift = static_cast<unsigned long>(bits);
        for (auto& z : a) {
            z.re().mantissa() = round_shift(z.re().mantissa(), shift);
            z.im().mantissa() = round_shift(z.im().mantissa(), shift);
        }
    }
    return a;
}

Rational fft_error_bound(long long N, const Rational& max_abs, int frac_bits, FftDirection direction) {
    Integer ulp_den(1);
    ulp_den <<= frac_bits;
    Rational ulp(Integer(1), ulp_den);
    Rational forward = Rational(static_cast<long>(N)) * (Rational(log2_exact(N)) * max_abs + 2) * ulp;
    if (direction == FftDirection::forward) return forward;
    return forward / Rational(static_cast<long>(N)) + ulp / 2;
}

Rational direct_dft_error_bound(long long N, const Rational& max_abs, int frac_bits, FftDirection direction) {
    Integer ulp_den(1);
    ulp_den <<= frac_bits;
    Rational ulp(Integer(1), ulp_den);
    Rational forward = Rational(static_cast<long>(N)) * (max_abs + 1) * ulp;
    if (direction == FftDirection::forward) return forward;
    return forward / Rational(static_cast<long>(N)) + ulp / 2;
}

std::vector<ComplexFixed> direct_dft(std::span<const ComplexFixed> v, FftDirection direction) {
    require_power_of_two(v.size());
    const auto N = static_cast<long long>(v.size());
    const int B = v.front().frac_bits();
    auto table = RootTable::shared(N, B);
    const long long sign = direction == FftDirection::forward ? -1 : 1;
    std::vector<ComplexFixed> out;
    out.reserve(v.size());
    for (long long k = 0; k < N; ++k) {
        ComplexFixed acc = ComplexFixed::zero(B);
        for (long long j = 0; j < N; ++j) {
            acc += (*table)(sign * ((j * k) % N)) * v[static_cast<std::size_t>(j)];
        }
        if (direction == FftDirection::inverse) {
            const auto shift = static_cast<unsigned long>(log2_exact(N));
            acc.re().mantissa() = round_shift(acc.re().mantissa(), shift);
            acc.im().mantissa() = round_shift(acc.im().mantissa(), shift);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

}  // namespace rrc::numeric
