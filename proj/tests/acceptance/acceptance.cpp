// Acceptance suite. `setup DIR` runs the eight constructions once; `check K DIR`
// evaluates one criterion (1..7, or "slope") and prints a single PASS/FAIL line.
#include "rrc/error.hpp"
#include "rrc/numeric/fft.hpp"
#include "rrc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace rrc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kFamilies[] = {"littlewood", "newman"};
const int kRoots[] = {2, 4, 6, 8};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string stem(const std::string& family, int r) { return family + "_r" + std::to_string(r); }

struct Run {
    std::string family;
    int r = 0;
    int exit_code = -1;
    double seconds = 0;
    json cert;  // null unless the run succeeded
    std::string text;
};

std::vector<Run> load_runs(const fs::path& dir) {
    std::vector<Run> runs;
    for (const char* fam : kFamilies) {
        for (int r : kRoots) {
            Run run{fam, r};
            const fs::path summary = dir / (stem(fam, r) + ".summary.json");
            if (!fs::exists(summary)) throw std::runtime_error("missing " + summary.string() + "; run setup first");
            json s = json::parse(read(summary));
            run.exit_code = s.at("exit_code").get<int>();
            run.seconds = s.at("seconds").get<double>();
            if (run.exit_code == 0) {
                run.text = read(dir / (stem(fam, r) + ".cert.json"));
                run.cert = json::parse(run.text);
            }
            runs.push_back(std::move(run));
        }
    }
    return runs;
}

Rational rat(const json& j) { return parse_rational(j.get<std::string>()); }

std::string dec(const Rational& q, int digits = 3) { return to_decimal(q, digits); }

int setup(const fs::path& dir) {
    fs::create_directories(dir);
    for (const char* fam : kFamilies) {
        for (int r : kRoots) {
            RunConfig c;
            c.family = fam;
            c.r = r;
            c.out_path = (dir / (stem(fam, r) + ".cert.json")).string();
            fs::remove(c.out_path);
            const auto t0 = std::chrono::steady_clock::now();
            const int code = cmd_construct(c);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::ofstream(dir / (stem(fam, r) + ".summary.json")) << json{{"exit_code", code}, {"seconds", secs}}.dump()
                                                                   << '\n';
        }
    }
    return 0;
}

Outcome criterion1(const std::vector<Run>& runs) {
    Outcome o{true, ""};
    double c_obs = 0, worst_time = 0;
    std::map<std::string, std::vector<double>> ratios;
    std::ostringstream bad;
    for (const auto& run : runs) {
        worst_time = std::max(worst_time, run.seconds);
        if (run.exit_code != 0) {
            o.pass = false;
            bad << " " << stem(run.family, run.r) << " exit " << run.exit_code;
            continue;
        }
        const auto rep = verify_certificate_text(run.text);
        const long roots = run.cert.at("root_count").get<long>();
        const long n = run.cert.at("params").at("n").get<long>();
        if (!rep.ok || roots < run.r || run.cert.at("brackets").size() != static_cast<std::size_t>(roots)) {
            o.pass = false;
            bad << " " << stem(run.family, run.r) << " certificate rejected";
        }
        if (run.seconds > 600) {
            o.pass = false;
            bad << " " << stem(run.family, run.r) << " took " << run.seconds << "s";
        }
        const double ratio = static_cast<double>(n) / (run.r * run.r);
        ratios[run.family].push_back(ratio);
        c_obs = std::max(c_obs, ratio);
    }
    // n / r^2 must not grow with r
    for (const auto& [fam, v] : ratios) {
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (v[i] > v[i - 1] * 1.0001) {
                o.pass = false;
                bad << " " << fam << " n/r^2 increases";
            }
        }
    }
    std::ostringstream d;
    d << "8 runs, C_obs = max n/r^2 = " << std::fixed << std::setprecision(1) << c_obs << ", slowest "
      << std::setprecision(1) << worst_time << "s" << bad.str();
    o.detail = d.str();
    return o;
}

Outcome criterion2(const std::vector<Run>& runs) {
    Outcome o{true, ""};
    std::ostringstream d, bad;
    Rational worst_ratio(0), min_sum(-1), max_sum(0);
    for (const auto& run : runs) {
        if (run.exit_code != 0) continue;
        const BuildParameters p = params_from_json(run.cert.at("params"));
        const TargetPoints t = target_points(p);
        const NewmanDecomposition decomp = compute_decomposition(p, t, {.enforce_delta = false});
        const Rational residual = decomposition_residual(decomp, t.points);
        const Rational threshold = decomposition_residual_threshold(decomp);
        if (residual > threshold) {
            o.pass = false;
            bad << " " << stem(run.family, run.r) << " residual above budget";
        }
        if (to_string(decomp.sum_bound.to_rational()) != run.cert.at("decomposition").at("sum_bound")) {
            o.pass = false;
            bad << " " << stem(run.family, run.r) << " sum bound not reproducible";
        }
        const Rational sum = decomp.sum_bound.to_rational();
        if (!(sum < p.delta)) o.pass = false;
        worst_ratio = std::max(worst_ratio, Rational(residual / threshold));
        if (min_sum < 0 || sum < min_sum) min_sum = sum;
        max_sum = std::max(max_sum, sum);
    }
    // s = 1 toy instance against direct summation
    BuildParameters toy;
    toy.s = 1;
    toy.eta = Rational(1, 8);
    toy.mu = 1 - toy.eta;
    toy.ell = 32;
    toy.n = 60;
    toy.fft_size = 1024;
    toy.precision_bits = 64;
    toy.delta = Rational(1, 24);
    const std::vector<Rational> x{Rational(97, 100)};
    auto fast = compute_decomposition(toy, x, {.enforce_delta = false});
    auto slow = compute_decomposition(toy, x, {.enforce_delta = false, .direct = true});
    Rational diff(0);
    for (std::size_t k = 0; k < fast.nu.size(); ++k) {
        diff = std::max(diff, abs(Rational(fast.nu[k].to_rational() - slow.nu[k].to_rational())));
    }
    const bool toy_ok = diff <= Rational(Integer(1), Integer(1) << 58);
    if (!toy_ok) o.pass = false;
    d << "residual/budget <= " << dec(worst_ratio) << "; sum|nu| bound in [" << dec(min_sum) << ", " << dec(max_sum)
      << "] vs delta 1/24 (littlewood), 1/84 (newman): " << (max_sum < Rational(1, 84) ? "below" : "NOT below")
      << "; toy FFT vs direct max diff " << dec(diff) << (toy_ok ? " <= 2^-(B-6)" : " > 2^-(B-6)") << bad.str();
    o.detail = d.str();
    return o;
}

Outcome criterion3(const std::vector<Run>& runs) {
    Outcome o{true, ""};
    long psi = 0, lam = 0, ret = 0, checked = 0;
    Rational max_psi(0);
    for (const auto& run : runs) {
        if (run.exit_code != 0) continue;
        ++checked;
        const auto& t = run.cert.at("trap");
        psi += t.at("psi_violations").get<long>();
        lam += t.at("lambda_violations").get<long>();
        ret += t.at("return_violations").get<long>();
        const Rational m = rat(t.at("max_abs_psi"));
        const auto& p = run.cert.at("params");
        if (m > rat(p.at("mu")) * rat(p.at("Lambda"))) ++psi;
        max_psi = std::max(max_psi, m);
    }
    o.pass = checked > 0 && psi == 0 && lam == 0 && ret == 0;
    std::ostringstream d;
    d << checked << " traces; violations psi " << psi << ", lambda " << lam << ", return-to-Psi " << ret
      << "; max|psi| = " << dec(max_psi);
    o.detail = d.str();
    return o;
}

Outcome criterion4(const std::vector<Run>& runs) {
    Outcome o{true, ""};
    long rigorous_fail = 0, gate_fail = 0, tail_fail = 0, checked = 0;
    Rational worst_q(0), best_rig(-1);
    for (const auto& run : runs) {
        if (run.exit_code != 0) continue;
        const Rational rig = rat(run.cert.at("q_threshold_rigorous"));
        const Rational gate = rat(run.cert.at("q_threshold"));
        const Rational tail = rat(run.cert.at("q_tail_bound"));
        for (const auto& q : run.cert.at("q_margins")) {
            ++checked;
            const Rational v = abs(rat(q.at("value")));
            const Rational radius = rat(q.at("radius"));
            if (!(v + radius < rig)) ++rigorous_fail;
            if (!(v + radius < gate)) ++gate_fail;
            if (!(tail > v - radius)) ++tail_fail;
            worst_q = std::max(worst_q, Rational(v + radius));
        }
        if (best_rig < 0 || rig > best_rig) best_rig = rig;
    }
    o.pass = checked > 0 && rigorous_fail == 0 && tail_fail == 0;
    std::ostringstream d;
    d << checked << " points; |Q|+radius <= " << dec(worst_q) << "; below alpha e^{-2 beta}/(2(s-1)) with C(A): "
      << checked - rigorous_fail << "/" << checked << " (largest such threshold " << dec(best_rig)
      << "); below degree-selection threshold: " << checked - gate_fail << "/" << checked
      << "; analytic tail bound exceeds |Q| - radius: " << checked - tail_fail << "/" << checked;
    o.detail = d.str();
    return o;
}

Outcome criterion5(const std::vector<Run>& runs) {
    Outcome o{true, ""};
    std::ostringstream d, bad;
    long certs = 0;
    for (const auto& run : runs) {
        if (run.exit_code != 0) continue;
        ++certs;
        const long n = run.cert.at("params").at("n").get<long>();
        const long roots = run.cert.at("root_count").get<long>();
        const long m = upper_bound(n, rat(run.cert.at("params").at("A")));
        if (roots > m) {
            o.pass = false;
            bad << " " << stem(run.family, run.r) << " " << roots << " > " << m;
        }
    }
    for (long n : {16L, 64L, 256L}) {
        auto damp = build_damping(n, 1);
        if (damp.v != 4 || !damp.sum_exact || !(damp.sum_check < 1) || !damp.roots_real) {
            o.pass = false;
            bad << " v/sum check failed at n=" << n;
        }
    }
    long pointwise = 0;
    for (long n = 1; n <= 256; ++n) {
        auto damp = build_damping(n, 1);
        if (!damp.pointwise_ok.value_or(false)) {
            o.pass = false;
            bad << " |q_1(k)| > 1/(2 sqrt k) at n=" << n;
        }
        ++pointwise;
    }
    d << certs << " certificates within v(A) ceil(sqrt n); v=4 with exact sum < 1 at n=16,64,256; pointwise bound for n=1.."
      << pointwise << bad.str();
    o.detail = d.str();
    return o;
}

Outcome criterion6() {
    using namespace rrc::numeric;
    Outcome o{true, ""};
    std::ostringstream d;
    const int B = 80;
    std::mt19937_64 rng(20261019);
    std::uniform_int_distribution<long> dist(-1000000, 1000000);
    Rational worst(0);
    for (std::size_t N : {16u, 64u}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<ComplexFixed> v;
            for (std::size_t i = 0; i < N; ++i) {
                v.push_back(ComplexFixed::from_rational(Rational(dist(rng), 1000000), Rational(dist(rng), 1000000), B));
            }
            const auto n = static_cast<long long>(N);
            for (auto dir : {FftDirection::forward, FftDirection::inverse}) {
                auto a = fft(v, dir);
                auto b = direct_dft(v, dir);
                const Rational bound = fft_error_bound(n, 2, B, dir) + direct_dft_error_bound(n, 2, B, dir);
                for (std::size_t k = 0; k < N; ++k) {
                    Rational e = std::max(abs(Rational(a[k].re().to_rational() - b[k].re().to_rational())),
                                          abs(Rational(a[k].im().to_rational() - b[k].im().to_rational())));
                    if (e > bound) o.pass = false;
                    worst = std::max(worst, Rational(e / bound));
                }
                if (fft(v, dir) != a) o.pass = false;
            }
            auto back = fft(fft(v, FftDirection::forward), FftDirection::inverse);
            const Rational rt = fft_error_bound(n, Rational(static_cast<long>(2 * n)), B, FftDirection::inverse) +
                                2 * fft_error_bound(n, 2, B, FftDirection::forward);
            for (std::size_t k = 0; k < N; ++k) {
                if (abs(Rational(back[k].re().to_rational() - v[k].re().to_rational())) > rt ||
                    abs(Rational(back[k].im().to_rational() - v[k].im().to_rational())) > rt) {
                    o.pass = false;
                }
            }
        }
    }
    auto model = builtin_model("littlewood");
    auto p = select_parameters(model, 2);
    auto t = target_points(p);
    auto d1 = compute_decomposition(p, t, {.enforce_delta = false, .threads = 1});
    auto d2 = compute_decomposition(p, t, {.enforce_delta = false, .threads = 1});
    auto d3 = compute_decomposition(p, t, {.enforce_delta = false, .threads = 3});
    const bool same = d1.nu == d2.nu && d1.nu == d3.nu && d1.U == d3.U;
    if (!same) o.pass = false;
    d << "FFT vs direct DFT error/bound <= " << dec(worst) << " on 16/64 points; forward-inverse within bound; "
      << "decomposition bit-identical across runs and 1 vs 3 threads: " << (same ? "yes" : "no");
    o.detail = d.str();
    return o;
}

Outcome criterion7(const fs::path& dir) {
    Outcome o{true, ""};
    std::ostringstream d;
    RunConfig c;
    c.family = "littlewood";
    c.r = 4;
    c.out_path = (dir / "determinism_a.json").string();
    const int e1 = cmd_construct(c);
    c.out_path = (dir / "determinism_b.json").string();
    const int e2 = cmd_construct(c);
    const std::string a = read(dir / "determinism_a.json"), b = read(dir / "determinism_b.json");
    const bool identical = e1 == 0 && e2 == 0 && a == b;
    const bool accepted = cmd_verify((dir / "determinism_a.json").string()) == 0;
    long flips = 0, rejected = 0;
    // every bit of 512 evenly spaced bytes, plus every bit of the digest field
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < 512; ++i) positions.push_back(i * (a.size() - 1) / 511);
    const std::size_t dg = a.find("\"digest\"");
    for (std::size_t i = dg; i < std::min(a.size(), dg + 80); ++i) positions.push_back(i);
    for (std::size_t pos : positions) {
        for (int bit = 0; bit < 8; ++bit) {
            std::string t = a;
            t[pos] = static_cast<char>(t[pos] ^ (1 << bit));
            ++flips;
            if (!verify_certificate_text(t).ok) ++rejected;
        }
    }
    o.pass = identical && accepted && flips == rejected;
    d << "two constructions byte-identical: " << (identical ? "yes" : "no") << "; verify accepts: "
      << (accepted ? "yes" : "no") << "; single-bit tampering rejected " << rejected << "/" << flips;
    o.detail = d.str();
    return o;
}

Outcome slope(const std::vector<Run>& runs) {
    Outcome o{true, ""};
    std::ostringstream d;
    d << std::fixed << std::setprecision(2);
    bool first = true;
    for (const char* fam : kFamilies) {
        std::vector<double> xs, ys;
        for (const auto& run : runs) {
            if (run.family != fam || run.exit_code != 0 || (run.r != 2 && run.r != 4 && run.r != 8)) continue;
            xs.push_back(std::log(run.r));
            ys.push_back(std::log(run.seconds));
        }
        if (xs.size() < 3) {
            o.pass = false;
            d << (first ? "" : "; ") << fam << ": missing runs";
            first = false;
            continue;
        }
        const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        const double s = sxy / sxx;
        if (s < 3.5 || s > 5.5) o.pass = false;
        d << (first ? "" : "; ") << fam << " log-log slope " << s;
        first = false;
    }
    d << " (target [3.5, 5.5] over r = 2, 4, 8)";
    o.detail = d.str();
    return o;
}

Outcome evaluate(const std::string& which, const fs::path& dir) {
    if (which == "6") return criterion6();
    if (which == "7") return criterion7(dir);
    const auto runs = load_runs(dir);
    if (which == "1") return criterion1(runs);
    if (which == "2") return criterion2(runs);
    if (which == "3") return criterion3(runs);
    if (which == "4") return criterion4(runs);
    if (which == "5") return criterion5(runs);
    if (which == "slope") return slope(runs);
    throw std::runtime_error("unknown criterion " + which);
}

void print(const std::string& which, const Outcome& o) {
    const std::string label = which == "slope" ? "note (runtime slope)" : "criterion " + which;
    std::cout << label << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (args.size() == 2 && args[0] == "setup") return setup(args[1]);
        if (args.size() == 3 && args[0] == "check") {
            const Outcome o = evaluate(args[1], args[2]);
            print(args[1], o);
            return o.pass ? 0 : 1;
        }
        if (args.size() == 2 && args[0] == "all") {
            if (!fs::exists(fs::path(args[1]) / "newman_r8.summary.json")) setup(args[1]);
            bool all = true;
            for (const char* k : {"1", "2", "3", "4", "5", "6", "7", "slope"}) {
                const Outcome o = evaluate(k, args[1]);
                print(k, o);
                all = all && o.pass;
            }
            return all ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << '\n';
        return 2;
    }
    std::cerr << "usage: acceptance setup DIR | check {1..7|slope} DIR | all DIR\n";
    return 2;
}
