#include "rrc/pipeline.hpp"

#include "rrc/error.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace rrc {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Stage::validation, "FileNotFound", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Stage::validation, "CannotWrite", path);
    out << text;
}

json rationals(const std::vector<Rational>& values) {
    json a = json::array();
    for (const auto& v : values) a.push_back(to_string(v));
    return a;
}

bool retryable(const Error& e) { return e.kind() == "DeltaExceeded" || e.kind() == "TrapEscape"; }

}  // namespace

CoefficientModel load_model(const RunConfig& config) {
    if (!config.model_path.empty()) {
        json j;
        try {
            j = json::parse(read_file(config.model_path));
        } catch (const json::exception& e) {
            throw Error(Stage::validation, "BadModelFile", config.model_path + ": " + e.what());
        }
        return model_from_json(j);
    }
    return builtin_model(config.family.empty() ? "littlewood" : config.family);
}

ConstructResult construct(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    ConstructResult res;
    res.model = load_model(config);
    validate_model(res.model);
    ParameterOverrides ov = config.overrides;

    TargetPoints targets;
    TrapResult trap;
    for (int attempt = 0;; ++attempt) {
        res.params = select_parameters(res.model, config.r, ov, config.profile);
        targets = target_points(res.params);
        Attempt rec{res.params.eta, res.params.ell, res.params.n, std::nullopt, "ok"};
        try {
            DecompositionOptions dopt;
            dopt.enforce_delta = false;
            dopt.threads = config.threads;
            res.decomposition = compute_decomposition(res.params, targets, dopt);
            rec.sum_bound = res.decomposition.sum_bound.to_rational();
            if (config.profile == Profile::rigorous && !res.decomposition.delta_gate) {
                throw Error(Stage::decomposition, "DeltaExceeded",
                            "sum |nu_k| <= " + to_decimal(*rec.sum_bound, 8) + " is not below delta = " +
                                to_string(res.params.delta));
            }
            res.residual = verify_decomposition(res.decomposition, targets.points);
            res.residual_threshold = decomposition_residual_threshold(res.decomposition);
            TrapOptions topt;
            topt.full_trace = !config.trace_path.empty();
            topt.stride = config.trace_stride;
            trap = run(res.params, res.decomposition, res.model, topt);
            res.attempts.push_back(rec);
            break;
        } catch (const Error& e) {
            rec.outcome = e.kind();
            res.attempts.push_back(rec);
            if (!retryable(e) || attempt >= config.retries) throw;
            std::cerr << "retry " << attempt + 1 << ": " << e.kind() << " at eta = " << to_string(res.params.eta)
                      << ", ell = " << res.params.ell << '\n';
            ov.eta = res.params.eta / 2;
            ov.ell = res.params.ell * 2;
        }
    }
    res.trap = trap.stats;
    res.trace = std::move(trap.trace);

    res.certificate = assemble_polynomial(res.model, trap.eps);
    res.certificate.targets = targets.points;
    check_q_smallness(res.certificate, res.params);
    certify(res.certificate, res.params, config.certify);
    res.damping = build_damping(res.params.n, res.params.A, 0);
    if (res.certificate.root_count > res.damping.m) {
        throw Error(Stage::verification, "UpperBoundViolated",
                    std::to_string(res.certificate.root_count) + " roots exceed v ceil(sqrt n) = " +
                        std::to_string(res.damping.m));
    }
    res.json = certificate_json(res);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

std::string canonical_text(const json& doc) { return doc.dump() + "\n"; }

std::string certificate_digest(const json& doc) {
    json body = doc;
    body.erase("digest");
    const std::string text = canonical_text(body);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Stage::verification, "DigestFailed", "SHA-256 unavailable");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
}

json certificate_json(const ConstructResult& res) {
    const auto& p = res.params;
    const auto& c = res.certificate;
    const auto& d = res.decomposition;
    json doc;
    doc["format"] = "rrc-certificate/1";
    doc["r"] = p.r;
    doc["model"] = model_to_json(res.model);
    doc["params"] = params_to_json(p);
    doc["coefficients"] = rationals(c.coefficients);
    doc["targets"] = rationals(c.targets);
    doc["interval"] = {to_string(Rational(1 - 2 * p.alpha)), to_string(Rational(1 - p.alpha))};
    doc["q_threshold"] = to_string(c.q_threshold);
    doc["q_threshold_rigorous"] = to_string(c.q_threshold_rigorous);
    doc["q_tail_bound"] = to_string(c.q_tail_bound);
    json qm = json::array();
    for (const auto& q : c.q_margins) {
        qm.push_back({{"value", to_string(q.value)}, {"radius", to_string(q.radius)}, {"margin", to_string(q.margin)}});
    }
    doc["q_margins"] = qm;
    json br = json::array();
    for (const auto& [a, b] : c.brackets) br.push_back({to_string(a), to_string(b)});
    doc["brackets"] = br;
    doc["root_count"] = c.root_count;
    doc["decomposition"] = {
        {"fft_size", d.fft_size},
        {"sum_bound", to_string(d.sum_bound.to_rational())},
        {"aliasing_bound", to_string(d.aliasing_bound.to_rational())},
        {"tail_bound", to_string(d.tail_bound.to_rational())},
        {"max_imag", to_string(d.max_imag.to_rational())},
        {"delta_gate", d.delta_gate},
        {"residual", to_string(res.residual)},
        {"residual_threshold", to_string(res.residual_threshold)},
    };
    doc["trap"] = {
        {"max_abs_psi", to_string(res.trap.max_abs_psi.to_rational())},
        {"psi_violations", res.trap.psi_violations},
        {"lambda_violations", res.trap.lambda_violations},
        {"return_violations", res.trap.return_violations},
        {"drift_violations", res.trap.drift_violations},
        {"longest_excursion", res.trap.longest_excursion},
        {"max_drift", to_string(res.trap.max_drift.to_rational())},
        {"drift_limit", to_string(res.trap.drift_limit)},
    };
    json at = json::array();
    for (const auto& a : res.attempts) {
        at.push_back({{"eta", to_string(a.eta)},
                      {"ell", a.ell},
                      {"n", a.n},
                      {"sum_bound", a.sum_bound ? json(to_string(*a.sum_bound)) : json(nullptr)},
                      {"outcome", a.outcome}});
    }
    doc["attempts"] = at;
    doc["upper_bound"] = damping_to_json(res.damping, p.A);
    doc["digest"] = certificate_digest(doc);
    return doc;
}

VerifyReport verify_certificate_text(const std::string& text) {
    VerifyReport rep;
    auto fail = [&](std::string why) { rep.problems.push_back(std::move(why)); };
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("malformed JSON: ") + e.what());
        return rep;
    }
    try {
        if (canonical_text(doc) != text) fail("document is not in canonical form");
        if (!doc.contains("digest") || doc.at("digest") != certificate_digest(doc)) fail("digest mismatch");
        if (!rep.problems.empty()) return rep;

        const CoefficientModel model = model_from_json(doc.at("model"));
        const BuildParameters params = params_from_json(doc.at("params"));
        const int r = doc.at("r").get<int>();
        if (r != params.r) fail("r differs from params.r");

        std::vector<Rational> eps;
        const auto& coeffs = doc.at("coefficients");
        if (coeffs.empty() || parse_rational(coeffs.at(0).get<std::string>()) != 1) fail("constant term is not 1");
        for (std::size_t i = 1; i < coeffs.size(); ++i) eps.push_back(parse_rational(coeffs.at(i).get<std::string>()));
        if (static_cast<long>(eps.size()) != params.n) fail("degree differs from params.n");
        PolynomialCertificate cert = assemble_polynomial(model, eps);

        const TargetPoints targets = target_points(params);
        cert.targets = targets.points;
        if (doc.at("targets") != rationals(targets.points)) fail("targets differ from the recomputed layout");

        check_q_smallness(cert, params, false);
        if (doc.at("q_threshold") != to_string(cert.q_threshold)) fail("q_threshold differs");
        if (doc.at("q_threshold_rigorous") != to_string(cert.q_threshold_rigorous)) fail("q_threshold_rigorous differs");
        if (doc.at("q_tail_bound") != to_string(cert.q_tail_bound)) fail("q_tail_bound differs");
        const auto& qm = doc.at("q_margins");
        if (qm.size() != cert.q_margins.size()) fail("q_margins has the wrong length");
        for (std::size_t j = 0; j < cert.q_margins.size() && j < qm.size(); ++j) {
            const auto& q = cert.q_margins[j];
            if (qm[j].at("value") != to_string(q.value) || qm[j].at("radius") != to_string(q.radius) ||
                qm[j].at("margin") != to_string(q.margin)) {
                fail("q_margins[" + std::to_string(j) + "] differs from recomputation");
            }
            if (q.margin <= 0) fail("|Q_n(x_" + std::to_string(j + 1) + ")| is not below q_threshold");
        }

        for (const auto& b : doc.at("brackets")) {
            cert.brackets.emplace_back(parse_rational(b.at(0).get<std::string>()),
                                       parse_rational(b.at(1).get<std::string>()));
        }
        cert.root_count = doc.at("root_count").get<long>();
        const Rational lo = 1 - 2 * params.alpha, hi = 1 - params.alpha;
        if (doc.at("interval") != json{to_string(lo), to_string(hi)}) fail("interval differs from I(alpha)");
        if (!brackets_valid(cert, lo, hi)) fail("brackets do not certify root_count sign changes in I(alpha)");
        if (cert.root_count < r) fail("root_count below r");

        const auto damping = build_damping(params.n, params.A, 0);
        if (doc.at("upper_bound") != damping_to_json(damping, params.A)) fail("upper_bound differs");
        if (cert.root_count > damping.m) fail("root_count exceeds the upper bound");
    } catch (const Error& e) {
        fail(e.what());
    } catch (const std::exception& e) {
        fail(std::string("schema: ") + e.what());
    }
    rep.ok = rep.problems.empty();
    return rep;
}

namespace {

int report(const Error& e) {
    static const char* names[] = {"", "", "validation", "decomposition", "trap", "verification"};
    std::cerr << "error [" << names[e.exit_code()] << "] " << e.what() << '\n';
    return e.exit_code();
}

}  // namespace

int cmd_construct(const RunConfig& config) {
    try {
        ConstructResult res = construct(config);
        const std::string text = canonical_text(res.json);
        if (config.out_path.empty()) {
            std::cout << text;
        } else {
            write_file(config.out_path, text);
        }
        if (!config.trace_path.empty()) {
            std::ofstream out(config.trace_path);
            write_trace_csv(out, res.trace);
        }
        std::cerr << res.model.name << " r=" << res.params.r << " n=" << res.params.n
                  << " roots=" << res.certificate.root_count << " bound=" << res.damping.m
                  << " sum|nu|<=" << to_decimal(res.decomposition.sum_bound.to_rational(), 4)
                  << " max|psi|=" << to_decimal(res.trap.max_abs_psi.to_rational(), 4) << " time=" << std::fixed
                  << std::setprecision(2) << res.seconds << "s\n";
        return 0;
    } catch (const Error& e) {
        return report(e);
    } catch (const std::exception& e) {
        std::cerr << "error [validation] " << e.what() << '\n';
        return static_cast<int>(Stage::validation);
    }
}

int cmd_verify(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        return report(e);
    }
    VerifyReport rep = verify_certificate_text(text);
    if (rep.ok) {
        std::cerr << "certificate ok\n";
        return 0;
    }
    for (const auto& p : rep.problems) std::cerr << "error [verification] " << p << '\n';
    return static_cast<int>(Stage::verification);
}

int cmd_bound(long n, const Rational& A) {
    try {
        std::cout << damping_to_json(build_damping(n, A, 0), A).dump() << '\n';
        return 0;
    } catch (const Error& e) {
        return report(e);
    }
}

int cmd_decompose(const RunConfig& config) {
    try {
        const CoefficientModel model = load_model(config);
        const BuildParameters params = select_parameters(model, config.r, config.overrides, config.profile);
        const TargetPoints targets = target_points(params);
        DecompositionOptions opt;
        opt.enforce_delta = false;
        opt.threads = config.threads;
        const NewmanDecomposition dec = compute_decomposition(params, targets, opt);
        const Rational residual = verify_decomposition(dec, targets.points);
        if (config.nu_path.empty()) {
            write_decomposition_csv(std::cout, dec);
        } else {
            std::ofstream out(config.nu_path);
            write_decomposition_csv(out, dec);
        }
        std::cerr << "n=" << params.n << " N=" << dec.fft_size << " sum|nu|<=" << to_decimal(dec.sum_bound.to_rational(), 6)
                  << " delta=" << to_string(params.delta) << " residual=" << to_decimal(residual, 4) << '\n';
        return 0;
    } catch (const Error& e) {
        return report(e);
    }
}

}  // namespace rrc
