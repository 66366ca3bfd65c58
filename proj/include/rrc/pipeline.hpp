#pragma once

#include "rrc/bounds.hpp"
#include "rrc/coeff_model.hpp"
#include "rrc/newman.hpp"
#include "rrc/params.hpp"
#include "rrc/trap.hpp"
#include "rrc/verify.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rrc {

struct RunConfig {
    std::string family;  // builtin name; ignored when model_path is set
    std::string model_path;
    int r = 0;
    Profile profile = Profile::practical;
    ParameterOverrides overrides;
    int retries = 6;
    unsigned threads = 1;
    CertifyOptions certify;
    std::string out_path;
    std::string trace_path;
    long trace_stride = 1;
    std::string nu_path;
};

/// One pass through decomposition + trap with a given (eta, ell).
struct Attempt {
    Rational eta;
    long ell = 0;
    long n = 0;
    std::optional<Rational> sum_bound;
    std::string outcome;  // "ok" or the error kind
};

struct ConstructResult {
    BuildParameters params;
    CoefficientModel model;
    NewmanDecomposition decomposition;
    Rational residual;
    Rational residual_threshold;
    TrapStats trap;
    std::vector<TraceRow> trace;
    PolynomialCertificate certificate;
    DampingPolynomial damping;
    std::vector<Attempt> attempts;
    nlohmann::json json;  // the certificate document, digest included
    double seconds = 0;
};

CoefficientModel load_model(const RunConfig& config);

/// Full pipeline with the eta/ell retry policy. Throws Error tagged with the failing stage.
ConstructResult construct(const RunConfig& config);

/// Canonical text of a certificate document: compact dump plus a newline.
std::string canonical_text(const nlohmann::json& doc);
/// SHA-256 hex digest of the canonical text of the document without its "digest" field.
std::string certificate_digest(const nlohmann::json& doc);

nlohmann::json certificate_json(const ConstructResult& result);

struct VerifyReport {
    bool ok = false;
    std::vector<std::string> problems;
};

/// Recomputes signs, Q margins, targets and the upper bound from the document alone.
VerifyReport verify_certificate_text(const std::string& text);

/// The subcommands; each returns a process exit code and reports on stderr.
int cmd_construct(const RunConfig& config);
int cmd_verify(const std::string& path);
int cmd_bound(long n, const Rational& A);
int cmd_decompose(const RunConfig& config);

}  // namespace rrc
