#include "rrc/error.hpp"
#include "rrc/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct Flags {
    std::optional<std::string> eta, c_prec, jensen_c;
    std::optional<long> ell, degree;
    std::optional<int> s, precision_bits;
    std::optional<long long> fft_size;
    std::string profile = "practical";
    bool s_r_plus_one = false;
};

void add_build_flags(CLI::App& cmd, rrc::RunConfig& cfg, Flags& f) {
    auto* fam = cmd.add_option("--family", cfg.family, "littlewood, newman or height1")->default_val("littlewood");
    cmd.add_option("--model", cfg.model_path, "coefficient model JSON")->excludes(fam);
    cmd.add_option("--roots,-r", cfg.r, "number of roots to force")->required();
    cmd.add_option("--eta", f.eta);
    cmd.add_option("--ell", f.ell);
    cmd.add_option("--s", f.s);
    cmd.add_flag("--s-r-plus-one", f.s_r_plus_one, "use s = r + 1 points");
    cmd.add_option("--precision-bits", f.precision_bits);
    cmd.add_option("--c-prec", f.c_prec, "bits of precision per unit of r");
    cmd.add_option("--fft-size", f.fft_size);
    cmd.add_option("--degree", f.degree);
    cmd.add_option("--jensen-c", f.jensen_c, "degree-selection constant for the practical profile");
    cmd.add_option("--profile", f.profile)->check(CLI::IsMember({"practical", "rigorous"}));
    cmd.add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
}

rrc::ParameterOverrides overrides(const Flags& f) {
    rrc::ParameterOverrides ov;
    if (f.eta) ov.eta = rrc::parse_rational(*f.eta);
    if (f.c_prec) ov.c_prec = rrc::parse_rational(*f.c_prec);
    if (f.jensen_c) ov.degree_jensen_c = rrc::parse_rational(*f.jensen_c);
    ov.ell = f.ell;
    ov.degree = f.degree;
    ov.s = f.s;
    ov.s_r_plus_one = f.s_r_plus_one;
    ov.precision_bits = f.precision_bits;
    ov.fft_size = f.fft_size;
    return ov;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polynomials with restricted coefficients and many certified real roots"};
    app.require_subcommand(1);

    rrc::RunConfig cfg;
    Flags flags;
    auto* construct = app.add_subcommand("construct", "build a polynomial and write its certificate");
    add_build_flags(*construct, cfg, flags);
    construct->add_option("--retries", cfg.retries)->default_val(6)->check(CLI::Range(0, 64));
    construct->add_option("--out,-o", cfg.out_path, "certificate path (stdout if omitted)");
    construct->add_option("--trace", cfg.trace_path, "trap trace CSV");
    construct->add_option("--trace-stride", cfg.trace_stride)->check(CLI::PositiveNumber);
    construct->add_option("--max-depth", cfg.certify.max_depth)->check(CLI::Range(1, 4096));

    std::string cert_path;
    auto* verify = app.add_subcommand("verify", "re-check a certificate");
    verify->add_option("certificate", cert_path)->required();

    long bound_n = 0;
    std::string bound_a = "1";
    auto* bound = app.add_subcommand("bound", "upper bound on the number of roots in (0, 1]");
    bound->add_option("-n,--degree", bound_n)->required();
    bound->add_option("-A,--height", bound_a)->default_val("1");

    rrc::RunConfig dcfg;
    Flags dflags;
    auto* decompose = app.add_subcommand("decompose", "dump nu_k and U_k as CSV");
    add_build_flags(*decompose, dcfg, dflags);
    decompose->add_option("--out,-o", dcfg.nu_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*construct) {
            cfg.overrides = overrides(flags);
            cfg.profile = rrc::parse_profile(flags.profile);
            return rrc::cmd_construct(cfg);
        }
        if (*verify) return rrc::cmd_verify(cert_path);
        if (*bound) return rrc::cmd_bound(bound_n, rrc::parse_rational(bound_a));
        dcfg.overrides = overrides(dflags);
        dcfg.profile = rrc::parse_profile(dflags.profile);
        return rrc::cmd_decompose(dcfg);
    } catch (const rrc::Error& e) {
        std::cerr << "error " << e.what() << '\n';
        return e.exit_code();
    }
}
