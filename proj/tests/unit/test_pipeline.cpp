#include "rrc/error.hpp"
#include "rrc/pipeline.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace rrc;

namespace {

RunConfig config(const char* family, int r) {
    RunConfig c;
    c.family = family;
    c.r = r;
    return c;
}

std::string temp_path(const std::string& name) { return "/tmp/rrc_test_" + name; }

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST_CASE("construct, verify and tamper") {
    auto res = construct(config("littlewood", 2));
    CHECK(res.certificate.root_count >= 2);
    CHECK(res.certificate.root_count <= res.damping.m);
    CHECK(res.attempts.size() == 1);
    const std::string text = canonical_text(res.json);
    CHECK(verify_certificate_text(text).ok);

    auto again = construct(config("littlewood", 2));
    CHECK(canonical_text(again.json) == text);

    SUBCASE("bit flips are rejected") {
        for (std::size_t pos : {std::size_t(0), text.size() / 3, text.find("\"brackets\"") + 14, text.size() - 5,
                                text.size() - 1}) {
            for (int bit : {0, 3, 6}) {
                std::string t = text;
                t[pos] = static_cast<char>(t[pos] ^ (1 << bit));
                CHECK_MESSAGE(!verify_certificate_text(t).ok, "pos ", pos, " bit ", bit);
            }
        }
    }
    SUBCASE("a flipped bracket endpoint is caught by the sign check even with a fresh digest") {
        auto doc = res.json;
        auto& br = doc["brackets"][0];
        br[1] = br[0];
        doc["digest"] = certificate_digest(doc);
        auto rep = verify_certificate_text(canonical_text(doc));
        CHECK(!rep.ok);
        CHECK(rep.problems.size() == 1);
    }
    SUBCASE("empty brackets with r = 0") {
        auto doc = res.json;
        doc["r"] = 0;
        doc["params"]["r"] = 0;
        doc["brackets"] = nlohmann::json::array();
        doc["root_count"] = 0;
        doc["digest"] = certificate_digest(doc);
        CHECK(verify_certificate_text(canonical_text(doc)).ok);
    }
    SUBCASE("cmd_verify on files") {
        const std::string path = temp_path("cert.json");
        write(path, text);
        CHECK(cmd_verify(path) == 0);
        std::string bad = text;
        bad[bad.size() / 2] ^= 1;
        write(path, bad);
        CHECK(cmd_verify(path) == 5);
        CHECK(cmd_verify(temp_path("missing.json")) == 2);
        std::remove(path.c_str());
    }
}

TEST_CASE("newman family") {
    auto res = construct(config("newman", 2));
    CHECK(res.certificate.root_count >= 2);
    CHECK(verify_certificate_text(canonical_text(res.json)).ok);
}

TEST_CASE("one-sided model is rejected at validation") {
    const std::string path = temp_path("onesided.json");
    write(path, R"({"period":1,"sets":[["1"]]})");
    RunConfig c;
    c.model_path = path;
    c.r = 2;
    CHECK(cmd_construct(c) == 2);
    try {
        construct(c);
        FAIL("expected NotBalanceable");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotBalanceable");
    }
    std::remove(path.c_str());
}

TEST_CASE("retry policy halves eta and doubles ell") {
    RunConfig c = config("littlewood", 1);
    c.profile = Profile::rigorous;
    c.overrides.degree = 120;
    c.retries = 2;
    try {
        construct(c);
        FAIL("expected DeltaExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == "DeltaExceeded");
    }
    CHECK(cmd_construct(c) == 3);
}

TEST_CASE("bound and decompose subcommands") {
    CHECK(cmd_bound(100, 1) == 0);
    CHECK(cmd_bound(0, 1) == 2);
    RunConfig c = config("littlewood", 1);
    c.nu_path = temp_path("nu.csv");
    CHECK(cmd_decompose(c) == 0);
    std::ifstream in(c.nu_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,nu_k,U_k");
    std::remove(c.nu_path.c_str());
}
