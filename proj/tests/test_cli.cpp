#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cstab/cli.hpp"

using namespace cstab;

namespace {

struct CliResult {
    int status;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status = run_cli(args, out, err);
    return {status, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/cstab_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("verify: catalog case exits 0 and reports the residual") {
    CliResult r = run({"verify", "EX04"});
    CHECK(r.status == 0);
    CHECK(r.out.find("EX04: PASS") != std::string::npos);
}

TEST_CASE("verify: unknown id exits 2 and names the id") {
    CliResult r = run({"verify", "NOSUCH"});
    CHECK(r.status == 2);
    CHECK(r.err.find("NOSUCH") != std::string::npos);
}

TEST_CASE("verify: json and csv outputs are written and parseable") {
    std::string jpath = temp_path("ex04.json"), cpath = temp_path("ex04.csv");
    CliResult r = run({"verify", "EX04", "--json", jpath, "--csv", cpath});
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(jpath));
    CHECK(j.is_array());
    CHECK(j[0]["id"] == "EX04");
    CHECK(j[0]["verdict"] == "PASS");
    CHECK(j[0]["reports"][0]["worst_residual"].get<double>() <= 1e-10);
    std::string csv = slurp(cpath);
    CHECK(csv.rfind("case,report,n,point,residual\n", 0) == 0);
    CHECK(csv.find("EX04") != std::string::npos);
    std::remove(jpath.c_str());
    std::remove(cpath.c_str());
}

TEST_CASE("verify: parameter overrides flow through") {
    CliResult r = run({"verify", "EX04", "--param", "gamma=3.5"});
    CHECK(r.status == 0);
    CliResult bad = run({"verify", "EX04", "--param", "nope=1"});
    CHECK(bad.status == 2);
}

TEST_CASE("verify: spec files run custom claims") {
    std::string spec = temp_path("claim.json");
    {
        std::ofstream f(spec);
        f << R"({
            "distribution": {"family": "gamma", "params": {"b": 1.0, "gamma": 2.0}},
            "system": "additive", "definition": "cs",
            "normalizer": {"id": "gamma_reference", "params": {"b": 1.0}},
            "n": [2, 3, 4]
        })";
    }
    CliResult r = run({"verify", spec});
    CHECK(r.status == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    std::remove(spec.c_str());
}

TEST_CASE("verify: solved normalizers work from spec files") {
    std::string spec = temp_path("solved.json");
    {
        std::ofstream f(spec);
        f << R"({
            "distribution": {"family": "weibull", "params": {"alpha": 2.0, "beta": 1.0}},
            "system": "min", "definition": "pursuit",
            "normalizer": "solved",
            "n": [2, 3]
        })";
    }
    CliResult r = run({"verify", spec});
    CHECK(r.status == 0);
    std::remove(spec.c_str());
}

TEST_CASE("verify: malformed spec file exits 2") {
    std::string spec = temp_path("broken.json");
    {
        std::ofstream f(spec);
        f << "{ not json";
    }
    CliResult r = run({"verify", spec});
    CHECK(r.status == 2);
    CHECK(r.err.find("malformed") != std::string::npos);
    std::remove(spec.c_str());
}

TEST_CASE("coeffs: candidate normalizer head values") {
    CliResult r = run({"coeffs", "eq14", "--gamma", "0.5", "--a", "0.75", "--n", "2",
                       "--order", "8"});
    CHECK(r.status == 0);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    CHECK(line == "k,coefficient");
    double c0, c1, c2;
    char comma;
    int k;
    std::getline(is, line); { std::istringstream ls(line); ls >> k >> comma >> c0; }
    std::getline(is, line); { std::istringstream ls(line); ls >> k >> comma >> c1; }
    std::getline(is, line); { std::istringstream ls(line); ls >> k >> comma >> c2; }
    CHECK(c0 == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK(c1 == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(c2 == doctest::Approx(3.0 / 128.0).epsilon(1e-12));
}

TEST_CASE("coeffs: unknown family exits 2") {
    CliResult r = run({"coeffs", "nope", "--order", "4"});
    CHECK(r.status == 2);
}

TEST_CASE("solve: gamma family matches the reference normalizer") {
    CliResult r = run({"solve", "gamma:b=1,gamma=2", "--definition", "cs", "--n", "2"});
    CHECK(r.status == 0);
    // spot-check one row: at s = 1, g_2(1) = exp(1 - sqrt(2))
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line); // header
    bool checked = false;
    while (std::getline(is, line)) {
        auto comma = line.find(',');
        double s = std::stod(line.substr(0, comma));
        double v = std::stod(line.substr(comma + 1));
        double want = std::exp(1.0 - std::pow(1.0 + s, 0.5));
        CHECK(v == doctest::Approx(want).epsilon(1e-9));
        checked = true;
    }
    CHECK(checked);
}

TEST_CASE("simulate: geometric case passes and honours the seed") {
    std::string jpath = temp_path("sim.json");
    std::string spath = temp_path("sim_samples.csv");
    CliResult r = run({"simulate", "EX04G", "--samples", "50000", "--seed", "3", "--n", "2",
                       "--json", jpath, "--samples-csv", spath});
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(jpath));
    CHECK(j["pass"].get<bool>());
    CHECK(j["seed"] == 3);
    std::string csv = slurp(spath);
    CHECK(csv.find("seed=3") != std::string::npos);
    CHECK(csv.find("value\n") != std::string::npos);
    std::remove(jpath.c_str());
    std::remove(spath.c_str());

    CliResult bad = run({"simulate", "EX03", "--samples", "1000"});
    CHECK(bad.status == 2); // no sampler path for additive continuous cases
}

TEST_CASE("scan: restricted grid completes") {
    CliResult r = run({"scan", "ex05", "--grid", "gamma=0.5:0.5:0.1,a=0.1:0.9:0.1,n=2:16"});
    CHECK(r.status == 0);
    CHECK(r.out.find("violations=0") != std::string::npos);
    CliResult bad = run({"scan", "ex07"});
    CHECK(bad.status == 2);
}

TEST_CASE("report --all: exits 0 and is byte-identical across runs") {
    std::string p1 = temp_path("rep1.json"), p2 = temp_path("rep2.json");
    CliResult r1 = run({"report", "--all", "--seed", "7", "--out", p1});
    CliResult r2 = run({"report", "--all", "--seed", "7", "--out", p2});
    CHECK(r1.status == 0);
    CHECK(r2.status == 0);
    std::string a = slurp(p1), b = slurp(p2);
    CHECK(!a.empty());
    CHECK(a == b);
    nlohmann::json j = nlohmann::json::parse(a);
    CHECK(j["schema_version"] == 1);
    CHECK(j["seed"] == 7);
    CHECK(j["cases"].size() == 17);
    CHECK(j["summary"]["matched"] == 17);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("usage errors exit 2") {
    CliResult r = run({"frobnicate"});
    CHECK(r.status == 2);
    CliResult empty = run({});
    CHECK(empty.status == 2);
    CliResult noflag = run({"report"});
    CHECK(noflag.status == 2);
}
