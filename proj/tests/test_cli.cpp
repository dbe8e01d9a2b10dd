#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "modalctl/cli.hpp"
#include "support.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Workdir {
    fs::path dir;
    Workdir() : dir(fs::temp_directory_path() / ("modalctl_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(dir);
    }
    ~Workdir() { fs::remove_all(dir); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    }
};

struct Run {
    int code;
    std::string out, err;
    json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = modalctl::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const char* kLambert = R"({"schema_version": 1, "kind": "quasipoly", "dim": 1, "delays": [0, 1],
  "neutral_coeffs": [[[[0, 0]]], [[[0, 0]]]], "retarded_coeffs": [[[[0, 0]]], [[[1, 0]]]]})";

const char* kZeroCoupling = R"({"schema_version": 1, "kind": "modal", "input_dim": 1,
  "expansion_time": 0, "minimality_interval": 1,
  "modes": [{"lambda": [-1, 0], "chain_lengths": [1], "input_coupling": [[[1, 0]]]},
            {"lambda": [-2, 0], "chain_lengths": [1], "input_coupling": [[[0, 0]]]},
            {"lambda": [-3, 0], "chain_lengths": [1], "input_coupling": [[[1, 0]]]}]})";

const char* kWave = R"({"schema_version": 1, "kind": "preset", "preset": "wave", "params": {"K": 8, "mu": 0.5}})";

bool has_warning(const json& rep, const std::string& prefix) {
    for (const auto& w : rep["warnings"])
        if (w.get<std::string>().rfind(prefix, 0) == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("spectrum on z - e^{-z}") {
    Workdir w;
    const auto model = w.write("q.json", kLambert);
    const Run r = run({"spectrum", "--model", model, "--region", "-2,2,-2,2", "--no-timestamp"});
    REQUIRE(r.code == 0);
    const json rep = r.report();
    CHECK(rep["command"] == "spectrum");
    CHECK(rep["schema_version"] == 1);
    REQUIRE(rep["results"]["roots"].size() == 1);
    CHECK(std::abs(rep["results"]["roots"][0]["location"][0].get<double>() - support::omega_bisection()) < 1e-9);
    CHECK(std::abs(rep["results"]["exponential_type"]["omega"].get<double>() - 1.0) < 0.05);
    CHECK(has_warning(rep, "estimated omega"));
    CHECK_FALSE(rep.contains("timestamp"));
}

TEST_CASE("spectrum without a region is an error") {
    Workdir w;
    const Run r = run({"spectrum", "--model", w.write("q.json", kLambert)});
    CHECK(r.code == 1);
    CHECK(r.err.find("region") != std::string::npos);
}

TEST_CASE("attain on the wave preset passes") {
    Workdir w;
    const Run r = run({"attain", "--model", w.write("w.json", kWave), "--horizons", "7,9", "--no-timestamp"});
    REQUIRE(r.code == 0);
    const json rep = r.report();
    CHECK(rep["results"]["passed"] == true);
    CHECK(rep["results"]["dims"] == json::array({8, 8}));
    CHECK(rep["preset"] == "wave");
    CHECK(has_warning(rep, "truncation"));
}

TEST_CASE("check with a zero coupling fails at that mode") {
    Workdir w;
    const Run r = run({"check", "--model", w.write("z.json", kZeroCoupling), "--no-timestamp"});
    CHECK(r.code == 2);
    CHECK(r.report()["results"]["verdict"] == "fail-at-2");
    CHECK(r.report()["exit_code"] == 2);

    const Run first = run({"check", "--model", w.write("z.json", kZeroCoupling), "--modes", "1", "--no-timestamp"});
    CHECK(first.code == 0);
    CHECK(first.report()["results"]["verdict"] == "pass-up-to-1");
    CHECK(has_warning(first.report(), "pass-up-to-N only"));
}

TEST_CASE("minimality on the ODE preset") {
    Workdir w;
    const auto model = w.write("o.json", R"({"schema_version":1,"kind":"preset","preset":"ode","params":{"n":4}})");
    const Run r = run({"minimality", "--model", model, "--sections", "3", "--no-timestamp"});
    REQUIRE(r.code == 0);
    const json rep = r.report();
    CHECK(rep["results"]["margins"].size() == 3);
    CHECK(rep["results"]["biorthogonal"]["computed"] == true);
    CHECK(rep["results"]["biorthogonal"]["kronecker_residual"].get<double>() < 1e-8);
    CHECK(rep["results"]["statement"].get<std::string>().find("finite-section evidence") != std::string::npos);
    CHECK(has_warning(rep, "finite-section evidence"));
}

TEST_CASE("quasipoly models are bridged when couplings are supplied") {
    Workdir w;
    const auto model = w.write("qc.json", R"({"schema_version": 1, "kind": "quasipoly", "dim": 1, "delays": [0, 1],
      "neutral_coeffs": [[[[0, 0]]], [[[0, 0]]]], "retarded_coeffs": [[[[0, 0]]], [[[1, 0]]]],
      "region": [-1, 1, -1, 1], "couplings": [[[[1, 0]]]]})");
    const Run r = run({"check", "--model", model, "--no-timestamp"});
    CHECK(r.code == 0);
    CHECK(has_warning(r.report(), "estimated omega"));
    CHECK(r.report()["results"]["sufficiency_horizon"].get<double>() == doctest::Approx(2.05).epsilon(0.03));

    const Run bare = run({"check", "--model", w.write("q.json", kLambert), "--region", "-1,1,-1,1"});
    CHECK(bare.code == 1);
    CHECK(bare.err.find("couplings") != std::string::npos);
}

TEST_CASE("reports are byte-identical without the timestamp") {
    Workdir w;
    const auto model = w.write("w.json", kWave);
    const Run a = run({"attain", "--model", model, "--horizons", "7,9,12", "--no-timestamp"});
    const Run b = run({"attain", "--model", model, "--horizons", "7,9,12", "--no-timestamp"});
    CHECK(a.out == b.out);
    const Run c = run({"attain", "--model", model, "--horizons", "7,9,12"});
    CHECK(c.report().contains("timestamp"));
}

TEST_CASE("report keys are sorted") {
    Workdir w;
    const Run r = run({"check", "--model", w.write("w.json", kWave), "--no-timestamp"});
    std::vector<std::string> keys;
    for (const auto& [k, _] : r.report().items()) keys.push_back(k);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    const auto first = r.out.find("\"arguments\"");
    const auto last = r.out.find("\"warnings\"");
    CHECK(first < last);
}

TEST_CASE("--out writes the report to a file") {
    Workdir w;
    const auto out = (w.dir / "rep.json").string();
    const Run r = run({"check", "--model", w.write("w.json", kWave), "--out", out, "--no-timestamp"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    std::ifstream f(out);
    const json rep = json::parse(f);
    CHECK(rep["results"]["verdict"] == "fail-at-1");
}

TEST_CASE("usage and model errors") {
    Workdir w;
    CHECK(run({}).code == 64);
    CHECK(run({"bogus"}).code == 64);
    CHECK(run({"check"}).code == 64);
    CHECK(run({"attain", "--model", w.write("w.json", kWave)}).code == 64);
    CHECK(run({"spectrum", "--model", "x", "--region", "1,2"}).code == 64);
    CHECK(run({"check", "--model", "x", "--modes", "-3"}).code == 64);
    CHECK(run({"--help"}).code == 0);

    CHECK(run({"check", "--model", (w.dir / "missing.json").string()}).code == 1);
    const Run bad = run({"check", "--model", w.write("bad.json", R"({"schema_version":1,"kind":"modal","input_dim":1,
        "expansion_time":0,"minimality_interval":1,"modes":[{"lambda":[1],"chain_lengths":[1],"input_coupling":[[[1,0]]]}]})")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("$.modes[0].lambda") != std::string::npos);
    CHECK(run({"check", "--model", w.write("w.json", kWave), "--modes", "40"}).code == 1);
}
