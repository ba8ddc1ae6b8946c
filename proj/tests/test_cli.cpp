#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "layerpot/commands.hpp"
#include "layerpot/json_io.hpp"

using namespace layerpot;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("layerpot_cli_" + name);
    fs::remove_all(p);
    return p;
}

int run(std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "layerpot");
    std::ostringstream o, e;
    const int code = run_cli(args, o, e);
    if (out) *out = o.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::vector<std::string> tiny_solve{"--set", "constants.N=2", "--set", "grid.panels=4",
                                          "--set", "grid.angular=4", "--set", "grid.r_max=4"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_CASE("defaults are printed as valid JSON") {
    std::string out;
    CHECK(run({"--print-defaults"}, &out) == 0);
    const Json j = Json::parse(out);
    CHECK(j["constants"]["N"] == 3);
    CHECK(j.contains("solve"));
}

TEST_CASE("check-weights exit codes follow the verdicts") {
    const auto d = scratch("cw");
    auto alpha = [&](const std::string& a, const std::string& sub) {
        return run({"check-weights", "--set", "weights.gamma.alpha=" + a, "--set", "weights.Gamma.alpha=" + a, "--out",
                    (d / sub).string()});
    };
    CHECK(alpha("0", "ok") == kExitOk);
    CHECK(alpha("2", "fail") == kExitFailure);
    CHECK(alpha("-0.5", "marginal") == kExitMarginal);
    const Json j = read_json((d / "ok" / "conditions.json").string());
    CHECK(j["overall"] == "Holds");
    CHECK(j["reports"].size() == 13);
    CHECK(fs::exists(d / "ok" / "verdicts.txt"));
    CHECK(fs::exists(d / "ok" / "traces" / "PowerWindow.csv"));
    CHECK(read_json((d / "marginal" / "conditions.json").string())["overall"] == "Marginal");
}

TEST_CASE("condition selection") {
    const auto d = scratch("sel");
    CHECK(run({"check-weights", "--set", R"(check_weights.conditions=["PowerWindow"])", "--out", d.string()}) == 0);
    CHECK(read_json((d / "conditions.json").string())["reports"].size() == 1);
    CHECK(run({"check-weights", "--set", R"(check_weights.conditions=["Nonsense"])", "--out", d.string()}) ==
          kExitInput);
}

TEST_CASE("hardy exit codes") {
    const auto d = scratch("hardy");
    CHECK(run({"hardy", "--out", d.string()}) == kExitOk);
    const Json j = read_json((d / "hardy.json").string());
    CHECK(j["report"]["sandwich_holds"] == true);
    CHECK(run({"hardy", "--set", "hardy.U.exponent=0", "--out", d.string()}) == kExitFailure);
    CHECK(read_json((d / "error.json").string())["error"]["type"] == "DivergentB");
    CHECK(run({"hardy", "--set", "hardy.direction=Sideways", "--out", d.string()}) == kExitInput);
}

TEST_CASE("configuration errors exit with code 1") {
    const auto d = scratch("cfg");
    CHECK(run({"check-weights", "--set", "foo=1", "--out", d.string()}) == kExitInput);
    CHECK(run({"check-weights", "--set", "constants.N=\"three\"", "--out", d.string()}) == kExitInput);
    CHECK(run({"check-weights", "--set", "constants.N=4", "--out", d.string()}) == kExitInput);
    CHECK(run({"check-weights", "--config", (d / "missing.json").string(), "--out", d.string()}) == kExitInput);
    CHECK(run({"check-weights", "--bogus"}) == kExitInput);
    CHECK(run({}) == kExitInput);

    fs::create_directories(d);
    std::ofstream(d / "bad.json") << "{\"constants\": {\"N\": 2,}";
    CHECK(run({"check-weights", "--config", (d / "bad.json").string(), "--out", d.string()}) == kExitInput);
    std::ofstream(d / "good.json") << R"({"constants": {"c3": 2.0}, "weights": {"gamma": {"alpha": 0.5}, "Gamma": {"alpha": 0.5}}})";
    CHECK(run({"check-weights", "--config", (d / "good.json").string(), "--out", d.string()}) == kExitOk);
    const Json j = read_json((d / "conditions.json").string());
    CHECK(j["config"]["constants"]["c3"] == 2.0);
    CHECK(j["config"]["weights"]["gamma"]["alpha"] == 0.5);
}

TEST_CASE("solve exit codes") {
    const auto d = scratch("solve");
    CHECK(run(with({"solve", "--out", (d / "ok").string()}, tiny_solve)) == kExitOk);
    const Json j = read_json((d / "ok" / "solve.json").string());
    CHECK(j["recovery"]["passed"] == true);
    CHECK(j["isomorphism"]["levels"].size() == 3);
    CHECK(fs::exists(d / "ok" / "profile.csv"));
    CHECK(fs::exists(d / "ok" / "ratio-vs-refinement.csv"));

    CHECK(run(with({"solve", "--set", "solve.recovery_threshold=1e-12", "--set", "solve.probe=false", "--out",
                    (d / "strict").string()},
                   tiny_solve)) == kExitRecovery);

    CHECK(run(with({"solve", "--set", "surface.family=cone", "--set", "surface.eps=0.9", "--out",
                    (d / "rough").string()},
                   tiny_solve)) == kExitFailure);
    CHECK(read_json((d / "rough" / "error.json").string())["error"]["type"] == "SurfaceTooRough");

    fs::create_directories(d);
    std::ofstream(d / "f.csv") << "r,angular_index,value\n0.1,0,1.0\n0.2,oops\n";
    CHECK(run(with({"solve", "--set", "solve.f_source=file", "--set", "solve.f_path=" + (d / "f.csv").string(),
                    "--out", (d / "bad").string()},
                   tiny_solve)) == kExitInput);
    CHECK(run(with({"solve", "--set", "solve.f_source=file", "--out", (d / "nopath").string()}, tiny_solve)) ==
          kExitInput);
}

TEST_CASE("solve from a file right-hand side") {
    const auto d = scratch("solvefile");
    CHECK(run(with({"solve", "--set", "solve.probe=false", "--out", (d / "a").string()}, tiny_solve)) == 0);
    // feed the computed density back: S u on the same grid is not needed, any f works
    CHECK(run(with({"solve", "--set", "solve.f_source=file", "--set", "solve.probe=false", "--set",
                    "solve.f_path=" + (d / "a" / "solution.csv").string(), "--out", (d / "b").string()},
                   tiny_solve)) == 0);
    CHECK_FALSE(read_json((d / "b" / "solve.json").string()).contains("recovery"));
}

TEST_CASE("potential-eval operators") {
    const auto d = scratch("pot");
    CHECK(run({"potential-eval", "--set", "constants.N=2", "--set", "potential_eval.density=ball", "--out",
               d.string()}) == 0);
    Json j = read_json((d / "potential.json").string());
    CHECK(j["values"].size() == 5);
    CHECK(j["max_rel_error_vs_oracle"].get<double>() < 1e-3);
    CHECK(j["values"][0].get<double>() == doctest::Approx(2 * kPi).epsilon(1e-6));
    CHECK(run({"potential-eval", "--set", "constants.N=2", "--set", "potential_eval.operator=T2", "--set",
               "potential_eval.targets=[[0.5,0.1]]", "--out", d.string()}) == 0);
    j = read_json((d / "potential.json").string());
    CHECK(j["values"].size() == 1);
    CHECK(run({"potential-eval", "--set", "constants.N=2", "--set", "potential_eval.operator=T7", "--out",
               d.string()}) == kExitInput);
    CHECK(run({"potential-eval", "--set", "constants.N=2", "--set", "potential_eval.targets=[[0.5]]", "--out",
               d.string()}) == kExitInput);
}

TEST_CASE("repeated runs produce identical files") {
    const auto d = scratch("det");
    for (const char* sub : {"a", "b"}) {
        const std::string out = (d / sub).string();
        CHECK(run({"check-weights", "--seed", "7", "--out", out}) == 0);
        CHECK(run({"hardy", "--seed", "7", "--out", out}) == 0);
        CHECK(run({"potential-eval", "--seed", "7", "--set", "constants.N=2", "--out", out}) == 0);
        CHECK(run(with({"solve", "--seed", "7", "--out", out}, tiny_solve)) == 0);
        CHECK(run({"report", "--seed", "7", "--out", out}) == 0);
    }
    for (const char* f : {"conditions.json", "hardy.json", "potential.json", "solve.json", "summary.json",
                          "profile.csv", "ratio-vs-refinement.csv", "solution.csv"}) {
        CAPTURE(f);
        CHECK(slurp(d / "a" / f) == slurp(d / "b" / f));
        CHECK_FALSE(slurp(d / "a" / f).empty());
    }
    const Json s = read_json((d / "a" / "summary.json").string());
    CHECK(s["summary"].size() == 4);
    CHECK(s["documents"].contains("solve"));
}

TEST_CASE("report without inputs is an input error") {
    const auto d = scratch("empty");
    fs::create_directories(d);
    CHECK(run({"report", "--out", d.string()}) == kExitInput);
}
