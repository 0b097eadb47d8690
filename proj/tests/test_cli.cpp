#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chirpfit/asymptotics.hpp"
#include "chirpfit/io.hpp"
#include "chirpfit/synthesis.hpp"

using namespace chirpfit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "chirpfit_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// Runs the installed binary, returns the exit code; stdout/stderr land in
// out/err files under the work dir for inspection.
int run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN) + " " + args + " >" +
                            (work_dir() / "out.txt").string() + " 2>" +
                            (work_dir() / "err.txt").string();
    const int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string cli_stdout() { return slurp(work_dir() / "out.txt"); }
std::string cli_stderr() { return slurp(work_dir() / "err.txt"); }

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

fs::path one_comp_config(const std::string& name, int n, const std::string& noise) {
    return write_file(name, R"({
  "version": 1,
  "n": )" + std::to_string(n) +
                                R"(,
  "model": {
    "components": [{"a": 2.93, "b": 1.91, "alpha": 2.5, "beta": 0.1}],
    )" + noise + R"(
  }
})");
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    return fields;
}

}  // namespace

TEST_CASE("signal csv round trip preserves every sample bit") {
    const Signal y = synthesize_clean({{2.93, 1.91, 2.5, 0.1}}, 64);
    const fs::path p = work_dir() / "roundtrip.csv";
    write_signal_csv(p.string(), y);
    const Signal back = read_signal_csv(p.string());
    REQUIRE(back.size() == y.size());
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(back[i] == y[i]);
}

TEST_CASE("signal csv reader rejects malformed input with line numbers") {
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_signal_csv((work_dir() / "nope.csv").string()), IoError);
    }
    SUBCASE("gap in the index") {
        const fs::path p = write_file("gap.csv", "t,y\n1,0.5\n3,0.25\n");
        try {
            read_signal_csv(p.string());
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find(":3:") != std::string::npos);
            CHECK(std::string(e.what()).find("expected t=2") != std::string::npos);
        }
    }
    SUBCASE("bad value") {
        const fs::path p = write_file("badval.csv", "1,0.5\n2,zap\n");
        CHECK_THROWS_AS(read_signal_csv(p.string()), IoError);
    }
    SUBCASE("no samples") {
        const fs::path p = write_file("empty.csv", "t,y\n");
        CHECK_THROWS_AS(read_signal_csv(p.string()), IoError);
    }
    SUBCASE("crlf and blank lines are tolerated") {
        const fs::path p = write_file("crlf.csv", "t,y\r\n1,0.5\r\n\r\n2,0.25\r\n");
        const Signal y = read_signal_csv(p.string());
        REQUIRE(y.size() == 2);
        CHECK(y[1] == 0.25);
    }
}

TEST_CASE("scenario parsing is strict about its schema") {
    SUBCASE("unknown top-level key") {
        CHECK_THROWS_AS(parse_scenario_json(R"({"version":1,"n":8,"mdoel":{}})"), ConfigError);
    }
    SUBCASE("unsupported version") {
        CHECK_THROWS_AS(parse_scenario_json(
                            R"({"version":2,"n":8,"model":{"components":[],"noiseless":true}})"),
                        ConfigError);
    }
    SUBCASE("model without noise or noiseless") {
        CHECK_THROWS_AS(
            parse_scenario_json(
                R"({"version":1,"n":8,"model":{"components":[{"a":1,"b":0,"alpha":1,"beta":0.1}]}})"),
            ConfigError);
    }
    SUBCASE("not json at all") {
        CHECK_THROWS_AS(parse_scenario_json("reps: 100"), ConfigError);
    }
    SUBCASE("a full document lands in the right fields") {
        const ScenarioDoc doc = parse_scenario_json(R"({
            "version": 1, "n": 16, "reps": 3, "methods": ["alse", "lse"],
            "base_seed": 99,
            "model": {"components": [{"a": 1, "b": 0, "alpha": 1.0, "beta": 0.1}],
                      "noise": {"kind": "ar1", "sigma2": 0.25, "phi": 0.5, "burn_in": 32}},
            "grid": {"alpha_count": 8, "beta_count": 64, "beta_stride": 2,
                     "beta_range": [0.05, 0.15]},
            "optimizer": {"max_iters": 500, "param_tol": 1e-8}
        })");
        CHECK(doc.n == 16);
        CHECK(doc.reps == 3);
        REQUIRE(doc.methods.size() == 2);
        CHECK(doc.methods[0] == Method::alse);
        CHECK(doc.has_base_seed);
        CHECK(doc.base_seed == 99);
        CHECK(doc.model.noise.kind == NoiseKind::ar1);
        CHECK(doc.model.noise.phi == 0.5);
        CHECK(doc.model.noise.burn_in == 32);
        CHECK(doc.grid.beta_stride == 2);
        CHECK(doc.grid.beta_min == 0.05);
        CHECK(doc.grid.beta_max == 0.15);
        CHECK(doc.optimizer.max_iters == 500);
        CHECK(doc.optimizer.param_tol == 1e-8);
    }
}

TEST_CASE("the shipped table configs all parse and validate") {
    const char* tables[6] = {"table1", "table2", "table3", "table4", "table5", "table6"};
    const char* sigmas[3] = {"sigma01", "sigma05", "sigma1"};
    for (const char* t : tables) {
        for (const char* s : sigmas) {
            const std::string path =
                std::string(CONFIG_DIR) + "/" + t + "_" + s + ".cfg";
            CAPTURE(path);
            const ScenarioDoc doc = load_scenario_file(path);
            doc.to_scenario().validate();
            CHECK(doc.reps == 100);
            CHECK(doc.has_base_seed);
            REQUIRE(doc.methods.size() == 2);
        }
    }
    // two-component tables list the dominant component first
    const ScenarioDoc t4 =
        load_scenario_file(std::string(CONFIG_DIR) + "/table4_sigma01.cfg");
    REQUIRE(t4.model.components.size() == 2);
    CHECK(t4.model.components[0].energy() > t4.model.components[1].energy());
    CHECK(t4.n == 250);
}

TEST_CASE("simulate writes a deterministic csv plus a model sidecar") {
    const fs::path cfg = one_comp_config("sim.cfg", 250,
                                         R"("noise": {"kind": "ma1", "sigma2": 0.1, "rho": 0.5})");
    const fs::path out = work_dir() / "sim.csv";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 42 --out " + out.string()) ==
            0);
    const Signal y = read_signal_csv(out.string());
    CHECK(y.size() == 250);
    CHECK(split_lines(slurp(out))[0] == "t,y");

    const fs::path sidecar = work_dir() / "sim.csv.model.json";
    REQUIRE(fs::exists(sidecar));
    const json meta = json::parse(slurp(sidecar));
    CHECK(meta.at("seed") == 42);
    CHECK(meta.at("n") == 250);
    CHECK(meta.at("model").at("components").size() == 1);

    SUBCASE("same seed, same bytes; different seed, different series") {
        const fs::path again = work_dir() / "sim_again.csv";
        REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 42 --out " +
                        again.string()) == 0);
        CHECK(slurp(again) == slurp(out));
        const fs::path other = work_dir() / "sim_other.csv";
        REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 43 --out " +
                        other.string()) == 0);
        CHECK(slurp(other) != slurp(out));
    }
}

TEST_CASE("simulate without --seed is a usage error") {
    const fs::path cfg = one_comp_config("sim_noseed.cfg", 64, R"("noiseless": true)");
    const fs::path out = work_dir() / "never.csv";
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("simulate rejects a model that breaks the ordering assumption") {
    const fs::path cfg = write_file("unordered.cfg", R"({
  "version": 1, "n": 64,
  "model": {
    "components": [{"a": 1.0, "b": 0.0, "alpha": 1.0, "beta": 0.05},
                   {"a": 2.0, "b": 1.0, "alpha": 2.0, "beta": 0.15}],
    "noiseless": true
  }
})");
    CHECK(run_cli("simulate --config " + cfg.string() + " --seed 1 --out " +
                  (work_dir() / "never2.csv").string()) == 2);
    CHECK(cli_stderr().find("ordering assumption") != std::string::npos);
}

TEST_CASE("estimate round trip on a noiseless two-component signal") {
    const fs::path cfg = write_file("two.cfg", R"({
  "version": 1, "n": 250,
  "model": {
    "components": [{"a": 3.0, "b": 2.25, "alpha": 2.5, "beta": 0.2},
                   {"a": 2.0, "b": 1.75, "alpha": 1.5, "beta": 0.1}],
    "noiseless": true
  }
})");
    const fs::path sig = work_dir() / "two.csv";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 1 --out " + sig.string()) ==
            0);

    const fs::path report = work_dir() / "two_fit.json";
    const fs::path resid = work_dir() / "two_resid.csv";
    REQUIRE(run_cli("estimate --in " + sig.string() + " --p 2 --method lse --report " +
                    report.string() + " --residual " + resid.string()) == 0);

    const json rep = json::parse(slurp(report));
    CHECK(rep.at("method") == "lse");
    CHECK(rep.at("n") == 250);
    REQUIRE(rep.at("components").size() == 2);
    CHECK(rep.at("components")[0].at("alpha").get<double>() ==
          doctest::Approx(2.5036987808).epsilon(1e-6));
    CHECK(rep.at("components")[1].at("alpha").get<double>() ==
          doctest::Approx(1.5002870505).epsilon(1e-6));
    const auto traj = rep.at("sse_trajectory").get<std::vector<double>>();
    REQUIRE(traj.size() == 2);
    CHECK(traj[1] < traj[0]);
    for (const auto& step : rep.at("steps")) CHECK(step.at("converged").get<bool>());

    const Signal r = read_signal_csv(resid.string());
    const Signal y = read_signal_csv(sig.string());
    REQUIRE(r.size() == y.size());
    CHECK(signal_energy(r) < 0.01 * signal_energy(y));
}

TEST_CASE("alse and lse agree on a long noiseless signal") {
    const fs::path cfg = one_comp_config("long.cfg", 4096, R"("noiseless": true)");
    const fs::path sig = work_dir() / "long.csv";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 1 --out " + sig.string()) ==
            0);

    json reps[2];
    const char* methods[2] = {"alse", "lse"};
    for (int i = 0; i < 2; ++i) {
        const fs::path report = work_dir() / (std::string("long_") + methods[i] + ".json");
        REQUIRE(run_cli("estimate --in " + sig.string() + " --p 1 --method " + methods[i] +
                        " --beta-stride 512 --report " + report.string()) == 0);
        reps[i] = json::parse(slurp(report));
    }
    const auto& ca = reps[0].at("components")[0];
    const auto& cl = reps[1].at("components")[0];
    CHECK(std::abs(ca.at("alpha").get<double>() - cl.at("alpha").get<double>()) < 1e-4);
    CHECK(std::abs(ca.at("beta").get<double>() - cl.at("beta").get<double>()) < 1e-7);
    // the averaged amplitudes close the gap far more slowly than (alpha, beta)
    CHECK(std::abs(ca.at("a").get<double>() - cl.at("a").get<double>()) < 0.15);
    CHECK(std::abs(ca.at("b").get<double>() - cl.at("b").get<double>()) < 0.15);
}

TEST_CASE("estimate on a missing input exits 4 and writes nothing") {
    const fs::path report = work_dir() / "ghost.json";
    CHECK(run_cli("estimate --in " + (work_dir() / "ghost.csv").string() + " --p 1 --report " +
                  report.string()) == 4);
    CHECK_FALSE(fs::exists(report));
    CHECK(cli_stderr().find("io error") != std::string::npos);
}

TEST_CASE("estimate with an unknown method exits 2") {
    const fs::path cfg = one_comp_config("m.cfg", 64, R"("noiseless": true)");
    const fs::path sig = work_dir() / "m.csv";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 5 --out " + sig.string()) ==
            0);
    CHECK(run_cli("estimate --in " + sig.string() + " --p 1 --method mle") == 2);
    CHECK(cli_stderr().find("unknown method") != std::string::npos);
}

TEST_CASE("order picks one component for a clean single chirp") {
    const fs::path cfg =
        one_comp_config("ord.cfg", 250, R"("noise": {"kind": "iid", "sigma2": 1e-6})");
    const fs::path sig = work_dir() / "ord.csv";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 777 --out " + sig.string()) ==
            0);
    const fs::path report = work_dir() / "ord.json";
    REQUIRE(run_cli("order --in " + sig.string() + " --kmax 2 --method lse --report " +
                    report.string()) == 0);
    CHECK(cli_stdout().find("selected p=1") != std::string::npos);
    const json rep = json::parse(slurp(report));
    CHECK(rep.at("p_hat") == 1);
    CHECK(rep.at("bic").size() == 2);
    CHECK(rep.at("components").size() == 1);
}

TEST_CASE("mc writes the aggregate table with the documented header") {
    const fs::path cfg = write_file("mc.cfg", R"({
  "version": 1, "n": 100, "reps": 2, "methods": ["alse", "lse"],
  "model": {
    "components": [{"a": 2.93, "b": 1.91, "alpha": 2.5, "beta": 0.1}],
    "noise": {"kind": "ma1", "sigma2": 0.1, "rho": 0.5}
  },
  "base_seed": 20170401
})");
    const fs::path out = work_dir() / "mc.csv";
    REQUIRE(run_cli("mc --config " + cfg.string() + " --out " + out.string()) == 0);

    const auto lines = split_lines(slurp(out));
    REQUIRE(lines.size() == 1 + 2 * 4);
    CHECK(lines[0] == "method,parameter,true,average,bias,mse,avar,reps,failures");
    const auto row = split_csv(lines[1]);
    REQUIRE(row.size() == 9);
    CHECK(row[0] == "alse");
    CHECK(row[1] == "A1");
    CHECK(row[7] == "2");
    CHECK(row[8] == "0");

    // the avar column carries the plug-in asymptotic variance of the truth
    const AvarReport av = asymptotic_variances({2.93, 1.91, 2.5, 0.1}, 1.25, 0.1, 100);
    const auto alpha_row = split_csv(lines[3]);
    CHECK(alpha_row[1] == "alpha1");
    CHECK(std::strtod(alpha_row[6].c_str(), nullptr) == av.alpha);

    SUBCASE("an explicit --seed overrides and reproduces the config seed") {
        const fs::path cfg2 = write_file("mc_noseed.cfg", R"({
  "version": 1, "n": 100, "reps": 2, "methods": ["alse", "lse"],
  "model": {
    "components": [{"a": 2.93, "b": 1.91, "alpha": 2.5, "beta": 0.1}],
    "noise": {"kind": "ma1", "sigma2": 0.1, "rho": 0.5}
  }
})");
        const fs::path out2 = work_dir() / "mc2.csv";
        REQUIRE(run_cli("mc --config " + cfg2.string() + " --seed 20170401 --out " +
                        out2.string()) == 0);
        CHECK(slurp(out2) == slurp(out));

        SUBCASE("without any seed it refuses to guess") {
            CHECK(run_cli("mc --config " + cfg2.string() + " --out " +
                          (work_dir() / "mc3.csv").string()) == 2);
            CHECK(cli_stderr().find("requires a seed") != std::string::npos);
        }
    }

    SUBCASE("thread cap does not change the table") {
        const fs::path t1 = work_dir() / "mc_t1.csv";
        const fs::path t2 = work_dir() / "mc_t2.csv";
        REQUIRE(run_cli("mc --config " + cfg.string() + " --threads 1 --out " + t1.string()) ==
                0);
        REQUIRE(run_cli("mc --config " + cfg.string() + " --threads 2 --out " + t2.string()) ==
                0);
        CHECK(slurp(t1) == slurp(t2));
    }
}

TEST_CASE("mc with a single replication reports mse equal to squared bias") {
    const fs::path cfg = write_file("mc1.cfg", R"({
  "version": 1, "n": 100, "reps": 1, "methods": ["lse"],
  "model": {
    "components": [{"a": 2.93, "b": 1.91, "alpha": 2.5, "beta": 0.1}],
    "noise": {"kind": "ma1", "sigma2": 0.1, "rho": 0.5}
  },
  "base_seed": 11
})");
    const fs::path out = work_dir() / "mc1.csv";
    REQUIRE(run_cli("mc --config " + cfg.string() + " --out " + out.string()) == 0);
    const auto lines = split_lines(slurp(out));
    REQUIRE(lines.size() == 5);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto row = split_csv(lines[i]);
        const double bias = std::strtod(row[4].c_str(), nullptr);
        const double mse = std::strtod(row[5].c_str(), nullptr);
        CHECK(mse == bias * bias);  // exact: %.17g round-trips doubles
    }
}

TEST_CASE("surface exports a plottable grid") {
    const fs::path cfg = one_comp_config("surf.cfg", 64, R"("noiseless": true)");
    const fs::path sig = work_dir() / "surf.csv";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --seed 3 --out " + sig.string()) ==
            0);
    const fs::path out = work_dir() / "surface.csv";
    REQUIRE(run_cli("surface --in " + sig.string() + " --out " + out.string()) == 0);
    const auto lines = split_lines(slurp(out));
    CHECK(lines[0] == "alpha,beta,I");
    // capped default export; the lattice excludes both interval endpoints
    CHECK(lines.size() == 1 + 63 * 191);

    SUBCASE("explicit counts override the cap") {
        const fs::path small = work_dir() / "surface_small.csv";
        REQUIRE(run_cli("surface --in " + sig.string() + " --alpha-count 8 --beta-count 8 --out " +
                        small.string()) == 0);
        CHECK(split_lines(slurp(small)).size() == 1 + 7 * 7);
    }
}

TEST_CASE("bare invocation or unknown subcommand is a usage error") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
}
