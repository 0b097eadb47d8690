// chirpfit command-line front end.
//
//   chirpfit simulate --config model.cfg --seed 42 --out signal.csv
//   chirpfit estimate --in signal.csv --method lse --p 2 --report fit.json
//   chirpfit order    --in signal.csv --method lse --kmax 4 --report fit.json
//   chirpfit mc       --config scenario.cfg [--seed N] --out stats.csv
//   chirpfit surface  --in signal.csv --out surface.csv
//
// Exit codes: 0 success, 2 config/validation error, 3 estimation error,
// 4 I/O error.

#include <CLI11.hpp>
#include <omp.h>

#include <cstdint>
#include <iostream>
#include <string>

#include "chirpfit/estimate.hpp"
#include "chirpfit/io.hpp"
#include "chirpfit/montecarlo.hpp"
#include "chirpfit/noise.hpp"
#include "chirpfit/periodogram.hpp"
#include "chirpfit/synthesis.hpp"

namespace cf = chirpfit;

namespace {

struct Options {
    std::string config;
    std::string input;
    std::string output;
    std::string report;
    std::string residual;
    std::string method = "lse";
    int p = 0;
    int kmax = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    long long alpha_count = 0;
    long long beta_count = 0;
    long long beta_stride = 0;
};

cf::GridSpec grid_overrides(const Options& opt, cf::GridSpec g) {
    if (opt.alpha_count > 0) g.alpha_count = opt.alpha_count;
    if (opt.beta_count > 0) g.beta_count = opt.beta_count;
    if (opt.beta_stride > 0) g.beta_stride = opt.beta_stride;
    return g;
}

int cmd_simulate(const Options& opt) {
    const cf::ScenarioDoc doc = cf::load_scenario_file(opt.config);
    cf::validate_model(doc.model);
    if (!opt.seed_given) throw cf::ConfigError("simulate requires --seed");
    const cf::Signal y = cf::synthesize(doc.model, doc.n, opt.seed);
    cf::write_signal_csv(opt.output, y);
    cf::write_model_sidecar(opt.output + ".model.json", doc.model, doc.n, opt.seed);
    std::cout << "wrote " << y.size() << " samples to " << opt.output << "\n";
    return 0;
}

int cmd_estimate(const Options& opt, bool order_mode) {
    const cf::Signal y = cf::read_signal_csv(opt.input);
    const cf::Method method = cf::method_from_string(opt.method);
    cf::GridSpec grid = grid_overrides(opt, cf::GridSpec{});
    cf::OptimizerConfig cfg;
    if (!opt.config.empty()) {
        const cf::ScenarioDoc doc = cf::load_scenario_file(opt.config);
        grid = grid_overrides(opt, doc.grid);
        cfg = doc.optimizer;
    }

    cf::FitResult fit;
    std::vector<double> bic_values;
    int p_hat = 0;
    if (order_mode) {
        if (opt.kmax < 1) throw cf::ConfigError("order requires --kmax >= 1");
        cf::OrderSelection sel = cf::select_order(y, opt.kmax, method, grid, cfg);
        fit = std::move(sel.fit);
        bic_values = std::move(sel.bic_values);
        p_hat = sel.p_hat;
    } else {
        if (opt.p < 1) throw cf::ConfigError("estimate requires --p >= 1");
        fit = cf::sequential_fit(y, opt.p, method, grid, cfg);
    }

    const int n = static_cast<int>(y.size());
    if (!opt.report.empty())
        cf::write_fit_report_json(opt.report, fit, n,
                                  order_mode ? &bic_values : nullptr, p_hat);
    if (!opt.residual.empty()) {
        cf::Signal resid = y;
        for (std::size_t i = 0; i < resid.size(); ++i) {
            const double t = static_cast<double>(i) + 1.0;
            for (const auto& c : fit.components) {
                const double ph = cf::phase_at(c, t);
                resid[i] -= c.a * std::cos(ph) + c.b * std::sin(ph);
            }
        }
        cf::write_signal_csv(opt.residual, resid);
    }

    if (order_mode) std::cout << "selected p=" << p_hat << "\n";
    for (std::size_t i = 0; i < fit.components.size(); ++i) {
        const auto& c = fit.components[i];
        std::cout << "component " << (i + 1) << ": a=" << c.a << " b=" << c.b
                  << " alpha=" << c.alpha << " beta=" << c.beta << "\n";
    }
    std::cout << "sse=" << fit.sse_trajectory.back() << "\n";
    return 0;
}

int cmd_mc(const Options& opt) {
    const cf::ScenarioDoc doc = cf::load_scenario_file(opt.config);
    cf::McScenario scenario = doc.to_scenario();
    scenario.grid = grid_overrides(opt, scenario.grid);
    if (opt.seed_given)
        scenario.base_seed = opt.seed;
    else if (!doc.has_base_seed)
        throw cf::ConfigError("mc requires a seed: pass --seed or set base_seed in the config");
    const cf::McStats stats = cf::run_scenario(scenario);
    cf::write_mc_csv(opt.output, stats);
    std::cout << "wrote " << stats.cells.size() << " rows to " << opt.output << " (reps="
              << stats.reps << ", failures=" << stats.failures << ", "
              << stats.elapsed_seconds << "s)\n";
    return 0;
}

int cmd_surface(const Options& opt) {
    const cf::Signal y = cf::read_signal_csv(opt.input);
    const int n = static_cast<int>(y.size());
    cf::GridSpec g;
    // Full surfaces are n^3 points; cap the export to something plottable
    // unless counts are given explicitly.
    g.alpha_count = std::min<long long>(n, 192);
    g.beta_count = std::min<long long>(static_cast<long long>(n) * n, 192);
    g.beta_stride = 1;
    g = grid_overrides(opt, g);
    const auto pts = cf::surface(y, g);
    cf::write_surface_csv(opt.output, pts);
    std::cout << "wrote " << pts.size() << " surface points to " << opt.output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"chirp signal estimation toolkit"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", opt.threads, "cap OpenMP parallelism");
        sub->add_option("--alpha-count", opt.alpha_count, "grid points in alpha");
        sub->add_option("--beta-count", opt.beta_count, "grid points in beta");
        sub->add_option("--beta-stride", opt.beta_stride, "beta scan stride");
    };

    CLI::App* sim = app.add_subcommand("simulate", "synthesize a signal CSV");
    sim->add_option("--config", opt.config, "model config (JSON)")->required();
    sim->add_option("--out", opt.output, "output CSV")->required();
    sim->add_option("--seed", opt.seed, "RNG seed")->required();
    add_common(sim);

    CLI::App* est = app.add_subcommand("estimate", "fit p components to a signal CSV");
    est->add_option("--in", opt.input, "input signal CSV")->required();
    est->add_option("--p", opt.p, "component count")->required();
    est->add_option("--method", opt.method, "alse or lse");
    est->add_option("--config", opt.config, "grid/optimizer overrides (JSON)");
    est->add_option("--report", opt.report, "fit report JSON path");
    est->add_option("--residual", opt.residual, "residual series CSV path");
    add_common(est);

    CLI::App* ord = app.add_subcommand("order", "select component count by BIC");
    ord->add_option("--in", opt.input, "input signal CSV")->required();
    ord->add_option("--kmax", opt.kmax, "largest order to consider")->required();
    ord->add_option("--method", opt.method, "alse or lse");
    ord->add_option("--config", opt.config, "grid/optimizer overrides (JSON)");
    ord->add_option("--report", opt.report, "fit report JSON path");
    ord->add_option("--residual", opt.residual, "residual series CSV path");
    add_common(ord);

    CLI::App* mc = app.add_subcommand("mc", "run a Monte Carlo scenario");
    mc->add_option("--config", opt.config, "scenario config (JSON)")->required();
    mc->add_option("--out", opt.output, "stats CSV")->required();
    mc->add_option("--seed", opt.seed, "base seed (overrides config)");
    add_common(mc);

    CLI::App* surf = app.add_subcommand("surface", "export the objective surface as CSV");
    surf->add_option("--in", opt.input, "input signal CSV")->required();
    surf->add_option("--out", opt.output, "surface CSV")->required();
    add_common(surf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    opt.seed_given = sim->count("--seed") > 0 || mc->count("--seed") > 0;
    if (opt.threads > 0) omp_set_num_threads(opt.threads);

    try {
        if (app.got_subcommand(sim)) return cmd_simulate(opt);
        if (app.got_subcommand(est)) return cmd_estimate(opt, false);
        if (app.got_subcommand(ord)) return cmd_estimate(opt, true);
        if (app.got_subcommand(mc)) return cmd_mc(opt);
        if (app.got_subcommand(surf)) return cmd_surface(opt);
    } catch (const cf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cf::EstimationError& e) {
        std::cerr << "estimation error: " << e.what() << "\n";
        return 3;
    } catch (const cf::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
