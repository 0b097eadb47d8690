#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chirpfit/estimate.hpp"
#include "chirpfit/montecarlo.hpp"
#include "chirpfit/periodogram.hpp"
#include "chirpfit/types.hpp"

namespace chirpfit {

// Signal CSV: header "t,y", then one row per sample. Read accepts files with
// or without the header; parse failures carry 1-based line numbers.
void write_signal_csv(const std::string& path, const Signal& y);
Signal read_signal_csv(const std::string& path);

// Versioned JSON scenario document. Unknown keys are rejected so typos in
// config files fail loudly instead of silently using defaults.
//
//   {
//     "version": 1,
//     "n": 250,
//     "model": {
//       "components": [{"a": 2.93, "b": 1.91, "alpha": 2.5, "beta": 0.1}],
//       "noise": {"kind": "ma1", "sigma2": 0.1, "rho": 0.5},
//       "noiseless": false
//     },
//     "reps": 100,                      // mc only
//     "methods": ["alse", "lse"],       // mc only
//     "base_seed": 20170401,            // mc only (CLI --seed overrides)
//     "grid": {"alpha_count": 0, "beta_count": 0, "beta_stride": 0,
//              "alpha_range": [0.0, 3.141592653589793],
//              "beta_range": [0.0, 3.141592653589793]},   // optional
//     "optimizer": {"param_tol": 1e-9, "value_tol": 1e-12,
//                   "max_iters": 2000}                    // optional
//   }
struct ScenarioDoc {
    int version = 1;
    ModelSpec model;
    int n = 0;
    int reps = 0;
    std::vector<Method> methods;
    std::uint64_t base_seed = 0;
    bool has_base_seed = false;
    GridSpec grid;
    OptimizerConfig optimizer;

    McScenario to_scenario() const;
};

ScenarioDoc parse_scenario_json(const std::string& text);
ScenarioDoc load_scenario_file(const std::string& path);

// Sidecar echo of the resolved model next to simulated data.
void write_model_sidecar(const std::string& path, const ModelSpec& model, int n,
                         std::uint64_t seed);

// Fit report: method, components, per-step diagnostics, SSE trajectory, and
// (when order selection ran) the BIC curve.
void write_fit_report_json(const std::string& path, const FitResult& fit, int n,
                           const std::vector<double>* bic_values = nullptr, int p_hat = 0);

// Monte Carlo table: method,parameter,true,average,bias,mse,avar,reps,failures.
// Parameters are indexed per component (A1, B1, alpha1, beta1, A2, ...).
void write_mc_csv(const std::string& path, const McStats& stats);

void write_surface_csv(const std::string& path, const std::vector<SurfacePoint>& points);

}  // namespace chirpfit
