#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chirpfit/estimate.hpp"
#include "chirpfit/types.hpp"

namespace chirpfit {

struct McScenario {
    ModelSpec model;
    int n = 0;
    int reps = 0;
    std::vector<Method> methods;
    std::uint64_t base_seed = 0;
    GridSpec grid;
    OptimizerConfig optimizer;

    void validate() const;
};

// One aggregated table cell: a (method, component, parameter) triple.
struct McCell {
    Method method = Method::alse;
    int component = 0;            // index into the scenario's component list
    std::string parameter;        // "A", "B", "alpha", "beta"
    double truth = 0.0;
    double average = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    double variance = 0.0;
    double avar = 0.0;
};

struct McStats {
    std::vector<McCell> cells;
    int reps = 0;                 // successful replications
    int failures = 0;             // non-converged replications, excluded
    double elapsed_seconds = 0.0; // informational only
};

// Replicates the scenario: per rep, derive the seed with mix_seed(base_seed,
// rep+1), synthesize, fit each requested method with sequential_fit, match
// components to truth, and aggregate. Replications run in parallel; results
// land in per-rep slots and are reduced serially in rep order, so the stats
// are bit-identical for any thread count. A rep fails if any requested fit
// has a non-converged step; > 10% failures raises EstimationError.
McStats run_scenario(const McScenario& s);

struct RatePoint {
    int n = 0;
    double mse_alpha = 0.0;
    double mse_beta = 0.0;
    int failures = 0;
};

struct RateStudy {
    std::vector<RatePoint> points;
    double slope_alpha = 0.0;  // fitted log-log slope, theory -3
    double slope_beta = 0.0;   // theory -5
};

// MSE of the first (dominant) component's alpha and beta across sizes.
RateStudy rate_study(const ModelSpec& model, const std::vector<int>& sizes, int reps,
                     Method method, std::uint64_t base_seed);

}  // namespace chirpfit
