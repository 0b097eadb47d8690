#pragma once

#include <vector>

#include "chirpfit/optimize.hpp"
#include "chirpfit/periodogram.hpp"
#include "chirpfit/types.hpp"

namespace chirpfit {

// Per-extraction-step diagnostics.
struct StepDiag {
    GridMax grid_start;
    ChirpComponent fitted;
    double objective = 0.0;   // optimizer objective value at the optimum
    int nm_iterations = 0;
    bool converged = false;
    bool duplicate = false;   // same grid cell as an earlier step
};

struct FitResult {
    Method method = Method::alse;
    std::vector<ChirpComponent> components;  // extraction order, dominant first
    std::vector<StepDiag> steps;
    std::vector<double> sse_trajectory;      // SSE after each step
    double elapsed_ms = 0.0;

    bool all_converged() const {
        for (const auto& s : steps)
            if (!s.converged) return false;
        return true;
    }
};

// Averaging formulas for the linear parameters at fixed (alpha, beta):
// A = (2/n) sum y cos, B = (2/n) sum y sin. Distinct from the
// normal-equations solve in separable_amplitudes; both are kept.
std::pair<double, double> average_amplitudes(const Signal& y, double alpha, double beta);

// One-component fits. (alpha, beta) from Nelder-Mead seeded by grid_scan;
// amplitudes by average_amplitudes (alse) or separable_amplitudes (lse).
FitResult alse_single(const Signal& y, const GridSpec& grid, const OptimizerConfig& cfg);
FitResult lse_single(const Signal& y, const GridSpec& grid, const OptimizerConfig& cfg);

// Sequential one-pass extraction: fit one component, subtract it, repeat p
// times. Both methods share the same I-grid initialization at each step.
FitResult sequential_fit(const Signal& y, int p, Method method, const GridSpec& grid,
                         const OptimizerConfig& cfg);

// n*ln(sse_k) + 2*(4k+1)*ln(n).
double bic(double sse_k, int k, int n);

struct OrderSelection {
    int p_hat = 0;
    std::vector<double> bic_values;  // k = 1..k_max
    FitResult fit;                   // truncated to p_hat components
};

// Runs sequential_fit once to k_max and picks the BIC argmin (ties -> smaller k).
OrderSelection select_order(const Signal& y, int k_max, Method method, const GridSpec& grid,
                            const OptimizerConfig& cfg);

// Pairs estimated components with true ones by nearest (alpha, beta) in the
// scaled metric n|d_alpha| + n^2|d_beta| (greedy, best pair first). Returns
// est_index -> true_index.
std::vector<int> match_components(const std::vector<ChirpComponent>& estimated,
                                  const std::vector<ChirpComponent>& truth, int n);

}  // namespace chirpfit
