#pragma once

#include <functional>

#include "chirpfit/types.hpp"

namespace chirpfit {

struct OptimizerConfig {
    double param_tol = 1e-9;        // simplex diameter tolerance
    double value_tol = 1e-12;       // objective spread tolerance (relative, floored at 1)
    int max_iters = 2000;
    double init_step_alpha = 0.0;   // 0 -> pi/n
    double init_step_beta = 0.0;    // 0 -> pi/n^2
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;

    void validate() const;
};

struct NmResult {
    double alpha = 0.0;
    double beta = 0.0;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

enum class Sense { maximize, minimize };

// Two-parameter Nelder-Mead on the box [0,pi]^2 (evaluations clamp to the
// box). Converged means both the simplex diameter fell below param_tol and
// the objective spread fell below value_tol * max(1, |best|).
NmResult nelder_mead(const std::function<double(double, double)>& objective,
                     double start_alpha, double start_beta,
                     const OptimizerConfig& cfg, Sense sense, int n);

// Residual sum of squares of y against the summed component model.
double sse(const Signal& y, const std::vector<ChirpComponent>& components);

// Least-squares (A, B) for one component at fixed (alpha, beta): solves the
// 2x2 normal equations of the cos/sin regressors.
std::pair<double, double> separable_amplitudes(const Signal& y, double alpha, double beta);

// SSE minimized over (A, B) at fixed (alpha, beta); the LSE objective.
double profiled_sse(const Signal& y, double alpha, double beta);

}  // namespace chirpfit
