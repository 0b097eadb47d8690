#pragma once

#include <array>

#include "chirpfit/types.hpp"

namespace chirpfit {

// 4x4 per-component asymptotic covariance block, parameter order (A, B, alpha, beta).
using Mat4 = std::array<std::array<double, 4>, 4>;

struct AvarReport {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double c = 0.0;
    double sigma2 = 0.0;
    int n = 0;
};

// The distributional derivation for this estimator family suggests a
// limiting covariance 2*c*sigma^2*Sigma, but the published variance tables we
// reproduce all match c*sigma^2*Sigma*D^2. We follow the tables; the factor
// stays visible here instead of being folded away.
inline constexpr double kAvarCalibration = 1.0;

Mat4 sigma(double A, double B);
Mat4 sigma_inverse(double A, double B);

// Avar(param_i) = kAvarCalibration * c * sigma2 * Sigma_ii * d_i^2 with
// d = (n^-1/2, n^-1/2, n^-3/2, n^-5/2).
AvarReport asymptotic_variances(const ChirpComponent& comp, double c, double sigma2, int n);

}  // namespace chirpfit
