#pragma once

#include <cstdint>

#include "chirpfit/types.hpp"

namespace chirpfit {

// Phase of a component at integer time t.
inline double phase_at(const ChirpComponent& c, double t) {
    return c.alpha * t + c.beta * t * t;
}

// Deterministic part of the signal: sum over components of
// a*cos(alpha t + beta t^2) + b*sin(alpha t + beta t^2), t = 1..n.
Signal synthesize_clean(const std::vector<ChirpComponent>& components, int n);

// Clean signal plus stationary noise (unless model.noiseless).
Signal synthesize(const ModelSpec& model, int n, std::uint64_t seed);

// Sum of squares of the clean signal; reference scale for residual checks.
double signal_energy(const Signal& y);

// ConfigError when parameters leave [0, pi], a component has zero energy,
// components are not in strictly decreasing energy order, or the noise
// parameters are out of range.
void validate_model(const ModelSpec& model);

}  // namespace chirpfit
