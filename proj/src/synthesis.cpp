#include "chirpfit/synthesis.hpp"

#include <cmath>
#include <stdexcept>

#include "chirpfit/noise.hpp"

namespace chirpfit {

Signal synthesize_clean(const std::vector<ChirpComponent>& components, int n) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    Signal y(n, 0.0);
    for (const auto& c : components) {
        for (int i = 0; i < n; ++i) {
            double t = i + 1;
            double ph = phase_at(c, t);
            y[i] += c.a * std::cos(ph) + c.b * std::sin(ph);
        }
    }
    return y;
}

Signal synthesize(const ModelSpec& model, int n, std::uint64_t seed) {
    Signal y = synthesize_clean(model.components, n);
    if (!model.noiseless) {
        Signal x = draw_noise(model.noise, n, seed);
        for (int i = 0; i < n; ++i) y[i] += x[i];
    }
    return y;
}

double signal_energy(const Signal& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return s;
}

void validate_model(const ModelSpec& model) {
    constexpr double pi = 3.141592653589793;
    for (const auto& c : model.components) {
        if (!(c.alpha >= 0.0 && c.alpha <= pi && c.beta >= 0.0 && c.beta <= pi))
            throw ConfigError("component frequencies must lie in [0, pi]");
        if (!(c.energy() > 0.0)) throw ConfigError("component has zero amplitude");
    }
    for (std::size_t i = 1; i < model.components.size(); ++i) {
        if (!(model.components[i - 1].energy() > model.components[i].energy()))
            throw ConfigError(
                "model violates the component ordering assumption: components must be "
                "listed in strictly decreasing energy order (A^2 + B^2)");
    }
    if (!model.noiseless) {
        const NoiseSpec& ns = model.noise;
        if (!(ns.sigma2 > 0.0)) throw ConfigError("noise sigma2 must be positive");
        if (ns.kind == NoiseKind::ar1 && !(std::abs(ns.phi) < 1.0))
            throw ConfigError("ar1 noise requires |phi| < 1");
        if (ns.kind == NoiseKind::coeffs && ns.coeffs.empty())
            throw ConfigError("coeffs noise requires at least one coefficient");
    }
}

}  // namespace chirpfit
