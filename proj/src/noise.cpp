#include "chirpfit/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace chirpfit {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + stream * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

void check_spec(const NoiseSpec& spec) {
    if (!(spec.sigma2 > 0.0)) throw std::invalid_argument("noise sigma2 must be positive");
    if (spec.kind == NoiseKind::ar1 && !(std::abs(spec.phi) < 1.0))
        throw std::invalid_argument("ar1 requires |phi| < 1");
    if (spec.kind == NoiseKind::coeffs && spec.coeffs.empty())
        throw std::invalid_argument("coeffs noise requires at least one coefficient");
    if (spec.burn_in < 0) throw std::invalid_argument("burn_in must be non-negative");
}

}  // namespace

Signal draw_noise(const NoiseSpec& spec, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    check_spec(spec);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(spec.sigma2));

    // Main-window innovations first, presample afterwards in descending t,
    // so filters degenerate to the iid stream bit for bit (ma1 with rho=0,
    // coeffs {1}) instead of shifting it.
    std::vector<double> e(n);
    for (int i = 0; i < n; ++i) e[i] = gauss(rng);

    Signal x(n);
    switch (spec.kind) {
        case NoiseKind::iid:
            x = e;
            break;
        case NoiseKind::ma1: {
            double e0 = gauss(rng);
            x[0] = e[0] + spec.rho * e0;
            for (int i = 1; i < n; ++i) x[i] = e[i] + spec.rho * e[i - 1];
            break;
        }
        case NoiseKind::ar1: {
            std::vector<double> pre(spec.burn_in);
            for (int j = 0; j < spec.burn_in; ++j) pre[j] = gauss(rng);  // pre[j] = e(-j)
            double state = 0.0;
            for (int j = spec.burn_in - 1; j >= 0; --j) state = spec.phi * state + pre[j];
            for (int i = 0; i < n; ++i) {
                state = spec.phi * state + e[i];
                x[i] = state;
            }
            break;
        }
        case NoiseKind::coeffs: {
            int q = static_cast<int>(spec.coeffs.size()) - 1;
            std::vector<double> pre(q);
            for (int j = 0; j < q; ++j) pre[j] = gauss(rng);  // pre[j] = e(-j)
            for (int i = 0; i < n; ++i) {
                int t = i + 1;
                double s = 0.0;
                for (int j = 0; j <= q; ++j) {
                    int tj = t - j;  // innovation time index
                    s += spec.coeffs[j] * (tj >= 1 ? e[tj - 1] : pre[-tj]);
                }
                x[i] = s;
            }
            break;
        }
    }
    return x;
}

}  // namespace chirpfit
