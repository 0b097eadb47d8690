#include "chirpfit/estimate.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chirpfit/synthesis.hpp"

namespace chirpfit {

namespace {

constexpr double kPi = 3.141592653589793;

void subtract_component(Signal& y, const ChirpComponent& c) {
    const int n = static_cast<int>(y.size());
    for (int i = 0; i < n; ++i) {
        const double t = i + 1;
        const double ph = phase_at(c, t);
        y[i] -= c.a * std::cos(ph) + c.b * std::sin(ph);
    }
}

}  // namespace

std::pair<double, double> average_amplitudes(const Signal& y, double alpha, double beta) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const int n = static_cast<int>(y.size());
    double sc = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = i + 1;
        const double ph = alpha * t + beta * t * t;
        sc += y[i] * std::cos(ph);
        ss += y[i] * std::sin(ph);
    }
    return {2.0 * sc / n, 2.0 * ss / n};
}

FitResult sequential_fit(const Signal& y, int p, Method method, const GridSpec& grid,
                         const OptimizerConfig& cfg) {
    if (p < 1) throw std::invalid_argument("component count must be at least 1");
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const auto t0 = std::chrono::steady_clock::now();
    const int n = static_cast<int>(y.size());
    const GridSpec g = grid.resolved(n);
    const double cell_alpha = kPi / static_cast<double>(g.alpha_count);
    const double cell_beta = kPi / static_cast<double>(g.beta_count);

    FitResult fr;
    fr.method = method;
    Signal cur = y;
    for (int step = 0; step < p; ++step) {
        const GridMax start = grid_scan(cur, g);

        NmResult nm;
        if (method == Method::alse) {
            nm = nelder_mead(
                [&cur](double a, double b) { return periodogram_value(cur, a, b); },
                start.alpha, start.beta, cfg, Sense::maximize, n);
        } else {
            nm = nelder_mead(
                [&cur](double a, double b) { return profiled_sse(cur, a, b); },
                start.alpha, start.beta, cfg, Sense::minimize, n);
        }

        ChirpComponent comp;
        comp.alpha = nm.alpha;
        comp.beta = nm.beta;
        if (method == Method::alse) {
            std::tie(comp.a, comp.b) = average_amplitudes(cur, nm.alpha, nm.beta);
        } else {
            std::tie(comp.a, comp.b) = separable_amplitudes(cur, nm.alpha, nm.beta);
        }

        bool duplicate = false;
        for (const auto& prev : fr.components) {
            if (std::abs(prev.alpha - comp.alpha) < cell_alpha &&
                std::abs(prev.beta - comp.beta) < cell_beta) {
                duplicate = true;
                break;
            }
        }

        subtract_component(cur, comp);
        fr.components.push_back(comp);
        fr.steps.push_back({start, comp, nm.value, nm.iterations, nm.converged, duplicate});
        fr.sse_trajectory.push_back(sse(y, fr.components));
    }

    const auto t1 = std::chrono::steady_clock::now();
    fr.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return fr;
}

FitResult alse_single(const Signal& y, const GridSpec& grid, const OptimizerConfig& cfg) {
    return sequential_fit(y, 1, Method::alse, grid, cfg);
}

FitResult lse_single(const Signal& y, const GridSpec& grid, const OptimizerConfig& cfg) {
    return sequential_fit(y, 1, Method::lse, grid, cfg);
}

double bic(double sse_k, int k, int n) {
    if (!(sse_k > 0.0)) throw std::invalid_argument("sse must be positive");
    if (k < 0) throw std::invalid_argument("component count must be non-negative");
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    return n * std::log(sse_k) + 2.0 * (4.0 * k + 1.0) * std::log(static_cast<double>(n));
}

OrderSelection select_order(const Signal& y, int k_max, Method method, const GridSpec& grid,
                            const OptimizerConfig& cfg) {
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    FitResult full = sequential_fit(y, k_max, method, grid, cfg);

    const int n = static_cast<int>(y.size());
    OrderSelection sel;
    sel.bic_values.reserve(k_max);
    int best_k = 1;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        const double b = bic(full.sse_trajectory[k - 1], k, n);
        sel.bic_values.push_back(b);
        if (b < best_bic) {  // strict: ties keep the smaller k
            best_bic = b;
            best_k = k;
        }
    }
    sel.p_hat = best_k;
    sel.fit = std::move(full);
    sel.fit.components.resize(best_k);
    sel.fit.steps.resize(best_k);
    sel.fit.sse_trajectory.resize(best_k);
    return sel;
}

std::vector<int> match_components(const std::vector<ChirpComponent>& estimated,
                                  const std::vector<ChirpComponent>& truth, int n) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    const int m = static_cast<int>(estimated.size());
    const int t = static_cast<int>(truth.size());
    std::vector<int> assign(m, -1);
    std::vector<bool> est_used(m, false), tru_used(t, false);
    const double nd = n;

    const int pairs = std::min(m, t);
    for (int round = 0; round < pairs; ++round) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        for (int i = 0; i < m; ++i) {
            if (est_used[i]) continue;
            for (int j = 0; j < t; ++j) {
                if (tru_used[j]) continue;
                const double d = nd * std::abs(estimated[i].alpha - truth[j].alpha) +
                                 nd * nd * std::abs(estimated[i].beta - truth[j].beta);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        assign[bi] = bj;
        est_used[bi] = true;
        tru_used[bj] = true;
    }
    return assign;
}

}  // namespace chirpfit
