#include "chirpfit/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "chirpfit/asymptotics.hpp"
#include "chirpfit/noise.hpp"
#include "chirpfit/synthesis.hpp"

namespace chirpfit {

void McScenario::validate() const {
    if (n < 1) throw ConfigError("scenario sample size must be positive");
    if (reps < 1) throw ConfigError("scenario needs at least one replication");
    if (methods.empty()) throw ConfigError("scenario needs at least one method");
    if (model.components.empty()) throw ConfigError("scenario model needs at least one component");
    validate_model(model);
    grid.resolved(n);
    optimizer.validate();
}

namespace {

struct RepResult {
    bool ok = false;
    // Matched estimates laid out [method][true component][A,B,alpha,beta].
    std::vector<double> est;
};

const char* kParamNames[4] = {"A", "B", "alpha", "beta"};

double param_of(const ChirpComponent& c, int idx) {
    switch (idx) {
        case 0: return c.a;
        case 1: return c.b;
        case 2: return c.alpha;
        default: return c.beta;
    }
}

}  // namespace

McStats run_scenario(const McScenario& s) {
    s.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const int R = s.reps;
    const int M = static_cast<int>(s.methods.size());
    const int P = static_cast<int>(s.model.components.size());

    // Every replication writes only to its own slot; aggregation then walks
    // the slots in replication order. Thread count can change scheduling but
    // not the aggregate.
    std::vector<RepResult> results(static_cast<std::size_t>(R));
    std::exception_ptr first_error = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < R; ++r) {
        RepResult& out = results[static_cast<std::size_t>(r)];
        try {
            const std::uint64_t seed = mix_seed(s.base_seed, static_cast<std::uint64_t>(r) + 1);
            const Signal y = synthesize(s.model, s.n, seed);
            std::vector<double> est(static_cast<std::size_t>(M) * P * 4, 0.0);
            bool ok = true;
            for (int m = 0; m < M && ok; ++m) {
                const FitResult fit = sequential_fit(y, P, s.methods[static_cast<std::size_t>(m)],
                                                     s.grid, s.optimizer);
                if (!fit.all_converged()) {
                    ok = false;
                    break;
                }
                const std::vector<int> match =
                    match_components(fit.components, s.model.components, s.n);
                for (int i = 0; i < P; ++i) {
                    const int j = match[static_cast<std::size_t>(i)];
                    for (int q = 0; q < 4; ++q)
                        est[(static_cast<std::size_t>(m) * P + j) * 4 + q] =
                            param_of(fit.components[static_cast<std::size_t>(i)], q);
                }
            }
            if (ok) {
                out.ok = true;
                out.est = std::move(est);
            }
        } catch (const EstimationError&) {
            out.ok = false;
        } catch (...) {
#pragma omp critical(chirpfit_mc_error)
            if (!first_error) first_error = std::current_exception();
        }
    }

    if (first_error) std::rethrow_exception(first_error);

    int ok_count = 0;
    for (const auto& rr : results)
        if (rr.ok) ++ok_count;
    const int failures = R - ok_count;
    if (failures * 10 > R)
        throw EstimationError("more than 10% of replications failed (" +
                              std::to_string(failures) + " of " + std::to_string(R) + ")");

    const double c = s.model.noise.coeff_energy();
    McStats stats;
    stats.reps = ok_count;
    stats.failures = failures;
    for (int m = 0; m < M; ++m) {
        for (int p = 0; p < P; ++p) {
            const ChirpComponent& truth = s.model.components[static_cast<std::size_t>(p)];
            const AvarReport av = asymptotic_variances(truth, c, s.model.noise.sigma2, s.n);
            const double avar4[4] = {av.a, av.b, av.alpha, av.beta};
            for (int q = 0; q < 4; ++q) {
                const std::size_t off = (static_cast<std::size_t>(m) * P + p) * 4 + q;
                double sum = 0.0;
                for (const auto& rr : results)
                    if (rr.ok) sum += rr.est[off];
                const double avg = sum / ok_count;
                double mse = 0.0, var = 0.0;
                const double tru = param_of(truth, q);
                for (const auto& rr : results) {
                    if (!rr.ok) continue;
                    const double e = rr.est[off];
                    mse += (e - tru) * (e - tru);
                    var += (e - avg) * (e - avg);
                }
                mse /= ok_count;
                var /= ok_count;

                McCell cell;
                cell.method = s.methods[static_cast<std::size_t>(m)];
                cell.component = p;
                cell.parameter = kParamNames[q];
                cell.truth = tru;
                cell.average = avg;
                cell.bias = avg - tru;
                cell.mse = mse;
                cell.variance = var;
                cell.avar = avar4[q];
                stats.cells.push_back(cell);
            }
        }
    }

    const auto t1 = std::chrono::steady_clock::now();
    stats.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
    return stats;
}

RateStudy rate_study(const ModelSpec& model, const std::vector<int>& sizes, int reps,
                     Method method, std::uint64_t base_seed) {
    if (sizes.size() < 2) throw std::invalid_argument("rate study needs at least two sizes");

    RateStudy study;
    for (int n : sizes) {
        McScenario s;
        s.model = model;
        s.n = n;
        s.reps = reps;
        s.methods = {method};
        s.base_seed = base_seed;
        const McStats stats = run_scenario(s);
        RatePoint pt;
        pt.n = n;
        pt.failures = stats.failures;
        for (const auto& cell : stats.cells) {
            if (cell.component != 0) continue;
            if (cell.parameter == "alpha") pt.mse_alpha = cell.mse;
            if (cell.parameter == "beta") pt.mse_beta = cell.mse;
        }
        study.points.push_back(pt);
    }

    // OLS slope of log(mse) on log(n).
    auto slope = [&](bool alpha) {
        const int k = static_cast<int>(study.points.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (const auto& pt : study.points) {
            const double x = std::log(static_cast<double>(pt.n));
            const double y = std::log(alpha ? pt.mse_alpha : pt.mse_beta);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        return (k * sxy - sx * sy) / (k * sxx - sx * sx);
    };
    study.slope_alpha = slope(true);
    study.slope_beta = slope(false);
    return study;
}

}  // namespace chirpfit
