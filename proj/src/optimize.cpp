#include "chirpfit/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chirpfit/synthesis.hpp"

namespace chirpfit {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp01pi(double x) { return std::clamp(x, 0.0, kPi); }

struct Vertex {
    double a;
    double b;
    double f;
};

double diameter(const std::array<Vertex, 3>& v) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            d = std::max(d, std::hypot(v[i].a - v[j].a, v[i].b - v[j].b));
    return d;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (!(param_tol > 0.0) || !(value_tol > 0.0))
        throw std::invalid_argument("optimizer tolerances must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
    if (!(reflection > 0.0) || !(expansion > 1.0) || !(contraction > 0.0) ||
        contraction >= 1.0 || !(shrink > 0.0) || shrink >= 1.0)
        throw std::invalid_argument("invalid simplex coefficients");
}

NmResult nelder_mead(const std::function<double(double, double)>& objective,
                     double start_alpha, double start_beta,
                     const OptimizerConfig& cfg, Sense sense, int n) {
    cfg.validate();
    if (n < 1) throw std::invalid_argument("sample count must be positive");

    const double sgn = sense == Sense::maximize ? -1.0 : 1.0;
    auto eval = [&](double a, double b) {
        return sgn * objective(clamp01pi(a), clamp01pi(b));
    };

    double step_a = cfg.init_step_alpha > 0.0 ? cfg.init_step_alpha : kPi / n;
    double step_b = cfg.init_step_beta > 0.0
                        ? cfg.init_step_beta
                        : kPi / (static_cast<double>(n) * static_cast<double>(n));

    const double a0 = clamp01pi(start_alpha);
    const double b0 = clamp01pi(start_beta);
    // Step away from the boundary if the start sits on it.
    if (a0 + step_a > kPi) step_a = -step_a;
    if (b0 + step_b > kPi) step_b = -step_b;

    std::array<Vertex, 3> v;
    v[0] = {a0, b0, eval(a0, b0)};
    if (!std::isfinite(v[0].f))
        throw std::invalid_argument("objective is not finite at the start point");
    v[1] = {clamp01pi(a0 + step_a), b0, 0.0};
    v[1].f = eval(v[1].a, v[1].b);
    v[2] = {a0, clamp01pi(b0 + step_b), 0.0};
    v[2].f = eval(v[2].a, v[2].b);

    int iter = 0;
    bool converged = false;
    for (; iter < cfg.max_iters; ++iter) {
        std::sort(v.begin(), v.end(), [](const Vertex& x, const Vertex& y) { return x.f < y.f; });

        const double spread = std::abs(v[2].f - v[0].f);
        // The relative floor keeps the spread test meaningful when the
        // objective is of order 1e3 and its evaluation noise exceeds an
        // absolute 1e-12.
        if (diameter(v) <= cfg.param_tol &&
            spread <= cfg.value_tol * std::max(1.0, std::abs(v[0].f))) {
            converged = true;
            break;
        }

        const double ca = 0.5 * (v[0].a + v[1].a);
        const double cb = 0.5 * (v[0].b + v[1].b);

        Vertex refl;
        refl.a = clamp01pi(ca + cfg.reflection * (ca - v[2].a));
        refl.b = clamp01pi(cb + cfg.reflection * (cb - v[2].b));
        refl.f = eval(refl.a, refl.b);

        if (refl.f < v[0].f) {
            Vertex expd;
            expd.a = clamp01pi(ca + cfg.expansion * (refl.a - ca));
            expd.b = clamp01pi(cb + cfg.expansion * (refl.b - cb));
            expd.f = eval(expd.a, expd.b);
            v[2] = expd.f < refl.f ? expd : refl;
            continue;
        }
        if (refl.f < v[1].f) {
            v[2] = refl;
            continue;
        }

        Vertex ctr;
        if (refl.f < v[2].f) {
            ctr.a = clamp01pi(ca + cfg.contraction * (refl.a - ca));
            ctr.b = clamp01pi(cb + cfg.contraction * (refl.b - cb));
            ctr.f = eval(ctr.a, ctr.b);
            if (ctr.f <= refl.f) {
                v[2] = ctr;
                continue;
            }
        } else {
            ctr.a = clamp01pi(ca + cfg.contraction * (v[2].a - ca));
            ctr.b = clamp01pi(cb + cfg.contraction * (v[2].b - cb));
            ctr.f = eval(ctr.a, ctr.b);
            if (ctr.f < v[2].f) {
                v[2] = ctr;
                continue;
            }
        }

        for (int i = 1; i < 3; ++i) {
            v[i].a = clamp01pi(v[0].a + cfg.shrink * (v[i].a - v[0].a));
            v[i].b = clamp01pi(v[0].b + cfg.shrink * (v[i].b - v[0].b));
            v[i].f = eval(v[i].a, v[i].b);
        }
    }

    std::sort(v.begin(), v.end(), [](const Vertex& x, const Vertex& y) { return x.f < y.f; });
    NmResult r;
    r.alpha = v[0].a;
    r.beta = v[0].b;
    r.value = sgn * v[0].f;
    r.iterations = iter;
    r.converged = converged;
    return r;
}

double sse(const Signal& y, const std::vector<ChirpComponent>& components) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const int n = static_cast<int>(y.size());
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = i + 1;
        double r = y[i];
        for (const auto& c : components) {
            const double ph = phase_at(c, t);
            r -= c.a * std::cos(ph) + c.b * std::sin(ph);
        }
        s += r * r;
    }
    return s;
}

std::pair<double, double> separable_amplitudes(const Signal& y, double alpha, double beta) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const int n = static_cast<int>(y.size());
    double scc = 0.0, sss = 0.0, scs = 0.0, syc = 0.0, sys = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = i + 1;
        const double ph = alpha * t + beta * t * t;
        const double c = std::cos(ph);
        const double s = std::sin(ph);
        scc += c * c;
        sss += s * s;
        scs += c * s;
        syc += y[i] * c;
        sys += y[i] * s;
    }
    const double det = scc * sss - scs * scs;
    if (!(det > 1e-12 * (scc + sss) * (scc + sss)))
        throw EstimationError("degenerate cos/sin regressors at this (alpha, beta)");
    const double A = (sss * syc - scs * sys) / det;
    const double B = (scc * sys - scs * syc) / det;
    return {A, B};
}

double profiled_sse(const Signal& y, double alpha, double beta) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const int n = static_cast<int>(y.size());
    double scc = 0.0, sss = 0.0, scs = 0.0, syc = 0.0, sys = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = i + 1;
        const double ph = alpha * t + beta * t * t;
        const double c = std::cos(ph);
        const double s = std::sin(ph);
        scc += c * c;
        sss += s * s;
        scs += c * s;
        syc += y[i] * c;
        sys += y[i] * s;
        syy += y[i] * y[i];
    }
    const double det = scc * sss - scs * scs;
    if (!(det > 1e-12 * (scc + sss) * (scc + sss)))
        throw EstimationError("degenerate cos/sin regressors at this (alpha, beta)");
    const double A = (sss * syc - scs * sys) / det;
    const double B = (scc * sys - scs * syc) / det;
    // y'y - theta' X'y: the fitted sum of squares at the LS amplitudes.
    return syy - A * syc - B * sys;
}

}  // namespace chirpfit
