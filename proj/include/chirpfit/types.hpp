#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chirpfit {

// Samples are taken at t = 1, 2, ..., n, so y[i] is the observation at t = i + 1.
using Signal = std::vector<double>;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One chirp component: a*cos(alpha*t + beta*t^2) + b*sin(alpha*t + beta*t^2).
struct ChirpComponent {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    double energy() const { return a * a + b * b; }
    double amplitude() const { return std::sqrt(energy()); }
};

enum class NoiseKind { iid, ma1, ar1, coeffs };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::iid;
    double sigma2 = 1.0;          // variance of the innovation sequence
    double rho = 0.0;             // ma1: X(t) = e(t) + rho*e(t-1)
    double phi = 0.0;             // ar1: X(t) = phi*X(t-1) + e(t), |phi| < 1
    std::vector<double> coeffs;   // causal filter a(0), a(1), ...; X(t) = sum a(j) e(t-j)
    int burn_in = 500;            // ar1 warm-up length

    // Sum of squared filter coefficients; scales innovation variance into
    // the long-run constant used by the asymptotic covariance.
    double coeff_energy() const {
        switch (kind) {
            case NoiseKind::iid: return 1.0;
            case NoiseKind::ma1: return 1.0 + rho * rho;
            case NoiseKind::ar1: return 1.0 / (1.0 - phi * phi);
            case NoiseKind::coeffs: {
                double s = 0.0;
                for (double c : coeffs) s += c * c;
                return s;
            }
        }
        return 1.0;
    }
};

struct ModelSpec {
    std::vector<ChirpComponent> components;
    NoiseSpec noise;
    bool noiseless = false;
};

enum class Method { alse, lse };

inline std::string method_name(Method m) { return m == Method::alse ? "alse" : "lse"; }

inline Method method_from_string(const std::string& s) {
    if (s == "alse") return Method::alse;
    if (s == "lse") return Method::lse;
    throw ConfigError("unknown method: " + s);
}

}  // namespace chirpfit
