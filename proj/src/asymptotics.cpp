#include "chirpfit/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace chirpfit {

Mat4 sigma(double A, double B) {
    const double E = A * A + B * B;
    if (!(E > 0.0)) throw std::invalid_argument("sigma requires A^2 + B^2 > 0");
    const double p = 2.0 / E;
    Mat4 m{};
    m[0] = {p * 0.5 * (A * A + 9.0 * B * B), p * (-4.0 * A * B), p * (-18.0 * B), p * (15.0 * B)};
    m[1] = {p * (-4.0 * A * B), p * 0.5 * (9.0 * A * A + B * B), p * (18.0 * A), p * (-15.0 * A)};
    m[2] = {p * (-18.0 * B), p * (18.0 * A), p * 96.0, p * (-90.0)};
    m[3] = {p * (15.0 * B), p * (-15.0 * A), p * (-90.0), p * 90.0};
    return m;
}

Mat4 sigma_inverse(double A, double B) {
    const double E = A * A + B * B;
    if (!(E > 0.0)) throw std::invalid_argument("sigma_inverse requires A^2 + B^2 > 0");
    Mat4 m{};
    m[0] = {1.0, 0.0, B / 2.0, B / 3.0};
    m[1] = {0.0, 1.0, -A / 2.0, -A / 3.0};
    m[2] = {B / 2.0, -A / 2.0, E / 3.0, E / 4.0};
    m[3] = {B / 3.0, -A / 3.0, E / 4.0, E / 5.0};
    return m;
}

AvarReport asymptotic_variances(const ChirpComponent& comp, double c, double sigma2, int n) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    const Mat4 S = sigma(comp.a, comp.b);
    const double nd = n;
    // d = diag(n^-1/2, n^-1/2, n^-3/2, n^-5/2), squared below.
    const double d2[4] = {1.0 / nd, 1.0 / nd, 1.0 / (nd * nd * nd),
                          1.0 / (nd * nd * nd * nd * nd)};
    AvarReport r;
    const double base = kAvarCalibration * c * sigma2;
    r.a = base * S[0][0] * d2[0];
    r.b = base * S[1][1] * d2[1];
    r.alpha = base * S[2][2] * d2[2];
    r.beta = base * S[3][3] * d2[3];
    r.c = c;
    r.sigma2 = sigma2;
    r.n = n;
    return r;
}

}  // namespace chirpfit
