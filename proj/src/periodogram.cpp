#include "chirpfit/periodogram.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace chirpfit {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW plan creation/destruction is not thread-safe; execution on private
// buffers is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct IndexRange {
    long long lo;
    long long hi;
};

long long floor_bin(double x, long long count) {
    return static_cast<long long>(std::floor(x * static_cast<double>(count) / kPi + 1e-9));
}

long long ceil_bin(double x, long long count) {
    return static_cast<long long>(std::ceil(x * static_cast<double>(count) / kPi - 1e-9));
}

IndexRange alpha_bins(const GridSpec& g) {
    long long lo = std::max(1LL, ceil_bin(g.alpha_min, g.alpha_count));
    long long hi = std::min(g.alpha_count - 1, floor_bin(g.alpha_max, g.alpha_count));
    if (lo > hi) throw std::invalid_argument("alpha_range selects no grid points");
    return {lo, hi};
}

bool full_beta_range(const GridSpec& g) {
    return g.beta_min == 0.0 && g.beta_max == kPi;
}

IndexRange beta_bins(const GridSpec& g) {
    long long lo = std::max(1LL, ceil_bin(g.beta_min, g.beta_count));
    long long hi = std::min(g.beta_count - 1, floor_bin(g.beta_max, g.beta_count));
    // The sampled objective has the exact symmetry I(a,b) = I(pi-a, pi-b):
    // grid values pair up as (j,k) <-> (alpha_count-j, beta_count-k) with
    // equal I. The smallest-(k,j) tie-break always awards such a pair to the
    // lower-k twin, so on the full default range the upper half never wins
    // and is skipped. This keeps the winner stable when rounding perturbs
    // the two mathematically equal values.
    if (full_beta_range(g)) hi = std::min(hi, g.beta_count / 2);
    if (lo > hi) throw std::invalid_argument("beta_range selects no grid points");
    return {lo, hi};
}

bool improves(double v, long long k, long long j, const GridMax& best) {
    if (v > best.value) return true;
    if (v < best.value) return false;
    if (k != best.k) return k < best.k;
    return j < best.j;
}

GridMax empty_best() {
    GridMax b;
    b.value = -std::numeric_limits<double>::infinity();
    b.j = std::numeric_limits<long long>::max();
    b.k = std::numeric_limits<long long>::max();
    return b;
}

void finalize(GridMax& b, const GridSpec& g) {
    b.alpha = kPi * static_cast<double>(b.j) / static_cast<double>(g.alpha_count);
    b.beta = kPi * static_cast<double>(b.k) / static_cast<double>(g.beta_count);
}

}  // namespace

GridSpec GridSpec::resolved(int n) const {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    GridSpec g = *this;
    if (g.alpha_count == 0) g.alpha_count = n;
    if (g.beta_count == 0) g.beta_count = static_cast<long long>(n) * n;
    if (g.beta_stride == 0) g.beta_stride = n <= 250 ? 1 : 8;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (alpha_count < 2 || beta_count < 2)
        throw std::invalid_argument("grid counts must be at least 2");
    if (beta_stride < 1) throw std::invalid_argument("beta_stride must be positive");
    if (!(alpha_min >= 0.0 && alpha_min <= alpha_max && alpha_max <= kPi))
        throw std::invalid_argument("alpha_range must be a sub-interval of [0, pi]");
    if (!(beta_min >= 0.0 && beta_min <= beta_max && beta_max <= kPi))
        throw std::invalid_argument("beta_range must be a sub-interval of [0, pi]");
}

double periodogram_value(const Signal& y, double alpha, double beta) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const int n = static_cast<int>(y.size());
    double cs = 0.0, sn = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = i + 1;
        const double ph = alpha * t + beta * t * t;
        cs += y[i] * std::cos(ph);
        sn += y[i] * std::sin(ph);
    }
    return (2.0 / n) * (cs * cs + sn * sn);
}

DftRowEngine::DftRowEngine(long long alpha_count) : m_(alpha_count) {
    if (alpha_count < 2 || alpha_count > (1LL << 26))
        throw std::invalid_argument("alpha_count out of range");
    const long long M = 2 * m_;
    in_ = fftw_malloc(sizeof(fftw_complex) * M);
    out_ = fftw_malloc(sizeof(fftw_complex) * M);
    if (!in_ || !out_) {
        fftw_free(in_);
        fftw_free(out_);
        throw std::bad_alloc();
    }
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(M), static_cast<fftw_complex*>(in_),
                             static_cast<fftw_complex*>(out_), FFTW_FORWARD, FFTW_ESTIMATE);
}

DftRowEngine::~DftRowEngine() {
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    fftw_free(in_);
    fftw_free(out_);
}

void DftRowEngine::row(const Signal& y, double beta, std::vector<double>& out) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const long long M = 2 * m_;
    auto* in = static_cast<fftw_complex*>(in_);
    auto* dft = static_cast<fftw_complex*>(out_);
    std::memset(in, 0, sizeof(fftw_complex) * M);

    // Demodulate by e^{-i beta t^2} and fold by t mod M. Folding is exact
    // for the lattice frequencies alpha_j = 2*pi*j/M, so the row matches the
    // direct sum even when the signal is longer than the transform.
    const int n = static_cast<int>(y.size());
    for (int i = 0; i < n; ++i) {
        const double t = i + 1;
        const double ph = beta * t * t;
        const long long slot = static_cast<long long>(i + 1) % M;
        in[slot][0] += y[i] * std::cos(ph);
        in[slot][1] -= y[i] * std::sin(ph);
    }
    fftw_execute(static_cast<fftw_plan>(plan_));
    out.resize(static_cast<std::size_t>(m_));
    const double scale = 2.0 / n;
    for (long long j = 0; j < m_; ++j) {
        const double re = dft[j][0];
        const double im = dft[j][1];
        out[static_cast<std::size_t>(j)] = scale * (re * re + im * im);
    }
}

std::vector<double> demodulated_dft_row(const Signal& y, double beta, long long alpha_count) {
    DftRowEngine engine(alpha_count);
    std::vector<double> out;
    engine.row(y, beta, out);
    return out;
}

GridMax grid_scan(const Signal& y, const GridSpec& grid) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const int n = static_cast<int>(y.size());
    const GridSpec g = grid.resolved(n);
    const IndexRange ja = alpha_bins(g);
    const IndexRange kb = beta_bins(g);
    const long long stride = g.beta_stride;

    std::vector<long long> ks;
    for (long long k = kb.lo; k <= kb.hi; k += stride) ks.push_back(k);

    GridMax best = empty_best();
#pragma omp parallel
    {
        DftRowEngine engine(g.alpha_count);
        std::vector<double> row;
        GridMax local = empty_best();
#pragma omp for schedule(static) nowait
        for (long long idx = 0; idx < static_cast<long long>(ks.size()); ++idx) {
            const long long k = ks[static_cast<std::size_t>(idx)];
            const double beta = kPi * static_cast<double>(k) / static_cast<double>(g.beta_count);
            engine.row(y, beta, row);
            for (long long j = ja.lo; j <= ja.hi; ++j) {
                const double v = row[static_cast<std::size_t>(j)];
                if (improves(v, k, j, local)) {
                    local.value = v;
                    local.j = j;
                    local.k = k;
                }
            }
        }
#pragma omp critical(chirpfit_grid_scan_merge)
        {
            if (improves(local.value, local.k, local.j, best)) best = local;
        }
    }

    if (stride > 1) {
        // Full-rate rescan of the winning row's neighbourhood.
        long long lo = std::max(kb.lo, best.k - stride + 1);
        long long hi = std::min(best.k + stride - 1,
                                full_beta_range(g) ? g.beta_count - 1
                                                   : std::min(g.beta_count - 1,
                                                              floor_bin(g.beta_max, g.beta_count)));
        DftRowEngine engine(g.alpha_count);
        std::vector<double> row;
        for (long long k = lo; k <= hi; ++k) {
            const double beta = kPi * static_cast<double>(k) / static_cast<double>(g.beta_count);
            engine.row(y, beta, row);
            for (long long j = ja.lo; j <= ja.hi; ++j) {
                const double v = row[static_cast<std::size_t>(j)];
                if (improves(v, k, j, best)) {
                    best.value = v;
                    best.j = j;
                    best.k = k;
                }
            }
        }
    }

    finalize(best, g);
    return best;
}

GridMax grid_scan_reference(const Signal& y, const GridSpec& grid) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const int n = static_cast<int>(y.size());
    const GridSpec g = grid.resolved(n);
    const IndexRange ja = alpha_bins(g);
    const IndexRange kb = beta_bins(g);
    const long long stride = g.beta_stride;

    GridMax best = empty_best();
    for (long long k = kb.lo; k <= kb.hi; k += stride) {
        const double beta = kPi * static_cast<double>(k) / static_cast<double>(g.beta_count);
        for (long long j = ja.lo; j <= ja.hi; ++j) {
            const double alpha = kPi * static_cast<double>(j) / static_cast<double>(g.alpha_count);
            const double v = periodogram_value(y, alpha, beta);
            if (improves(v, k, j, best)) {
                best.value = v;
                best.j = j;
                best.k = k;
            }
        }
    }

    if (stride > 1) {
        long long lo = std::max(kb.lo, best.k - stride + 1);
        long long hi = std::min(best.k + stride - 1,
                                full_beta_range(g) ? g.beta_count - 1
                                                   : std::min(g.beta_count - 1,
                                                              floor_bin(g.beta_max, g.beta_count)));
        for (long long k = lo; k <= hi; ++k) {
            const double beta = kPi * static_cast<double>(k) / static_cast<double>(g.beta_count);
            for (long long j = ja.lo; j <= ja.hi; ++j) {
                const double alpha = kPi * static_cast<double>(j) / static_cast<double>(g.alpha_count);
                const double v = periodogram_value(y, alpha, beta);
                if (improves(v, k, j, best)) {
                    best.value = v;
                    best.j = j;
                    best.k = k;
                }
            }
        }
    }

    finalize(best, g);
    return best;
}

std::vector<SurfacePoint> surface(const Signal& y, const GridSpec& grid) {
    if (y.empty()) throw std::invalid_argument("signal is empty");
    const int n = static_cast<int>(y.size());
    const GridSpec g = grid.resolved(n);
    const IndexRange ja = alpha_bins(g);
    long long klo = std::max(1LL, ceil_bin(g.beta_min, g.beta_count));
    long long khi = std::min(g.beta_count - 1, floor_bin(g.beta_max, g.beta_count));
    if (klo > khi) throw std::invalid_argument("beta_range selects no grid points");

    std::vector<SurfacePoint> pts;
    DftRowEngine engine(g.alpha_count);
    std::vector<double> row;
    for (long long k = klo; k <= khi; k += g.beta_stride) {
        const double beta = kPi * static_cast<double>(k) / static_cast<double>(g.beta_count);
        engine.row(y, beta, row);
        for (long long j = ja.lo; j <= ja.hi; ++j) {
            const double alpha = kPi * static_cast<double>(j) / static_cast<double>(g.alpha_count);
            pts.push_back({alpha, beta, row[static_cast<std::size_t>(j)]});
        }
    }
    return pts;
}

}  // namespace chirpfit
