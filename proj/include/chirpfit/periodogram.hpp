#pragma once

#include <cstdint>
#include <vector>

#include "chirpfit/types.hpp"

namespace chirpfit {

// Scan grid over (alpha, beta). Points are alpha_j = pi*j/alpha_count and
// beta_k = pi*k/beta_count; j and k start at 1 and stop before the count,
// so the open interval (0, pi) is covered and the degenerate endpoints are
// skipped. alpha_range/beta_range restrict which lattice points are visited
// without moving the lattice itself.
struct GridSpec {
    long long alpha_count = 0;  // 0 -> n
    long long beta_count = 0;   // 0 -> n^2
    long long beta_stride = 0;  // 0 -> 1 for n <= 250, else 8
    double alpha_min = 0.0;
    double alpha_max = 3.141592653589793;
    double beta_min = 0.0;
    double beta_max = 3.141592653589793;

    GridSpec resolved(int n) const;
    void validate() const;
};

struct GridMax {
    double alpha = 0.0;
    double beta = 0.0;
    double value = 0.0;
    long long j = 0;
    long long k = 0;
};

// I(alpha, beta) = (2/n) [ (sum y cos)^2 + (sum y sin)^2 ], direct summation.
// Kept deliberately independent of the DFT row evaluator below.
double periodogram_value(const Signal& y, double alpha, double beta);

// For fixed beta, I(alpha_j, beta) over alpha_j = pi*j/alpha_count,
// j = 0..alpha_count-1, computed as one DFT of the demodulated series
// y(t) e^{-i beta t^2}. Exact for the lattice frequencies: the series is
// placed (folded) into a length-2*alpha_count buffer by t mod 2*alpha_count.
std::vector<double> demodulated_dft_row(const Signal& y, double beta, long long alpha_count);

// Reusable FFTW plan + buffers for repeated row evaluations of one size.
class DftRowEngine {
  public:
    explicit DftRowEngine(long long alpha_count);
    ~DftRowEngine();
    DftRowEngine(const DftRowEngine&) = delete;
    DftRowEngine& operator=(const DftRowEngine&) = delete;

    long long alpha_count() const { return m_; }
    // Writes I(alpha_j, beta), j = 0..alpha_count-1, into out.
    void row(const Signal& y, double beta, std::vector<double>& out);

  private:
    long long m_;
    void* plan_ = nullptr;
    void* in_ = nullptr;
    void* out_ = nullptr;
};

// Full grid maximization of I. Parallel across beta rows; the reduction is
// by (value, then smallest (k, j)), so the result is independent of thread
// scheduling. When beta_stride > 1 a refinement pass rescans the full-rate
// beta neighbourhood of the winning row. Mirror ties (the exact symmetry
// I(alpha,beta) = I(pi-alpha, pi-beta) on integer samples) resolve to the
// smaller-k twin.
GridMax grid_scan(const Signal& y, const GridSpec& grid);

// Single-threaded direct-summation reference; same contract as grid_scan.
GridMax grid_scan_reference(const Signal& y, const GridSpec& grid);

// CSV surface export rows: alpha, beta, I.
struct SurfacePoint {
    double alpha;
    double beta;
    double value;
};
std::vector<SurfacePoint> surface(const Signal& y, const GridSpec& grid);

}  // namespace chirpfit
