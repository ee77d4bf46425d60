#pragma once

// Thin FFTW3 wrappers. Plans are created with FFTW_ESTIMATE (deterministic)
// under a global lock; execution is on per-call buffers.

#include "btoep/base.hpp"

#include <fftw3.h>

#include <mutex>

namespace btoep::fft {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place DFT. sign = FFTW_FORWARD (-1): X_j = sum_k x_k e^{-2pi i jk/n};
/// sign = FFTW_BACKWARD (+1): unnormalized inverse.
inline void dft(std::vector<cxd>& x, int sign) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(x.data()),
                            reinterpret_cast<fftw_complex*>(x.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

inline void dft_forward(std::vector<cxd>& x) { dft(x, FFTW_FORWARD); }
inline void dft_backward(std::vector<cxd>& x) { dft(x, FFTW_BACKWARD); }

/// Orthonormal DST-I: y = S x with S[i][j] = sqrt(2/(n+1)) sin((i+1)(j+1)pi/(n+1)).
/// S is symmetric orthogonal (S^2 = I).
inline void dst1(std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_r2r_1d(n, x.data(), x.data(), FFTW_RODFT00, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 0.5 * std::sqrt(2.0 / (n + 1));
  for (double& v : x) v *= scale;
}

/// Orthonormal two-dimensional DST-I, x stored column-major as n1 x n2
/// (applies S_{n1} along columns and S_{n2} along rows).
inline void dst1_2d(std::vector<double>& x, int n1, int n2) {
  require(static_cast<int>(x.size()) == n1 * n2, "dst1_2d: size mismatch");
  if (x.empty()) return;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW's r2r_2d is row-major: first dimension = slowest. Column-major
    // n1 x n2 data is row-major n2 x n1.
    plan = fftw_plan_r2r_2d(n2, n1, x.data(), x.data(), FFTW_RODFT00, FFTW_RODFT00,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 0.25 * std::sqrt(2.0 / (n1 + 1)) * std::sqrt(2.0 / (n2 + 1));
  for (double& v : x) v *= scale;
}

inline Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace btoep::fft
