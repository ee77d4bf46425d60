#pragma once

// Dense spectral kernels on top of LAPACKE. Eigen matrices are used as
// column-major storage, which is what LAPACK expects.

#include "btoep/base.hpp"

#include <complex>
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include <algorithm>

namespace btoep::lapack {

inline void check_info(int info, const char* routine) {
  if (info != 0)
    throw std::runtime_error(std::string(routine) + " failed, info=" + std::to_string(info));
}

/// All min(rows, cols) singular values, sorted ascending.
inline std::vector<double> singular_values(const Mat& m) {
  require(m.allFinite(), "singular_values: non-finite entries");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  std::vector<double> s(static_cast<size_t>(std::min(rows, cols)));
  if (s.empty()) return s;
  if (is_real(m)) {
    RealMat a = m.real();
    check_info(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows,
                              s.data(), nullptr, 1, nullptr, 1),
               "dgesdd");
  } else {
    Mat a = m;
    check_info(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows,
                              s.data(), nullptr, 1, nullptr, 1),
               "zgesdd");
  }
  std::sort(s.begin(), s.end());
  return s;
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
inline std::vector<double> hermitian_eigenvalues(const Mat& m) {
  require(m.rows() == m.cols(), "hermitian_eigenvalues: square input required");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  std::vector<double> w(static_cast<size_t>(n));
  if (n == 0) return w;
  if (is_real(m)) {
    RealMat a = m.real();
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "dsyevd");
  } else {
    Mat a = m;
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "zheevd");
  }
  return w;  // LAPACK returns ascending order
}

/// Eigenvalues of the pencil A x = lambda B x with A symmetric, B SPD (real data).
inline std::vector<double> sym_def_generalized_eigenvalues(const Mat& a_in, const Mat& b_in) {
  require(a_in.rows() == a_in.cols() && b_in.rows() == b_in.cols() && a_in.rows() == b_in.rows(),
          "generalized eigen: conforming square inputs required");
  require(is_real(a_in) && is_real(b_in), "generalized eigen: real symmetric pencil expected");
  const lapack_int n = static_cast<lapack_int>(a_in.rows());
  RealMat a = a_in.real(), b = b_in.real();
  std::vector<double> w(static_cast<size_t>(n));
  check_info(LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'N', 'L', n, a.data(), n, b.data(), n, w.data()),
             "dsygvd");
  return w;
}

/// Full spectrum of a general square matrix, sorted by (re, im).
inline std::vector<cxd> general_eigenvalues(const Mat& m) {
  require(m.rows() == m.cols(), "general_eigenvalues: square input required");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  std::vector<cxd> w(static_cast<size_t>(n));
  if (n == 0) return w;
  if (is_real(m)) {
    RealMat a = m.real();
    std::vector<double> wr(n), wi(n);
    check_info(LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(),
                             nullptr, 1, nullptr, 1),
               "dgeev");
    for (lapack_int i = 0; i < n; ++i) w[i] = cxd(wr[i], wi[i]);
  } else {
    Mat a = m;
    check_info(LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1,
                             nullptr, 1),
               "zgeev");
  }
  std::sort(w.begin(), w.end(), [](cxd x, cxd y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return w;
}

/// Cached LU factorization for repeated solves with a square matrix.
class LuFactor {
 public:
  explicit LuFactor(const Mat& m) : n_(static_cast<lapack_int>(m.rows())), real_(is_real(m)) {
    require(m.rows() == m.cols(), "LuFactor: square input required");
    ipiv_.resize(static_cast<size_t>(n_));
    if (real_) {
      ra_ = m.real();
      check_info(LAPACKE_dgetrf(LAPACK_COL_MAJOR, n_, n_, ra_.data(), n_, ipiv_.data()), "dgetrf");
    } else {
      ca_ = m;
      check_info(LAPACKE_zgetrf(LAPACK_COL_MAJOR, n_, n_, ca_.data(), n_, ipiv_.data()), "zgetrf");
    }
  }

  Mat solve(const Mat& rhs) const {
    require(rhs.rows() == n_, "LuFactor::solve: dimension mismatch");
    const lapack_int nrhs = static_cast<lapack_int>(rhs.cols());
    if (real_ && is_real(rhs)) {
      RealMat b = rhs.real();
      check_info(LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n_, nrhs, ra_.data(), n_,
                                ipiv_.data(), b.data(), n_),
                 "dgetrs");
      return b.cast<cxd>();
    }
    // complex rhs against a real factorization: reuse the real LU factors
    if (real_ && cz_.size() == 0) cz_ = ra_.cast<cxd>();
    Mat b = rhs;
    const Mat& a = real_ ? cz_ : ca_;
    check_info(LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n_, nrhs, const_cast<cxd*>(a.data()), n_,
                              ipiv_.data(), b.data(), n_),
               "zgetrs");
    return b;
  }

  Vec solve(const Vec& rhs) const { return Vec(solve(Mat(rhs))); }

 private:
  lapack_int n_ = 0;
  bool real_ = true;
  RealMat ra_;
  Mat ca_;
  mutable Mat cz_;
  std::vector<lapack_int> ipiv_;
};

/// Thin SVD factorization kept for pseudoinverse application.
class SvdFactor {
 public:
  explicit SvdFactor(const Mat& m) {
    const lapack_int rows = static_cast<lapack_int>(m.rows());
    const lapack_int cols = static_cast<lapack_int>(m.cols());
    const lapack_int k = std::min(rows, cols);
    s_.resize(static_cast<size_t>(k));
    u_ = Mat(rows, k);
    vh_ = Mat(k, cols);
    if (is_real(m)) {
      RealMat a = m.real(), u(rows, k), vt(k, cols);
      check_info(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, a.data(), rows, s_.data(),
                                u.data(), rows, vt.data(), k),
                 "dgesdd");
      u_ = u.cast<cxd>();
      vh_ = vt.cast<cxd>();
    } else {
      Mat a = m;
      check_info(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, a.data(), rows, s_.data(),
                                u_.data(), rows, vh_.data(), k),
                 "zgesdd");
    }
  }

  const std::vector<double>& values() const { return s_; }  // descending

  /// Moore-Penrose action with relative threshold on the singular values.
  Vec pinv_apply(const Vec& b, double rel_threshold = 1e-12) const {
    Vec w = u_.adjoint() * b;
    const double cutoff = (s_.empty() ? 0.0 : s_[0]) * rel_threshold;
    for (Index i = 0; i < w.size(); ++i)
      w[i] = (s_[static_cast<size_t>(i)] > cutoff) ? w[i] / s_[static_cast<size_t>(i)] : cxd(0);
    return vh_.adjoint() * w;
  }

  Vec pinv_adjoint_apply(const Vec& b, double rel_threshold = 1e-12) const {
    Vec w = vh_ * b;
    const double cutoff = (s_.empty() ? 0.0 : s_[0]) * rel_threshold;
    for (Index i = 0; i < w.size(); ++i)
      w[i] = (s_[static_cast<size_t>(i)] > cutoff) ? w[i] / s_[static_cast<size_t>(i)] : cxd(0);
    return u_ * w;
  }

  /// (M M^H)^{-1} b for full-row-rank M (normal-equation preconditioning).
  Vec normal_inverse_apply(const Vec& b, double rel_threshold = 1e-12) const {
    Vec w = u_.adjoint() * b;
    const double cutoff = (s_.empty() ? 0.0 : s_[0]) * rel_threshold;
    for (Index i = 0; i < w.size(); ++i) {
      const double sv = s_[static_cast<size_t>(i)];
      w[i] = (sv > cutoff) ? w[i] / (sv * sv) : cxd(0);
    }
    return u_ * w;
  }

 private:
  Mat u_, vh_;
  std::vector<double> s_;
};

/// True when the (real symmetric part of the) matrix admits a Cholesky factor.
inline bool is_positive_definite(const Mat& m) {
  if (!is_real(m) || m.rows() != m.cols()) return false;
  RealMat a = m.real();
  const lapack_int n = static_cast<lapack_int>(m.rows());
  return LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n) == 0;
}

}  // namespace btoep::lapack
