#pragma once

// Dense spectral computations and the empirical distribution / clustering
// statistics used to verify the asymptotic claims at finite sizes.

#include "btoep/lapack.hpp"
#include "btoep/symbol.hpp"

#include <fstream>

namespace btoep {

enum class SpectrumKind { Singular, HermitianEigen, GeneralEigen };

struct SpectrumReport {
  SpectrumKind kind = SpectrumKind::Singular;
  Index matrix_rows = 0, matrix_cols = 0;
  std::vector<double> values;  // singular values or Hermitian eigenvalues, ascending
  std::vector<cxd> cvalues;    // general eigenvalues, sorted by (re, im)

  size_t count() const {
    return kind == SpectrumKind::GeneralEigen ? cvalues.size() : values.size();
  }
};

inline SpectrumReport singular_values(const Mat& m) {
  SpectrumReport r;
  r.kind = SpectrumKind::Singular;
  r.matrix_rows = m.rows();
  r.matrix_cols = m.cols();
  r.values = lapack::singular_values(m);
  return r;
}

inline SpectrumReport eigenvalues(const Mat& m, bool hermitian) {
  require(m.rows() == m.cols(), "eigenvalues: square input required");
  SpectrumReport r;
  r.matrix_rows = m.rows();
  r.matrix_cols = m.cols();
  if (hermitian) {
    r.kind = SpectrumKind::HermitianEigen;
    r.values = lapack::hermitian_eigenvalues(m);
  } else {
    r.kind = SpectrumKind::GeneralEigen;
    r.cvalues = lapack::general_eigenvalues(m);
  }
  return r;
}

/// Eigenvalues of B^{-1} A for Hermitian A and SPD B (all real).
inline SpectrumReport preconditioned_eigenvalues_spd(const Mat& a, const Mat& b) {
  SpectrumReport r;
  r.kind = SpectrumKind::HermitianEigen;
  r.matrix_rows = a.rows();
  r.matrix_cols = a.cols();
  r.values = lapack::sym_def_generalized_eigenvalues(a, b);
  return r;
}

// ---------------------------------------------------------------------------
// Cluster statistics
// ---------------------------------------------------------------------------

struct ClusterStats {
  double center = 0.0, radius = 0.0;
  long count_below = 0, count_above = 0, count_inside = 0;
  long total = 0;

  long outside() const { return count_below + count_above; }
  double ratio_below() const { return total ? static_cast<double>(count_below) / total : 0.0; }
  double ratio_above() const { return total ? static_cast<double>(count_above) / total : 0.0; }
  double ratio_outside() const { return total ? static_cast<double>(outside()) / total : 0.0; }
};

inline ClusterStats cluster_stats(const std::vector<double>& values, double center, double radius) {
  require(radius > 0.0, "cluster_stats: radius must be positive");
  ClusterStats cs;
  cs.center = center;
  cs.radius = radius;
  cs.total = static_cast<long>(values.size());
  for (double v : values) {
    if (v < center - radius)
      ++cs.count_below;
    else if (v > center + radius)
      ++cs.count_above;
    else
      ++cs.count_inside;
  }
  return cs;
}

/// Complex variant: the modulus of the deviation decides membership; the
/// below/above split uses the real part.
inline ClusterStats cluster_stats(const std::vector<cxd>& values, double center, double radius) {
  require(radius > 0.0, "cluster_stats: radius must be positive");
  ClusterStats cs;
  cs.center = center;
  cs.radius = radius;
  cs.total = static_cast<long>(values.size());
  for (cxd v : values) {
    if (std::abs(v - center) <= radius)
      ++cs.count_inside;
    else if (v.real() < center)
      ++cs.count_below;
    else
      ++cs.count_above;
  }
  return cs;
}

inline ClusterStats cluster_stats(const SpectrumReport& r, double center, double radius) {
  return r.kind == SpectrumKind::GeneralEigen ? cluster_stats(r.cvalues, center, radius)
                                              : cluster_stats(r.values, center, radius);
}

/// Fraction of singular values above a threshold (zero-distribution probe).
inline double fraction_above(const std::vector<double>& values, double threshold) {
  if (values.empty()) return 0.0;
  long c = 0;
  for (double v : values) c += (v > threshold) ? 1 : 0;
  return static_cast<double>(c) / static_cast<double>(values.size());
}

inline long count_above(const std::vector<double>& values, double threshold) {
  long c = 0;
  for (double v : values) c += (v > threshold) ? 1 : 0;
  return c;
}

// ---------------------------------------------------------------------------
// Weyl discrepancy
// ---------------------------------------------------------------------------

inline std::vector<std::function<double(double)>> default_test_functions() {
  return {[](double x) { return std::exp(-x); },
          [](double x) { return 1.0 / (1.0 + x); },
          [](double x) { return std::min(x, 3.0); }};
}

/// max over the test functions of
/// | mean_j F(sigma_j) - (1/(2 pi r)) sum_grid sum_i F(sigma_i(f(theta_g))) dtheta |.
inline double weyl_discrepancy(const std::vector<double>& values, const Symbol& sym,
                               const std::vector<std::function<double(double)>>& test_fns =
                                   default_test_functions(),
                               int grid_size = 2048) {
  require(grid_size >= 256, "weyl_discrepancy: grid too coarse");
  const int r = std::min(sym.rows(), sym.cols());
  std::vector<std::vector<double>> pooled(test_fns.size());
  std::vector<double> symbol_mean(test_fns.size(), 0.0);
  for (int g = 0; g < grid_size; ++g) {
    const double theta = -kPi + 2.0 * kPi * (g + 0.5) / grid_size;
    Mat v = sym.eval(theta);
    Eigen::JacobiSVD<Mat> svd(v);
    const auto& sv = svd.singularValues();
    for (size_t f = 0; f < test_fns.size(); ++f) {
      double acc = 0.0;
      for (Index i = 0; i < sv.size(); ++i) acc += test_fns[f](sv(i));
      symbol_mean[f] += acc;
    }
  }
  for (size_t f = 0; f < test_fns.size(); ++f)
    symbol_mean[f] /= static_cast<double>(grid_size) * r;

  double disc = 0.0;
  for (size_t f = 0; f < test_fns.size(); ++f) {
    double emp = 0.0;
    for (double v : values) emp += test_fns[f](v);
    emp /= values.empty() ? 1.0 : static_cast<double>(values.size());
    disc = std::max(disc, std::abs(emp - symbol_mean[f]));
  }
  return disc;
}

// ---------------------------------------------------------------------------
// Conditioning
// ---------------------------------------------------------------------------

struct ConditionReport {
  double sigma_min = 0.0, sigma_max = 0.0;
  double mu() const {
    if (sigma_min == 0.0) return std::numeric_limits<double>::infinity();
    return sigma_max / sigma_min;
  }
};

inline ConditionReport condition_report(const std::vector<double>& singular) {
  require(!singular.empty(), "condition_report: empty spectrum");
  return ConditionReport{singular.front(), singular.back()};
}

inline ConditionReport condition_report(const Mat& m) {
  return condition_report(lapack::singular_values(m));
}

// ---------------------------------------------------------------------------
// Spectrum export: one value per line, "re,im" for complex
// ---------------------------------------------------------------------------

inline void write_spectrum_csv(const SpectrumReport& r, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    require(out.good(), "write_spectrum_csv: cannot open " + tmp);
    out.precision(17);
    if (r.kind == SpectrumKind::GeneralEigen)
      for (cxd v : r.cvalues) out << v.real() << ',' << v.imag() << '\n';
    else
      for (double v : r.values) out << v << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("write_spectrum_csv: rename failed for " + path);
}

}  // namespace btoep
