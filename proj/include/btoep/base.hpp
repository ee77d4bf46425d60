#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace btoep {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;
using Index = Eigen::Index;

constexpr double kPi = 3.141592653589793238462643383279502884;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Largest |imag| entry; zero for matrices assembled from real coefficients.
inline double max_imag(const Mat& m) {
  return m.imag().cwiseAbs().maxCoeff();
}

inline bool is_real(const Mat& m) { return m.size() == 0 || max_imag(m) == 0.0; }

inline RealMat real_part(const Mat& m) { return m.real(); }

inline long long lcm_ll(long long a, long long b) {
  return a / std::gcd(a, b) * b;
}

/// 2pi-periodic reduction to [-pi, pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t < 0) t += 2.0 * kPi;
  return t - kPi;
}

}  // namespace btoep
