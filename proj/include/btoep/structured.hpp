#pragma once

// Structured matrices generated by symbols: (rectangular) block Toeplitz,
// block Hankel, block circulant (Strang / Frobenius-optimal), tau algebra
// matrices (one- and two-level), and Kronecker-sum two-level Toeplitz
// matrices. Every kind has a dense realization and a transform-based apply.

#include "btoep/base.hpp"
#include "btoep/fft.hpp"
#include "btoep/lapack.hpp"
#include "btoep/symbol.hpp"

#include <fstream>

namespace btoep {

// ---------------------------------------------------------------------------
// Block Toeplitz
// ---------------------------------------------------------------------------

/// T_{n,n'}(f): block (i,j) = f_hat_{i-j}, total size (s n) x (t n').
class ToeplitzOperator {
 public:
  ToeplitzOperator(Symbol sym, Index block_rows, Index block_cols)
      : sym_(std::move(sym)), n_(block_rows), n2_(block_cols) {
    require(n_ >= 1 && n2_ >= 1, "toeplitz: block sizes must be >= 1");
  }

  const Symbol& symbol() const { return sym_; }
  Index block_rows() const { return n_; }
  Index block_cols() const { return n2_; }
  Index rows() const { return n_ * sym_.rows(); }
  Index cols() const { return n2_ * sym_.cols(); }

  Mat dense() const {
    const int s = sym_.rows(), t = sym_.cols();
    Mat a = Mat::Zero(rows(), cols());
    const long kmin = -std::min<long>(sym_.support(), n2_ - 1);
    const long kmax = std::min<long>(sym_.support(), n_ - 1);
    for (long k = kmin; k <= kmax; ++k) {
      Mat c = sym_.coefficient(k);
      if (c.cwiseAbs().maxCoeff() == 0.0) continue;
      for (Index i = std::max<Index>(0, k); i < n_; ++i) {
        const Index j = i - k;
        if (j < 0 || j >= n2_) continue;
        a.block(i * s, j * t, s, t) = c;
      }
    }
    return a;
  }

  /// Product via circulant embedding into the smallest power-of-two length
  /// >= n + n' - 1, one scalar convolution per (row, col) entry of the block.
  Vec apply(const Vec& x) const {
    require(x.size() == cols(), "toeplitz apply: dimension mismatch");
    const int s = sym_.rows(), t = sym_.cols();
    const Index nfft = fft::next_pow2(n_ + n2_ - 1);
    Vec y = Vec::Zero(rows());
    // forward transforms of the x strands, one per block column component
    std::vector<std::vector<cxd>> xhat(static_cast<size_t>(t),
                                       std::vector<cxd>(static_cast<size_t>(nfft), cxd(0)));
    for (int tau = 0; tau < t; ++tau) {
      for (Index j = 0; j < n2_; ++j) xhat[tau][static_cast<size_t>(j)] = x[j * t + tau];
      fft::dft_forward(xhat[static_cast<size_t>(tau)]);
    }
    std::vector<cxd> col(static_cast<size_t>(nfft));
    std::vector<cxd> acc(static_cast<size_t>(nfft));
    for (int sig = 0; sig < s; ++sig) {
      std::fill(acc.begin(), acc.end(), cxd(0));
      for (int tau = 0; tau < t; ++tau) {
        std::fill(col.begin(), col.end(), cxd(0));
        const long kmax = std::min<long>(sym_.support(), n_ - 1);
        const long kmin = std::min<long>(sym_.support(), n2_ - 1);
        for (long k = 0; k <= kmax; ++k) col[static_cast<size_t>(k)] = sym_.coefficient(k)(sig, tau);
        for (long k = 1; k <= kmin; ++k)
          col[static_cast<size_t>(nfft - k)] = sym_.coefficient(-k)(sig, tau);
        fft::dft_forward(col);
        for (Index j = 0; j < nfft; ++j) acc[static_cast<size_t>(j)] += col[static_cast<size_t>(j)] * xhat[static_cast<size_t>(tau)][static_cast<size_t>(j)];
      }
      std::vector<cxd> out = acc;
      fft::dft_backward(out);
      for (Index i = 0; i < n_; ++i) y[i * s + sig] = out[static_cast<size_t>(i)] / static_cast<double>(nfft);
    }
    return y;
  }

 private:
  Symbol sym_;
  Index n_, n2_;
};

inline ToeplitzOperator toeplitz(Symbol sym, Index n) { return ToeplitzOperator(std::move(sym), n, n); }
inline ToeplitzOperator toeplitz_rect(Symbol sym, Index n, Index n2) {
  return ToeplitzOperator(std::move(sym), n, n2);
}

/// H_n(f): block (i,j) = f_hat_{i+j-1} (1-based), size (s n) x (t n).
inline Mat hankel(const Symbol& sym, Index n) {
  require(n >= 1, "hankel: n must be >= 1");
  const int s = sym.rows(), t = sym.cols();
  Mat h = Mat::Zero(n * s, n * t);
  const long kmax = std::min<long>(sym.support(), 2 * n - 1);
  for (long k = 1; k <= kmax; ++k) {
    Mat c = sym.coefficient(k);
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    for (Index i = 0; i < n; ++i) {
      const Index j = k - 1 - i;  // i + j = k - 1 in 0-based indices
      if (j < 0 || j >= n) continue;
      h.block(i * s, j * t, s, t) = c;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Block circulant
// ---------------------------------------------------------------------------

/// Block circulant with n blocks of shape s x t; block (i,j) depends on
/// (i-j) mod n. Frequency blocks Lambda_j = sum_m c_m e^{+2 pi i jm/n}
/// equal symbol samples f(2 pi j / n) for the Strang choice.
class CirculantOperator {
 public:
  CirculantOperator(std::vector<Mat> first_block_column)
      : col_(std::move(first_block_column)) {
    require(!col_.empty(), "circulant: empty first column");
    s_ = static_cast<int>(col_[0].rows());
    t_ = static_cast<int>(col_[0].cols());
    n_ = static_cast<Index>(col_.size());
    for (const Mat& c : col_)
      require(c.rows() == s_ && c.cols() == t_, "circulant: block shape mismatch");
    build_frequency_blocks();
  }

  Index block_count() const { return n_; }
  int block_rows() const { return s_; }
  int block_cols() const { return t_; }
  Index rows() const { return n_ * s_; }
  Index cols() const { return n_ * t_; }
  const std::vector<Mat>& first_block_column() const { return col_; }
  const std::vector<Mat>& frequency_blocks() const { return freq_; }

  Mat dense() const {
    Mat a = Mat::Zero(rows(), cols());
    for (Index i = 0; i < n_; ++i)
      for (Index j = 0; j < n_; ++j) a.block(i * s_, j * t_, s_, t_) = col_[static_cast<size_t>((i - j + n_) % n_)];
    return a;
  }

  Vec apply(const Vec& x) const {
    require(x.size() == cols(), "circulant apply: dimension mismatch");
    // y = (1/n) FWD( Lambda o BWD(x) ), strand-wise over block components
    std::vector<std::vector<cxd>> xh(static_cast<size_t>(t_), std::vector<cxd>(static_cast<size_t>(n_)));
    for (int tau = 0; tau < t_; ++tau) {
      for (Index j = 0; j < n_; ++j) xh[static_cast<size_t>(tau)][static_cast<size_t>(j)] = x[j * t_ + tau];
      fft::dft_backward(xh[static_cast<size_t>(tau)]);
    }
    Vec y(rows());
    std::vector<cxd> strand(static_cast<size_t>(n_));
    for (int sig = 0; sig < s_; ++sig) {
      for (Index j = 0; j < n_; ++j) {
        cxd v(0);
        for (int tau = 0; tau < t_; ++tau) v += freq_[static_cast<size_t>(j)](sig, tau) * xh[static_cast<size_t>(tau)][static_cast<size_t>(j)];
        strand[static_cast<size_t>(j)] = v;
      }
      fft::dft_forward(strand);
      for (Index i = 0; i < n_; ++i) y[i * s_ + sig] = strand[static_cast<size_t>(i)] / static_cast<double>(n_);
    }
    return y;
  }

  /// Direct per-frequency solve (square blocks). Throws naming the frequency
  /// index when a frequency block is singular relative to the largest one.
  Vec solve(const Vec& b) const {
    require(s_ == t_, "circulant solve: square blocks required");
    require(b.size() == rows(), "circulant solve: dimension mismatch");
    double sigma_max = 0.0;
    for (const Mat& f : freq_)
      sigma_max = std::max(sigma_max, f.jacobiSvd().singularValues()(0));
    std::vector<std::vector<cxd>> bh(static_cast<size_t>(s_), std::vector<cxd>(static_cast<size_t>(n_)));
    for (int sig = 0; sig < s_; ++sig) {
      for (Index j = 0; j < n_; ++j) bh[static_cast<size_t>(sig)][static_cast<size_t>(j)] = b[j * s_ + sig];
      fft::dft_backward(bh[static_cast<size_t>(sig)]);
    }
    std::vector<std::vector<cxd>> xh(static_cast<size_t>(s_), std::vector<cxd>(static_cast<size_t>(n_)));
    Vec rhs(s_), sol(s_);
    for (Index j = 0; j < n_; ++j) {
      const Mat& f = freq_[static_cast<size_t>(j)];
      Eigen::JacobiSVD<Mat> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
      if (svd.singularValues()(s_ - 1) < 1e-12 * sigma_max)
        throw std::runtime_error("circulant solve: singular frequency block at index " +
                                 std::to_string(j));
      for (int sig = 0; sig < s_; ++sig) rhs[sig] = bh[static_cast<size_t>(sig)][static_cast<size_t>(j)];
      sol = svd.solve(rhs);
      for (int sig = 0; sig < s_; ++sig) xh[static_cast<size_t>(sig)][static_cast<size_t>(j)] = sol[sig];
    }
    Vec x(cols());
    for (int sig = 0; sig < s_; ++sig) {
      std::vector<cxd> strand = xh[static_cast<size_t>(sig)];
      fft::dft_forward(strand);
      for (Index i = 0; i < n_; ++i) x[i * s_ + sig] = strand[static_cast<size_t>(i)] / static_cast<double>(n_);
    }
    return x;
  }

 private:
  void build_frequency_blocks() {
    freq_.assign(static_cast<size_t>(n_), Mat::Zero(s_, t_));
    std::vector<cxd> strand(static_cast<size_t>(n_));
    for (int sig = 0; sig < s_; ++sig)
      for (int tau = 0; tau < t_; ++tau) {
        for (Index m = 0; m < n_; ++m) strand[static_cast<size_t>(m)] = col_[static_cast<size_t>(m)](sig, tau);
        fft::dft_backward(strand);  // Lambda_j = sum_m c_m e^{+2 pi i jm/n}
        for (Index j = 0; j < n_; ++j) freq_[static_cast<size_t>(j)](sig, tau) = strand[static_cast<size_t>(j)];
      }
  }

  std::vector<Mat> col_;
  std::vector<Mat> freq_;
  int s_ = 1, t_ = 1;
  Index n_ = 0;
};

/// Strang circulant of a banded symbol: the central band wrapped around.
/// Frequency blocks equal f(2 pi j / n).
inline CirculantOperator strang_circulant(const Symbol& sym, Index n) {
  require(sym.is_trig_polynomial(), "strang: trigonometric polynomial symbol required");
  long bw = 0;
  for (long k = -sym.support(); k <= sym.support(); ++k)
    if (sym.coefficient(k).cwiseAbs().maxCoeff() != 0.0) bw = std::max(bw, std::labs(k));
  require(2 * bw < n, "band too wide");
  std::vector<Mat> col(static_cast<size_t>(n), Mat::Zero(sym.rows(), sym.cols()));
  col[0] = sym.coefficient(0);
  for (long k = 1; k <= bw; ++k) {
    col[static_cast<size_t>(k)] = sym.coefficient(k);
    col[static_cast<size_t>(n - k)] = sym.coefficient(-k);
  }
  return CirculantOperator(std::move(col));
}

/// Frobenius-optimal (Chan) circulant of a square block Toeplitz operator:
/// c_j = ((n-j) a_j + j a_{j-n})/n with a_k the block diagonals of T.
inline CirculantOperator chan_circulant(const ToeplitzOperator& T) {
  require(T.block_rows() == T.block_cols(), "chan: block-square operator required");
  const Index n = T.block_rows();
  const Symbol& f = T.symbol();
  std::vector<Mat> col(static_cast<size_t>(n));
  for (Index j = 0; j < n; ++j) {
    Mat aj = (j <= f.support()) ? f.coefficient(j) : Mat(Mat::Zero(f.rows(), f.cols()));
    Mat ajn = (n - j <= f.support()) ? f.coefficient(j - n) : Mat(Mat::Zero(f.rows(), f.cols()));
    col[static_cast<size_t>(j)] =
        (static_cast<double>(n - j) * aj + static_cast<double>(j) * ajn) / static_cast<double>(n);
  }
  return CirculantOperator(std::move(col));
}

// ---------------------------------------------------------------------------
// tau algebra (discrete sine transform)
// ---------------------------------------------------------------------------

/// S D S with S the orthonormal DST-I matrix; one-level (grid n) or
/// two-level ((n1, n2) tensor grid, transform S (x) S). Scalar symbols only.
class TauOperator {
 public:
  /// One-level: samples d_j = f(theta_j), theta_j = j pi/(n+1), j = 1..n.
  TauOperator(Index n, std::vector<double> samples) : n1_(n), n2_(1), d_(std::move(samples)) {
    require(static_cast<Index>(d_.size()) == n, "tau: sample count mismatch");
  }
  /// Two-level, samples in column-major (n1 fast) order over the tensor grid.
  TauOperator(Index n1, Index n2, std::vector<double> samples)
      : n1_(n1), n2_(n2), d_(std::move(samples)) {
    require(static_cast<Index>(d_.size()) == n1 * n2, "tau: sample count mismatch");
  }

  Index size() const { return n1_ * n2_; }
  bool two_level() const { return n2_ > 1; }
  const std::vector<double>& samples() const { return d_; }

  Mat dense() const {
    const Index n = size();
    RealMat s1 = sine_matrix(n1_);
    RealMat S(n, n);
    if (!two_level()) {
      S = s1;
    } else {
      RealMat s2 = sine_matrix(n2_);
      for (Index i2 = 0; i2 < n2_; ++i2)
        for (Index j2 = 0; j2 < n2_; ++j2)
          S.block(i2 * n1_, j2 * n1_, n1_, n1_) = s2(i2, j2) * s1;
    }
    RealMat out = S * d_vector().asDiagonal() * S;
    return out.cast<cxd>();
  }

  RealVec d_vector() const {
    return Eigen::Map<const RealVec>(d_.data(), static_cast<Index>(d_.size()));
  }

  Vec apply(const Vec& x) const { return transform_scale_transform(x, false); }

  Vec solve(const Vec& b) const {
    double dmax = 0.0;
    for (double v : d_) dmax = std::max(dmax, std::abs(v));
    for (double v : d_)
      if (std::abs(v) <= 1e-14 * std::max(dmax, 1.0)) throw std::runtime_error("tau singular");
    return transform_scale_transform(b, true);
  }

  static RealMat sine_matrix(Index n) {
    RealMat s(n, n);
    const double c = std::sqrt(2.0 / (n + 1));
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        s(i, j) = c * std::sin((i + 1) * (j + 1) * kPi / (n + 1));
    return s;
  }

 private:
  // complex inputs are handled by transforming real and imaginary parts
  Vec transform_scale_transform(const Vec& x, bool invert) const {
    require(x.size() == size(), "tau apply: dimension mismatch");
    std::vector<double> re(static_cast<size_t>(size())), im(static_cast<size_t>(size()));
    bool has_imag = false;
    for (Index i = 0; i < size(); ++i) {
      re[static_cast<size_t>(i)] = x[i].real();
      im[static_cast<size_t>(i)] = x[i].imag();
      has_imag = has_imag || x[i].imag() != 0.0;
    }
    auto pass = [&](std::vector<double>& v) {
      if (two_level())
        fft::dst1_2d(v, static_cast<int>(n1_), static_cast<int>(n2_));
      else
        fft::dst1(v);
      for (Index i = 0; i < size(); ++i)
        v[static_cast<size_t>(i)] = invert ? v[static_cast<size_t>(i)] / d_[static_cast<size_t>(i)]
                                           : v[static_cast<size_t>(i)] * d_[static_cast<size_t>(i)];
      if (two_level())
        fft::dst1_2d(v, static_cast<int>(n1_), static_cast<int>(n2_));
      else
        fft::dst1(v);
    };
    pass(re);
    if (has_imag) pass(im);
    Vec y(size());
    for (Index i = 0; i < size(); ++i)
      y[i] = cxd(re[static_cast<size_t>(i)], has_imag ? im[static_cast<size_t>(i)] : 0.0);
    return y;
  }

  Index n1_, n2_;
  std::vector<double> d_;
};

/// One-level tau matrix of a scalar symbol, sampled at theta_j = j pi/(n+1)
/// with the closed-form value where the symbol has one.
inline TauOperator tau(const Symbol& sym, Index n) {
  require(sym.rows() == 1 && sym.cols() == 1, "tau: scalar-valued symbol required");
  std::vector<double> d(static_cast<size_t>(n));
  for (Index j = 1; j <= n; ++j) d[static_cast<size_t>(j - 1)] = sym.eval_closed(j * kPi / (n + 1))(0, 0).real();
  return TauOperator(n, std::move(d));
}

/// Two-level tau matrix of a separable-or-sampled bivariate function.
inline TauOperator tau2(const std::function<double(double, double)>& f, Index n1, Index n2) {
  std::vector<double> d(static_cast<size_t>(n1 * n2));
  for (Index j2 = 1; j2 <= n2; ++j2)
    for (Index j1 = 1; j1 <= n1; ++j1)
      d[static_cast<size_t>((j2 - 1) * n1 + (j1 - 1))] = f(j1 * kPi / (n1 + 1), j2 * kPi / (n2 + 1));
  return TauOperator(n1, n2, std::move(d));
}

// ---------------------------------------------------------------------------
// Two-level Toeplitz (Kronecker sum)
// ---------------------------------------------------------------------------

/// scale * ( I_{n2} (x) T_{n1}(q_a) + T_{n2}(q_b) (x) I_{n1} ).
class TwoLevelToeplitz {
 public:
  TwoLevelToeplitz(Symbol q_a, Symbol q_b, Index n1, Index n2, double scale)
      : qa_(std::move(q_a)), qb_(std::move(q_b)), n1_(n1), n2_(n2), scale_(scale) {
    require(qa_.rows() == 1 && qa_.cols() == 1 && qb_.rows() == 1 && qb_.cols() == 1,
            "two_level_toeplitz: scalar symbols required");
    require(n1_ >= 1 && n2_ >= 1, "two_level_toeplitz: sizes must be >= 1");
  }

  Index size() const { return n1_ * n2_; }
  Index level1() const { return n1_; }
  Index level2() const { return n2_; }

  Mat dense() const {
    Mat ta = toeplitz(qa_, n1_).dense();
    Mat tb = toeplitz(qb_, n2_).dense();
    Mat a = Mat::Zero(size(), size());
    for (Index i2 = 0; i2 < n2_; ++i2) a.block(i2 * n1_, i2 * n1_, n1_, n1_) = ta;
    for (Index i2 = 0; i2 < n2_; ++i2)
      for (Index j2 = 0; j2 < n2_; ++j2) {
        const cxd v = tb(i2, j2);
        if (v != cxd(0)) a.block(i2 * n1_, j2 * n1_, n1_, n1_) += v * Mat::Identity(n1_, n1_);
      }
    return scale_ * a;
  }

  /// Reshaped product scale*(T_a X + X T_b^T) with X the n1 x n2 unknown.
  Vec apply(const Vec& x) const {
    require(x.size() == size(), "two_level apply: dimension mismatch");
    ToeplitzOperator ta = toeplitz(qa_, n1_), tb = toeplitz(qb_, n2_);
    Vec y = Vec::Zero(size());
    // columns: T_a acting within each level-2 slice
    for (Index i2 = 0; i2 < n2_; ++i2)
      y.segment(i2 * n1_, n1_) = ta.apply(x.segment(i2 * n1_, n1_));
    // rows: T_b acting across slices, one strand per level-1 index
    Vec strand(n2_), out(n2_);
    for (Index i1 = 0; i1 < n1_; ++i1) {
      for (Index i2 = 0; i2 < n2_; ++i2) strand[i2] = x[i2 * n1_ + i1];
      out = tb.apply(strand);
      for (Index i2 = 0; i2 < n2_; ++i2) y[i2 * n1_ + i1] += out[i2];
    }
    return scale_ * y;
  }

 private:
  Symbol qa_, qb_;
  Index n1_, n2_;
  double scale_;
};

inline TwoLevelToeplitz two_level_toeplitz(Symbol q_a, Symbol q_b, Index n1, Index n2,
                                           double scale) {
  return TwoLevelToeplitz(std::move(q_a), std::move(q_b), n1, n2, scale);
}

// ---------------------------------------------------------------------------
// Norms and export
// ---------------------------------------------------------------------------

/// Schatten p-norm (p >= 1 or infinity) of a dense matrix.
inline double schatten_norm(const Mat& m, double p) {
  require(p >= 1.0, "schatten_norm: p must be >= 1");
  std::vector<double> s = lapack::singular_values(m);
  if (s.empty()) return 0.0;
  if (std::isinf(p)) return s.back();
  double acc = 0.0;
  for (double v : s) acc += std::pow(v, p);
  return std::pow(acc, 1.0 / p);
}

/// Column-major binary export: 16-byte header (rows, cols as 64-bit LE).
inline void write_dense_binary(const Mat& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), "write_dense_binary: cannot open " + path);
  const std::int64_t rows = m.rows(), cols = m.cols();
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  if (is_real(m)) {
    RealMat r = m.real();
    out.write(reinterpret_cast<const char*>(r.data()), sizeof(double) * static_cast<size_t>(r.size()));
  } else {
    out.write(reinterpret_cast<const char*>(m.data()), sizeof(cxd) * static_cast<size_t>(m.size()));
  }
}

inline void write_dense_csv(const Mat& m, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), "write_dense_csv: cannot open " + path);
  out.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      if (m(i, j).imag() == 0.0)
        out << m(i, j).real();
      else
        out << m(i, j).real() << '+' << m(i, j).imag() << 'i';
    }
    out << '\n';
  }
}

}  // namespace btoep
