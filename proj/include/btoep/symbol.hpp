#pragma once

// Matrix-valued 2pi-periodic generating functions represented by their
// Fourier coefficients, plus the concrete symbol catalog used by the
// experiment presets (banded polynomial families and fractional-diffusion
// series).

#include "btoep/base.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <utility>

namespace btoep {

/// Grunwald-Letnikov weights g_k = (-1)^k binomial(alpha, k), k = 0..kmax,
/// via the stable recurrence g_k = g_{k-1} (k-1-alpha)/k.
inline std::vector<double> grunwald_g(double alpha, long kmax) {
  require(alpha > 0.0 && alpha <= 2.0, "grunwald_g: exponent outside (0,2]");
  require(kmax >= 0, "grunwald_g: kmax must be nonnegative");
  std::vector<double> g(static_cast<size_t>(kmax) + 1);
  g[0] = 1.0;
  for (long k = 1; k <= kmax; ++k) g[k] = g[k - 1] * (static_cast<double>(k) - 1.0 - alpha) / k;
  return g;
}

/// Shifted weights for the second-order fractional scheme:
/// w_0 = (gamma/2) g_0, w_k = (gamma/2) g_k + ((2-gamma)/2) g_{k-1}.
inline std::vector<double> fractional_w(double gamma, long kmax) {
  std::vector<double> g = grunwald_g(gamma, kmax);
  std::vector<double> w(g.size());
  w[0] = 0.5 * gamma * g[0];
  for (long k = 1; k <= kmax; ++k) w[k] = 0.5 * gamma * g[k] + 0.5 * (2.0 - gamma) * g[k - 1];
  return w;
}

enum class SymbolKind { TrigPolynomial, FractionalAlpha, FractionalQ, Scaled, Sum, Composed, Assembled };

namespace detail {

/// Band coefficients c_k (f_hat_{+-k} = c_k) of the symmetric fractional
/// expansions: c_0 = -2 a_1, c_1 = -(a_0 + a_2), c_k = -a_{k+1} for k >= 2,
/// where a = g (first-order scheme) or a = w (second-order scheme).
inline std::vector<double> fractional_band(const std::vector<double>& a, long L) {
  std::vector<double> c(static_cast<size_t>(L) + 1);
  c[0] = -2.0 * a[1];
  if (L >= 1) c[1] = -(a[0] + a[2]);
  for (long k = 2; k <= L; ++k) c[k] = -a[k + 1];
  return c;
}

}  // namespace detail

/// Immutable matrix-valued generating function. All state is fixed at
/// construction; instances can be shared across threads.
class Symbol {
 public:
  Symbol() = default;

  int rows() const { return s_; }
  int cols() const { return t_; }
  SymbolKind kind() const { return kind_; }
  /// Coefficients vanish for |k| > support().
  long support() const { return support_; }
  /// True for genuine trigonometric polynomials (exact finite support).
  bool is_trig_polynomial() const { return exact_finite_support_; }
  double fractional_exponent() const { return exponent_; }
  long truncation() const { return trunc_; }

  /// f_hat_k, exact for polynomial kinds, series value within the truncation
  /// window for fractional kinds (zero beyond it).
  Mat coefficient(long k) const {
    switch (kind_) {
      case SymbolKind::TrigPolynomial:
      case SymbolKind::Composed: {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Mat(Mat::Zero(s_, t_)) : it->second;
      }
      case SymbolKind::FractionalAlpha:
      case SymbolKind::FractionalQ: {
        const long a = std::labs(k);
        Mat m = Mat::Zero(1, 1);
        if (a <= trunc_) m(0, 0) = (*band_)[static_cast<size_t>(a)];
        return m;
      }
      case SymbolKind::Scaled:
        return scale_ * parts_[0].coefficient(k);
      case SymbolKind::Sum: {
        Mat m = Mat::Zero(s_, t_);
        for (const Symbol& p : parts_) m += p.coefficient(k);
        return m;
      }
      case SymbolKind::Assembled:
        return coeff_fn_(k);
    }
    return Mat::Zero(s_, t_);
  }

  /// Value of sum_k f_hat_k e^{ik theta} (truncated series for the
  /// fractional kinds, the defining pointwise expression for Composed).
  Mat eval(double theta) const {
    switch (kind_) {
      case SymbolKind::TrigPolynomial: {
        Mat m = Mat::Zero(s_, t_);
        for (const auto& [k, c] : coeffs_)
          m += c * std::exp(cxd(0.0, static_cast<double>(k) * theta));
        return m;
      }
      case SymbolKind::FractionalAlpha:
      case SymbolKind::FractionalQ: {
        double v = (*band_)[0];
        for (long k = 1; k <= trunc_; ++k)
          v += 2.0 * (*band_)[static_cast<size_t>(k)] * std::cos(k * theta);
        Mat m(1, 1);
        m(0, 0) = v;
        return m;
      }
      case SymbolKind::Scaled:
        return scale_ * parts_[0].eval(theta);
      case SymbolKind::Sum: {
        Mat m = Mat::Zero(s_, t_);
        for (const Symbol& p : parts_) m += p.eval(theta);
        return m;
      }
      case SymbolKind::Composed:
      case SymbolKind::Assembled:
        return eval_fn_(theta);
    }
    return Mat::Zero(s_, t_);
  }

  /// Closed-form value where one exists (fractional kinds), otherwise eval().
  /// Used by tau sampling and norm computations to avoid truncation error.
  Mat eval_closed(double theta) const {
    switch (kind_) {
      case SymbolKind::FractionalAlpha: {
        const cxd eit = std::exp(cxd(0.0, theta));
        const cxd z = -std::conj(eit) * std::pow(cxd(1.0, 0.0) - eit, exponent_);
        Mat m(1, 1);
        m(0, 0) = 2.0 * z.real();
        return m;
      }
      case SymbolKind::FractionalQ: {
        Mat m(1, 1);
        m(0, 0) = 2.0 * w_gamma(exponent_, theta).real();
        return m;
      }
      case SymbolKind::Scaled:
        return scale_ * parts_[0].eval_closed(theta);
      case SymbolKind::Sum: {
        Mat m = Mat::Zero(s_, t_);
        for (const Symbol& p : parts_) m += p.eval_closed(theta);
        return m;
      }
      default:
        return eval(theta);
    }
  }

  /// w_gamma(theta) = -((2 - gamma(1 - e^{-i theta}))/2) (1 - e^{i theta})^gamma.
  static cxd w_gamma(double gamma, double theta) {
    const cxd eit = std::exp(cxd(0.0, theta));
    return -0.5 * (2.0 - gamma * (1.0 - std::conj(eit))) * std::pow(cxd(1.0, 0.0) - eit, gamma);
  }

  /// True when f_hat_{-k} = f_hat_k^* over the whole support.
  bool is_hermitian_by_coefficients(double tol = 1e-13) const {
    if (s_ != t_) return false;
    for (long k = 0; k <= support_; ++k) {
      Mat a = coefficient(k), b = coefficient(-k);
      if ((b - a.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
  }

  // ---- factories ----

  static Symbol trig_poly(int s, int t, std::map<long, Mat> coeffs) {
    require(s >= 1 && t >= 1, "Symbol: shape must be positive");
    Symbol sym;
    sym.s_ = s;
    sym.t_ = t;
    sym.kind_ = SymbolKind::TrigPolynomial;
    long sup = 0;
    for (const auto& [k, c] : coeffs) {
      require(c.rows() == s && c.cols() == t, "Symbol: coefficient shape mismatch");
      sup = std::max(sup, std::labs(k));
    }
    sym.coeffs_ = std::move(coeffs);
    sym.support_ = sup;
    sym.exact_finite_support_ = true;
    return sym;
  }

  static Symbol scalar_trig(std::map<long, cxd> coeffs) {
    std::map<long, Mat> m;
    for (const auto& [k, v] : coeffs) {
      Mat c(1, 1);
      c(0, 0) = v;
      m[k] = c;
    }
    return trig_poly(1, 1, std::move(m));
  }

  static Symbol constant(const Mat& value) {
    return trig_poly(static_cast<int>(value.rows()), static_cast<int>(value.cols()), {{0, value}});
  }

  /// Symbol of the first-order fractional diffusion scheme,
  /// f(theta) = -e^{-i theta}(1-e^{i theta})^alpha - e^{i theta}(1-e^{-i theta})^alpha,
  /// with the series truncated at |k| <= L.
  static Symbol fractional_alpha(double alpha, long L) {
    require(alpha > 1.0 && alpha < 2.0, "fractional_alpha: exponent outside (1,2)");
    require(L >= 1, "fractional_alpha: truncation must be >= 1");
    Symbol sym;
    sym.s_ = sym.t_ = 1;
    sym.kind_ = SymbolKind::FractionalAlpha;
    sym.exponent_ = alpha;
    sym.trunc_ = L;
    sym.support_ = L;
    sym.band_ = std::make_shared<std::vector<double>>(
        detail::fractional_band(grunwald_g(alpha, L + 1), L));
    return sym;
  }

  /// q_gamma(theta) = w_gamma(theta) + w_gamma(-theta) of the second-order
  /// scheme, truncated at |k| <= L.
  static Symbol fractional_q(double gamma, long L) {
    require(gamma > 1.0 && gamma < 2.0, "fractional_q: exponent outside (1,2)");
    require(L >= 1, "fractional_q: truncation must be >= 1");
    Symbol sym;
    sym.s_ = sym.t_ = 1;
    sym.kind_ = SymbolKind::FractionalQ;
    sym.exponent_ = gamma;
    sym.trunc_ = L;
    sym.support_ = L;
    sym.band_ = std::make_shared<std::vector<double>>(
        detail::fractional_band(fractional_w(gamma, L + 1), L));
    return sym;
  }

  /// Same symbol with a different truncation length (fractional kinds only;
  /// identity for exact-polynomial kinds).
  Symbol with_truncation(long L) const {
    switch (kind_) {
      case SymbolKind::FractionalAlpha:
        return fractional_alpha(exponent_, L);
      case SymbolKind::FractionalQ:
        return fractional_q(exponent_, L);
      case SymbolKind::Scaled: {
        Symbol sym = scaled(parts_[0].with_truncation(L), scale_);
        return sym;
      }
      case SymbolKind::Sum: {
        std::vector<Symbol> p;
        for (const Symbol& q : parts_) p.push_back(q.with_truncation(L));
        return sum(std::move(p));
      }
      default:
        return *this;
    }
  }

  static Symbol scaled(Symbol base, cxd factor) {
    Symbol sym;
    sym.s_ = base.s_;
    sym.t_ = base.t_;
    sym.kind_ = SymbolKind::Scaled;
    sym.scale_ = factor;
    sym.support_ = base.support_;
    sym.exact_finite_support_ = base.exact_finite_support_;
    sym.parts_.push_back(std::move(base));
    return sym;
  }

  static Symbol sum(std::vector<Symbol> parts) {
    require(!parts.empty(), "Symbol::sum: empty part list");
    Symbol sym;
    sym.s_ = parts[0].s_;
    sym.t_ = parts[0].t_;
    sym.kind_ = SymbolKind::Sum;
    sym.exact_finite_support_ = true;
    for (const Symbol& p : parts) {
      require(p.s_ == sym.s_ && p.t_ == sym.t_, "Symbol::sum: shape mismatch");
      sym.support_ = std::max(sym.support_, p.support_);
      sym.exact_finite_support_ = sym.exact_finite_support_ && p.exact_finite_support_;
    }
    sym.parts_ = std::move(parts);
    return sym;
  }

  /// Pointwise expression over other symbols. Coefficients are recovered by
  /// trapezoidal quadrature at construction (exact for trig polynomials when
  /// quad_points exceeds degree_bound + declared support); construction fails
  /// if the recovered expansion does not reproduce eval.
  static Symbol composed(int s, int t, std::function<Mat(double)> eval_fn, long degree_bound,
                         int quad_points = 4096) {
    require(quad_points >= 4 * std::max<long>(degree_bound, 1),
            "Symbol::composed: quadrature resolution below 4x support");
    Symbol sym;
    sym.s_ = s;
    sym.t_ = t;
    sym.kind_ = SymbolKind::Composed;
    sym.support_ = degree_bound;
    sym.exact_finite_support_ = true;
    sym.eval_fn_ = std::move(eval_fn);

    std::vector<Mat> samples(static_cast<size_t>(quad_points));
    for (int g = 0; g < quad_points; ++g)
      samples[g] = sym.eval_fn_(-kPi + 2.0 * kPi * g / quad_points);
    for (long k = -degree_bound; k <= degree_bound; ++k) {
      Mat c = Mat::Zero(s, t);
      for (int g = 0; g < quad_points; ++g) {
        const double theta = -kPi + 2.0 * kPi * g / quad_points;
        c += samples[static_cast<size_t>(g)] * std::exp(cxd(0.0, -k * theta));
      }
      c /= static_cast<double>(quad_points);
      sym.coeffs_[k] = c;
    }
    // verify the recovered polynomial reproduces the expression
    double scale = 0.0, err = 0.0;
    for (int g = 0; g < 17; ++g) {
      const double theta = -kPi + 2.0 * kPi * g / 17.0;
      Mat direct = sym.eval_fn_(theta);
      Mat recon = Mat::Zero(s, t);
      for (const auto& [k, c] : sym.coeffs_) recon += c * std::exp(cxd(0.0, k * theta));
      scale = std::max(scale, direct.cwiseAbs().maxCoeff());
      err = std::max(err, (direct - recon).cwiseAbs().maxCoeff());
    }
    require(err <= 1e-10 * std::max(scale, 1.0),
            "Symbol::composed: coefficients not recoverable to tolerance");
    return sym;
  }

  static Symbol assembled(int s, int t, std::function<Mat(long)> coeff_fn,
                          std::function<Mat(double)> eval_fn, long support,
                          bool exact_finite_support) {
    Symbol sym;
    sym.s_ = s;
    sym.t_ = t;
    sym.kind_ = SymbolKind::Assembled;
    sym.coeff_fn_ = std::move(coeff_fn);
    sym.eval_fn_ = std::move(eval_fn);
    sym.support_ = support;
    sym.exact_finite_support_ = exact_finite_support;
    return sym;
  }

 private:
  int s_ = 1, t_ = 1;
  SymbolKind kind_ = SymbolKind::TrigPolynomial;
  long support_ = 0;
  bool exact_finite_support_ = false;
  std::map<long, Mat> coeffs_;
  double exponent_ = 0.0;
  long trunc_ = 0;
  std::shared_ptr<const std::vector<double>> band_;
  cxd scale_{1.0, 0.0};
  std::vector<Symbol> parts_;
  std::function<Mat(double)> eval_fn_;
  std::function<Mat(long)> coeff_fn_;
};

/// fourier_coefficient/eval free-function spellings used throughout the tests.
inline Mat fourier_coefficient(const Symbol& sym, long k) { return sym.coefficient(k); }
inline Mat eval(const Symbol& sym, double theta) { return sym.eval(theta); }

// ---------------------------------------------------------------------------
// Symbol catalog
// ---------------------------------------------------------------------------

namespace detail {

inline Mat m22(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << cxd(a), cxd(b), cxd(c), cxd(d);
  return m;
}

inline Mat m12(double a, double b) {
  Mat m(1, 2);
  m << cxd(a), cxd(b);
  return m;
}

inline Symbol fem_q2() {
  return Symbol::trig_poly(2, 2,
                           {{0, m22(16, -8, -8, 14) / 3.0},
                            {1, m22(0, -8, 0, 1) / 3.0},
                            {-1, m22(0, 0, -8, 1) / 3.0}});
}

inline Symbol fd_block2() {
  return Symbol::trig_poly(2, 2,
                           {{0, m22(2, -1, -1, 2)},
                            {-1, m22(0, 0, -1, 0)},
                            {1, m22(0, -1, 0, 0)}});
}

inline Symbol bspline_p2k0() {
  return Symbol::trig_poly(2, 2,
                           {{0, m22(4, -2, -2, 8) / 3.0},
                            {1, m22(0, -2, 0, -2) / 3.0},
                            {-1, m22(0, 0, -2, -2) / 3.0}});
}

// The two first-neighbour coefficients are transposes of each other; the
// printed source disagrees in one entry and the transpose-consistent pair is
// the one whose value at zero has the usual rank-one stiffness kernel.
inline Symbol bspline_p3k1() {
  return Symbol::trig_poly(2, 2,
                           {{0, m22(48, 0, 0, 48) / 40.0},
                            {1, m22(-15, -15, -3, -15) / 40.0},
                            {-1, m22(-15, -3, -15, -15) / 40.0}});
}

inline Symbol mg_pq2() {
  return Symbol::trig_poly(2, 2,
                           {{0, m22(0.75, 0.375, 0, 1)},
                            {1, m22(0, 0.375, 0, 0)},
                            {-1, m22(0.75, -0.125, 1, 0)},
                            {-2, m22(0, -0.125, 0, 0)}});
}

inline Symbol group3_f22() {
  const Symbol p = mg_pq2();
  auto fn = [p](double theta) -> Mat {
    Mat a = p.eval(theta);
    Mat b = p.eval(theta + kPi);
    return a.adjoint() * a + b.adjoint() * b;
  };
  return Symbol::composed(2, 2, fn, 2 * p.support());
}

}  // namespace detail

/// Catalog of every generating function appearing in the experiment presets,
/// addressable by dotted name. Fractional entries use truncation length L.
inline Symbol catalog(const std::string& name, long L = 2048) {
  using S = Symbol;
  // Group 1 (scalar)
  if (name == "group1.f11") return S::scalar_trig({{0, 2.0}, {1, -1.0}, {-1, -1.0}});
  if (name == "group1.f12" || name == "group1.f21")
    return S::scalar_trig({{0, 1.0}, {1, -1.0}, {-1, -1.0}});
  if (name == "group1.f22")
    return S::scalar_trig({{0, 2.0}, {1, -1.0}, {-1, -1.0}, {2, -3.0}, {-2, -3.0}});
  // Group 2 (1x2 matrix-valued)
  using detail::m12;
  if (name == "group2.f11")
    return S::trig_poly(1, 2, {{0, m12(2, 4)}, {1, m12(-1, 0)}, {-1, m12(-1, 0)},
                               {2, m12(0, 3)}, {-2, m12(0, 3)}});
  if (name == "group2.f22")
    return S::trig_poly(1, 2, {{0, m12(3, 4)}, {1, m12(1, 3)}, {-1, m12(1, 3)},
                               {2, m12(0, -1)}, {-2, m12(0, -1)}});
  if (name == "group2.f12" || name == "group2.f21")
    return S::trig_poly(1, 2, {{0, m12(1, 1)}, {1, m12(1, 0)}, {-1, m12(0, -1)}});
  // Group 3 (2x2 matrix-valued)
  if (name == "group3.f11" || name == "fem.q2") return detail::fem_q2();
  if (name == "group3.f12" || name == "group3.f21" || name == "bspline.p2k0")
    return detail::bspline_p2k0();
  if (name == "group3.f13" || name == "group3.f31" || name == "bspline.p3k1")
    return detail::bspline_p3k1();
  if (name == "group3.f22") return detail::group3_f22();
  if (name == "group3.f23" || name == "group3.f32" || name == "mg.pq2") return detail::mg_pq2();
  if (name == "group3.f33" || name == "fd.block2") return detail::fd_block2();
  // Example 1 (alpha = 1.5 fractional diagonal)
  if (name == "ex1.f11") return S::fractional_alpha(1.5, L);
  if (name == "ex1.f12") return S::scalar_trig({{0, -1.0}, {-1, 1.0}});
  if (name == "ex1.f21") return S::scalar_trig({{0, -1.0}, {1, 1.0}});
  if (name == "ex1.f22" || name == "ex2.f22")
    return S::scalar_trig({{0, 4.0}, {1, -1.0}, {-1, -1.0}});
  // Example 2 (alpha = 1.7 fractional coupling)
  if (name == "ex2.f11") return S::scalar_trig({{0, 2.0}, {1, -1.0}, {-1, -1.0}});
  if (name == "ex2.f12" || name == "ex2.f21") return S::fractional_alpha(1.7, L);
  // Example 3 (two-level fractional, tau preconditioning)
  if (name == "ex3.q_alpha") return S::fractional_q(1.5, L);
  if (name == "ex3.q_beta") return S::fractional_q(1.8, L);
  if (name == "ex3.laplace1d") return S::scalar_trig({{0, 2.0}, {1, -1.0}, {-1, -1.0}});
  throw std::invalid_argument("catalog: unknown symbol name '" + name + "'");
}

inline std::vector<std::string> catalog_names() {
  return {"group1.f11", "group1.f12", "group1.f21", "group1.f22",
          "group2.f11", "group2.f12", "group2.f21", "group2.f22",
          "group3.f11", "group3.f12", "group3.f13", "group3.f21", "group3.f22",
          "group3.f23", "group3.f31", "group3.f32", "group3.f33",
          "fem.q2",     "fd.block2",  "bspline.p2k0", "bspline.p3k1", "mg.pq2",
          "ex1.f11",    "ex1.f12",    "ex1.f21",    "ex1.f22",
          "ex2.f11",    "ex2.f12",    "ex2.f21",    "ex2.f22",
          "ex3.q_alpha", "ex3.q_beta", "ex3.laplace1d"};
}

// ---------------------------------------------------------------------------
// JSON form: {"s":..,"t":..,"kind":"trigpoly","coeffs":[{"k":..,"re":[[..]],"im":[[..]]}]}
// and {"kind":"fractional_alpha","alpha":..,"L":..} / {"kind":"fractional_q","gamma":..,"L":..}
// ---------------------------------------------------------------------------

inline nlohmann::json symbol_to_json(const Symbol& sym) {
  nlohmann::json j;
  if (sym.kind() == SymbolKind::FractionalAlpha) {
    j["kind"] = "fractional_alpha";
    j["alpha"] = sym.fractional_exponent();
    j["L"] = sym.truncation();
    return j;
  }
  if (sym.kind() == SymbolKind::FractionalQ) {
    j["kind"] = "fractional_q";
    j["gamma"] = sym.fractional_exponent();
    j["L"] = sym.truncation();
    return j;
  }
  // every other kind has finite support and serializes as its expansion
  j["kind"] = "trigpoly";
  j["s"] = sym.rows();
  j["t"] = sym.cols();
  nlohmann::json coeffs = nlohmann::json::array();
  for (long k = -sym.support(); k <= sym.support(); ++k) {
    Mat c = sym.coefficient(k);
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    nlohmann::json e;
    e["k"] = k;
    std::vector<std::vector<double>> re(c.rows()), im(c.rows());
    for (Index i = 0; i < c.rows(); ++i)
      for (Index jj = 0; jj < c.cols(); ++jj) {
        re[i].push_back(c(i, jj).real());
        im[i].push_back(c(i, jj).imag());
      }
    e["re"] = re;
    e["im"] = im;
    coeffs.push_back(e);
  }
  j["coeffs"] = coeffs;
  return j;
}

inline Symbol symbol_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fractional_alpha")
    return Symbol::fractional_alpha(j.at("alpha").get<double>(), j.at("L").get<long>());
  if (kind == "fractional_q")
    return Symbol::fractional_q(j.at("gamma").get<double>(), j.at("L").get<long>());
  require(kind == "trigpoly", "symbol_from_json: unknown kind '" + kind + "'");
  const int s = j.at("s").get<int>(), t = j.at("t").get<int>();
  std::map<long, Mat> coeffs;
  for (const auto& e : j.at("coeffs")) {
    const long k = e.at("k").get<long>();
    const auto re = e.at("re").get<std::vector<std::vector<double>>>();
    Mat c = Mat::Zero(s, t);
    for (int i = 0; i < s; ++i)
      for (int jj = 0; jj < t; ++jj) c(i, jj) = cxd(re.at(i).at(jj), 0.0);
    if (e.contains("im")) {
      const auto im = e.at("im").get<std::vector<std::vector<double>>>();
      for (int i = 0; i < s; ++i)
        for (int jj = 0; jj < t; ++jj) c(i, jj) += cxd(0.0, im.at(i).at(jj));
    }
    coeffs[k] = c;
  }
  return Symbol::trig_poly(s, t, std::move(coeffs));
}

}  // namespace btoep
