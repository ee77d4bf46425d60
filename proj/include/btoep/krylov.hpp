#pragma once

// Iterative solvers with the experiment protocol: CG / PCG for Hermitian
// positive definite systems, restarted GMRES / PGMRES (left preconditioning,
// convergence declared on the true residual), and CGNE / PCGNE for the
// normal equations of rectangular systems.

#include "btoep/base.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>

namespace btoep {

struct LinOp {
  Index rows = 0, cols = 0;
  std::function<Vec(const Vec&)> apply;
  std::function<Vec(const Vec&)> apply_adjoint;  // needed by cgne
};

inline LinOp make_op(const Mat& m) {
  auto a = std::make_shared<Mat>(m);
  LinOp op;
  op.rows = m.rows();
  op.cols = m.cols();
  op.apply = [a](const Vec& x) -> Vec { return (*a) * x; };
  op.apply_adjoint = [a](const Vec& x) -> Vec { return a->adjoint() * x; };
  return op;
}

using SolveFn = std::function<Vec(const Vec&)>;

struct KrylovConfig {
  double tolerance = 1e-8;  // residual-norm threshold
  long max_iterations = 1000;
  long restart = 100;  // GMRES cycle length
  bool relative_to_rhs = false;  // scale the threshold by ||b||

  double threshold(double bnorm) const {
    return relative_to_rhs ? tolerance * bnorm : tolerance;
  }
};

inline KrylovConfig krylov_config_from_json(const nlohmann::json& j) {
  KrylovConfig cfg;
  if (j.contains("tol")) cfg.tolerance = j.at("tol").get<double>();
  if (j.contains("maxit")) cfg.max_iterations = j.at("maxit").get<long>();
  if (j.contains("restart")) cfg.restart = j.at("restart").get<long>();
  if (j.contains("relative")) cfg.relative_to_rhs = j.at("relative").get<bool>();
  require(cfg.tolerance > 0.0, "krylov config: tolerance must be positive");
  require(cfg.restart >= 1, "krylov config: restart must be >= 1");
  return cfg;
}

inline nlohmann::json krylov_config_to_json(const KrylovConfig& cfg) {
  return nlohmann::json{{"tol", cfg.tolerance},
                        {"maxit", cfg.max_iterations},
                        {"restart", cfg.restart},
                        {"relative", cfg.relative_to_rhs}};
}

struct SolveReport {
  long iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  double final_residual = 0.0;
  Vec x;
};

inline void write_report_csv(const SolveReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), "write_report_csv: cannot open " + path);
  out << "iteration,residual\n";
  out.precision(17);
  for (size_t i = 0; i < r.residual_history.size(); ++i)
    out << (i + 1) << ',' << r.residual_history[i] << '\n';
}

// ---------------------------------------------------------------------------
// (P)CG
// ---------------------------------------------------------------------------

inline SolveReport cg(const LinOp& A, const Vec& b, const SolveFn& precond_solve,
                      const KrylovConfig& cfg = {}) {
  require(A.rows == A.cols, "cg: square operator required");
  require(b.size() == A.rows, "cg: rhs size mismatch");
  SolveReport rep;
  rep.x = Vec::Zero(A.cols);
  Vec r = b;
  const double threshold = cfg.threshold(b.norm());
  if (r.norm() < threshold) {
    rep.converged = true;
    rep.final_residual = r.norm();
    return rep;
  }
  Vec z = precond_solve ? precond_solve(r) : r;
  Vec p = z;
  double rz = r.dot(z).real();
  while (rep.iterations < cfg.max_iterations) {
    Vec ap = A.apply(p);
    const double pap = p.dot(ap).real();
    if (pap <= 0.0)
      throw std::runtime_error("cg breakdown: nonpositive curvature, operator is not positive definite");
    const double alpha = rz / pap;
    rep.x += alpha * p;
    r -= alpha * ap;
    ++rep.iterations;
    const double res = r.norm();
    rep.residual_history.push_back(res);
    if (res < threshold) {
      rep.converged = true;
      break;
    }
    z = precond_solve ? precond_solve(r) : r;
    const double rz_new = r.dot(z).real();
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  rep.final_residual = (b - A.apply(rep.x)).norm();
  return rep;
}

// ---------------------------------------------------------------------------
// (P)GMRES, restarted, modified Gram-Schmidt
// ---------------------------------------------------------------------------

inline SolveReport gmres(const LinOp& A, const Vec& b, const SolveFn& precond_solve,
                         const KrylovConfig& cfg = {}) {
  require(A.rows == A.cols, "gmres: square operator required");
  require(b.size() == A.rows, "gmres: rhs size mismatch");
  const Index n = A.rows;
  const long m = cfg.restart;
  SolveReport rep;
  rep.x = Vec::Zero(n);
  const double threshold = cfg.threshold(b.norm());

  Mat V(n, m + 1);
  Mat H = Mat::Zero(m + 1, m);
  Vec g(m + 1);
  std::vector<cxd> cs(static_cast<size_t>(m));
  std::vector<cxd> sn(static_cast<size_t>(m));

  auto form_iterate = [&](long k) -> Vec {
    // solve the leading k x k triangular system and expand in the basis
    Vec y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    return rep.x + V.leftCols(k) * y;
  };

  double true_res = (b - A.apply(rep.x)).norm();
  if (true_res < threshold) {
    rep.converged = true;
    rep.final_residual = true_res;
    return rep;
  }

  bool stop = false;
  while (rep.iterations < cfg.max_iterations && !stop) {
    Vec r = b - A.apply(rep.x);
    if (precond_solve) r = precond_solve(r);
    const double beta = r.norm();
    if (beta == 0.0) break;
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    long k = 0;
    for (; k < m && rep.iterations < cfg.max_iterations; ++k) {
      Vec w = A.apply(V.col(k));
      if (precond_solve) w = precond_solve(w);
      for (long i = 0; i <= k; ++i) {
        H(i, k) = V.col(i).dot(w);
        w -= H(i, k) * V.col(i);
      }
      H(k + 1, k) = w.norm();
      const bool breakdown = std::abs(H(k + 1, k)) < 1e-14 * beta;
      if (!breakdown) V.col(k + 1) = w / H(k + 1, k);
      // apply the accumulated rotations, then eliminate the new subdiagonal
      for (long i = 0; i < k; ++i) {
        const cxd tmp = std::conj(cs[static_cast<size_t>(i)]) * H(i, k) + std::conj(sn[static_cast<size_t>(i)]) * H(i + 1, k);
        H(i + 1, k) = -sn[static_cast<size_t>(i)] * H(i, k) + cs[static_cast<size_t>(i)] * H(i + 1, k);
        H(i, k) = tmp;
      }
      const double denom = std::sqrt(std::norm(H(k, k)) + std::norm(H(k + 1, k)));
      if (denom == 0.0) {
        cs[static_cast<size_t>(k)] = 1.0;
        sn[static_cast<size_t>(k)] = 0.0;
      } else {
        cs[static_cast<size_t>(k)] = H(k, k) / denom;
        sn[static_cast<size_t>(k)] = H(k + 1, k) / denom;
      }
      H(k, k) = std::conj(cs[static_cast<size_t>(k)]) * H(k, k) + std::conj(sn[static_cast<size_t>(k)]) * H(k + 1, k);
      H(k + 1, k) = 0.0;
      const cxd gk = g[k];
      g[k] = std::conj(cs[static_cast<size_t>(k)]) * gk;
      g[k + 1] = -sn[static_cast<size_t>(k)] * gk;

      ++rep.iterations;
      double res;
      if (precond_solve) {
        // left preconditioning: |g| tracks the preconditioned residual, so
        // evaluate the true residual of the current iterate explicitly
        res = (b - A.apply(form_iterate(k + 1))).norm();
      } else {
        res = std::abs(g[k + 1]);
      }
      rep.residual_history.push_back(res);
      if (res < threshold || breakdown) {  // happy breakdown: exact solution in the basis
        stop = true;
        ++k;
        break;
      }
    }
    if (k > 0) rep.x = form_iterate(k);
  }
  rep.final_residual = (b - A.apply(rep.x)).norm();
  rep.converged = rep.final_residual < threshold;
  return rep;
}

// ---------------------------------------------------------------------------
// (P)CGNE: CG on A A^* y = b, x = A^* y (min-norm solution)
// ---------------------------------------------------------------------------

inline SolveReport cgne(const LinOp& A, const Vec& b, const SolveFn& normal_precond_solve,
                        const KrylovConfig& cfg = {}) {
  require(b.size() == A.rows, "cgne: rhs size mismatch");
  require(static_cast<bool>(A.apply_adjoint), "cgne: adjoint application required");
  LinOp normal;
  normal.rows = normal.cols = A.rows;
  normal.apply = [&A](const Vec& y) -> Vec { return A.apply(A.apply_adjoint(y)); };
  SolveReport rep = cg(normal, b, normal_precond_solve, cfg);
  rep.x = A.apply_adjoint(rep.x);
  rep.final_residual = (b - A.apply(rep.x)).norm();
  return rep;
}

// ---------------------------------------------------------------------------
// Iteration-count prediction for clustered spectra
// ---------------------------------------------------------------------------

struct PcgPrediction {
  long k_star = 0;     // iterations to contract the clustered part
  long n_eps = 0;      // q + k_star
  double estimate = 0; // outlier-count form with the calibration constant
};

/// k*(a, b, eps) = ceil(log(2/eps') / log(1/sigma)), sigma = (sqrt(b)-sqrt(a))/(sqrt(b)+sqrt(a));
/// eps' = eps * mu for the outlier cases 2 and 3. The companion estimate is
/// q + 6.072 log(2/mu) + C_hat.
inline PcgPrediction predict_pcg_iterations(double a, double b, double eps, long q, double mu,
                                            int outlier_case, double c_hat = 0.0) {
  require(a > 0.0, "predict_pcg_iterations: a must be positive");
  require(b >= a, "predict_pcg_iterations: need a <= b");
  require(eps > 0.0, "predict_pcg_iterations: eps must be positive");
  require(outlier_case >= 1 && outlier_case <= 3, "predict_pcg_iterations: case must be 1, 2 or 3");
  PcgPrediction p;
  const double eps_eff = (outlier_case == 1) ? eps : eps * mu;
  if (a == b) {
    p.k_star = 1;  // single cluster point, one step
  } else {
    const double sigma = (std::sqrt(b) - std::sqrt(a)) / (std::sqrt(b) + std::sqrt(a));
    p.k_star = std::max<long>(1, static_cast<long>(std::ceil(std::log(2.0 / eps_eff) / std::log(1.0 / sigma))));
  }
  p.n_eps = q + p.k_star;
  p.estimate = static_cast<double>(q) + 6.072 * std::log(2.0 / mu) + c_hat;
  return p;
}

}  // namespace btoep
