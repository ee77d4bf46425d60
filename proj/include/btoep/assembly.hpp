#pragma once

// Assembly of the block matrix A_n from a nu x nu grid of symbols and a block
// layout, the auxiliary matrices A_tilde and A_hat, the interleaving
// permutation, and the distribution symbol F.

#include "btoep/structured.hpp"

#include <optional>

namespace btoep {

/// Rational limit ratio c_i = num/den for a block partition.
struct Ratio {
  long long num = 0;
  long long den = 1;
};

/// The (nu, s, t) layout with per-block sizes and optional rational ratio data.
class BlockLayout {
 public:
  BlockLayout(int s, int t, std::vector<Index> sizes) : s_(s), t_(t), sizes_(std::move(sizes)) {
    require(static_cast<int>(sizes_.size()) >= 2, "layout: nu must be >= 2");
    require(s_ >= 1 && t_ >= 1, "layout: s, t must be >= 1");
    for (Index ni : sizes_) require(ni >= 1, "layout: block sizes must be >= 1");
  }

  int nu() const { return static_cast<int>(sizes_.size()); }
  int s() const { return s_; }
  int t() const { return t_; }
  const std::vector<Index>& sizes() const { return sizes_; }
  Index size(int i) const { return sizes_[static_cast<size_t>(i)]; }
  Index total() const {
    Index n = 0;
    for (Index ni : sizes_) n += ni;
    return n;
  }
  Index rows() const { return s_ * total(); }
  Index cols() const { return t_ * total(); }
  Index offset(int i) const {
    Index o = 0;
    for (int j = 0; j < i; ++j) o += sizes_[static_cast<size_t>(j)];
    return o;
  }

  /// Declare the limit ratios c_i = m_i/m; m = lcm of denominators.
  void set_ratios(const std::vector<Ratio>& ratios) {
    require(static_cast<int>(ratios.size()) == nu(), "layout: one ratio per block required");
    long long m = 1;
    double total = 0.0;
    for (const Ratio& r : ratios) {
      require(r.num > 0 && r.den > 0 && r.num < r.den, "layout: ratios must lie in (0,1)");
      m = lcm_ll(m, r.den);
      total += static_cast<double>(r.num) / static_cast<double>(r.den);
    }
    require(std::abs(total - 1.0) < 1e-12, "layout: ratios must sum to 1");
    m_ = m;
    copies_.clear();
    for (const Ratio& r : ratios) copies_.push_back(r.num * (m / r.den));
    has_ratios_ = true;
  }

  bool has_ratios() const { return has_ratios_; }
  long long m() const {
    require(has_ratios_, "layout: rational ratio data not declared");
    return m_;
  }
  const std::vector<long long>& copies() const {
    require(has_ratios_, "layout: rational ratio data not declared");
    return copies_;
  }
  long long copies_of(int i) const { return copies()[static_cast<size_t>(i)]; }

  /// Copy size n_m: nearest multiple partition, n_m = round(n/m).
  Index copy_size() const {
    const double nm = static_cast<double>(total()) / static_cast<double>(m());
    return std::max<Index>(1, static_cast<Index>(std::llround(nm)));
  }

  /// Cell sizes of partition i: (m_i - 1) copies of n_m and the remainder,
  /// which absorbs the o(n_m) size defect.
  std::vector<Index> partition_cells(int i, Index n_m) const {
    const long long mi = copies_of(i);
    const Index rem = size(i) - (mi - 1) * n_m;
    require(rem >= 1, "layout: remainder cell would be empty");
    std::vector<Index> cells(static_cast<size_t>(mi), n_m);
    cells.back() = rem;
    return cells;
  }

 private:
  int s_, t_;
  std::vector<Index> sizes_;
  bool has_ratios_ = false;
  long long m_ = 1;
  std::vector<long long> copies_;
};

/// Layout plus the nu x nu grid of generating functions.
struct BlockMatrixSpec {
  BlockLayout layout;
  std::vector<Symbol> grid;  // row-major nu x nu

  const Symbol& at(int i, int j) const {
    return grid[static_cast<size_t>(i * layout.nu() + j)];
  }

  void validate() const {
    require(static_cast<int>(grid.size()) == layout.nu() * layout.nu(),
            "spec: grid must have nu x nu symbols");
    for (const Symbol& f : grid)
      require(f.rows() == layout.s() && f.cols() == layout.t(), "spec: grid symbol shape mismatch");
  }
};

/// A_n: diagonal blocks T_{n_i}(f_ii), off-diagonal blocks T_{n_i,n_j}(f_ij).
inline Mat assemble_A(const BlockMatrixSpec& spec) {
  spec.validate();
  const BlockLayout& L = spec.layout;
  Mat a = Mat::Zero(L.rows(), L.cols());
  for (int i = 0; i < L.nu(); ++i)
    for (int j = 0; j < L.nu(); ++j)
      a.block(L.s() * L.offset(i), L.t() * L.offset(j), L.s() * L.size(i), L.t() * L.size(j)) =
          toeplitz_rect(spec.at(i, j), L.size(i), L.size(j)).dense();
  return a;
}

/// Operator form of A_n (fast block matvec, no dense realization).
class BlockOperator {
 public:
  explicit BlockOperator(BlockMatrixSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const BlockLayout& L = spec_.layout;
    for (int i = 0; i < L.nu(); ++i)
      for (int j = 0; j < L.nu(); ++j)
        cells_.push_back(toeplitz_rect(spec_.at(i, j), L.size(i), L.size(j)));
  }

  Index rows() const { return spec_.layout.rows(); }
  Index cols() const { return spec_.layout.cols(); }

  Vec apply(const Vec& x) const {
    const BlockLayout& L = spec_.layout;
    require(x.size() == cols(), "block apply: dimension mismatch");
    Vec y = Vec::Zero(rows());
    for (int i = 0; i < L.nu(); ++i)
      for (int j = 0; j < L.nu(); ++j) {
        const auto& T = cells_[static_cast<size_t>(i * L.nu() + j)];
        y.segment(L.s() * L.offset(i), T.rows()) +=
            T.apply(x.segment(L.t() * L.offset(j), T.cols()));
      }
    return y;
  }

 private:
  BlockMatrixSpec spec_;
  std::vector<ToeplitzOperator> cells_;
};

// ---------------------------------------------------------------------------
// Permutation Pi_mu
// ---------------------------------------------------------------------------

/// Pi = [I_nu (x) e_1^T; ...; I_nu (x) e_{n/nu}^T] (x) I_mu as an index map:
/// (Pi x)_r = x_{source[r]}.
class Permutation {
 public:
  Permutation(Index n, int nu, int mu) {
    require(nu >= 1 && mu >= 1, "permutation: nu, mu must be >= 1");
    require(n % nu == 0, "permutation: nu must divide n");
    const Index per = n / nu;
    source_.resize(static_cast<size_t>(n * mu));
    Index r = 0;
    for (Index k = 0; k < per; ++k)
      for (Index i = 0; i < nu; ++i)
        for (Index a = 0; a < mu; ++a) source_[static_cast<size_t>(r++)] = (i * per + k) * mu + a;
  }

  Index size() const { return static_cast<Index>(source_.size()); }
  Index source(Index r) const { return source_[static_cast<size_t>(r)]; }

  Vec apply(const Vec& x) const {
    require(x.size() == size(), "permutation apply: dimension mismatch");
    Vec y(size());
    for (Index r = 0; r < size(); ++r) y[r] = x[source_[static_cast<size_t>(r)]];
    return y;
  }

  Mat dense() const {
    Mat p = Mat::Zero(size(), size());
    for (Index r = 0; r < size(); ++r) p(r, source_[static_cast<size_t>(r)]) = 1.0;
    return p;
  }

 private:
  std::vector<Index> source_;
};

inline Permutation permutation_pi(Index n, int nu, int mu) { return Permutation(n, nu, mu); }

/// Pi_s A Pi_t^T without forming the permutation matrices.
inline Mat permute_rows_cols(const Mat& a, const Permutation& pis, const Permutation& pit) {
  require(a.rows() == pis.size() && a.cols() == pit.size(),
          "permute: matrix/permutation size mismatch");
  Mat b(a.rows(), a.cols());
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c) b(r, c) = a(pis.source(r), pit.source(c));
  return b;
}

// ---------------------------------------------------------------------------
// The distribution symbol F
// ---------------------------------------------------------------------------

/// The (s m) x (t m) symbol F = (E_{j,k}) with E_{j,j} = I_{m_j} (x) f_{j,j}
/// and zero-padded I_{min(m_j,m_k)} (x) f_{j,k} off the diagonal.
inline Symbol assemble_symbol_F(const BlockMatrixSpec& spec) {
  spec.validate();
  const BlockLayout& L = spec.layout;
  require(L.has_ratios(), "assemble_symbol_F: rational ratio data required");
  const int s = L.s(), t = L.t(), nu = L.nu();
  const long long m = L.m();
  // cell (p, q) of the m x m grid carries f_{j,k} when p and q are the same
  // local copy index within partitions j and k, up to min(m_j, m_k)
  struct State {
    std::vector<Symbol> grid;
    std::vector<long long> copies;
    std::vector<long long> offsets;
    int s, t, nu;
    long long m;
  };
  auto st = std::make_shared<State>();
  st->grid = spec.grid;
  st->copies = L.copies();
  st->offsets.resize(static_cast<size_t>(nu) + 1, 0);
  for (int j = 0; j < nu; ++j) st->offsets[static_cast<size_t>(j + 1)] = st->offsets[static_cast<size_t>(j)] + st->copies[static_cast<size_t>(j)];
  st->s = s;
  st->t = t;
  st->nu = nu;
  st->m = m;

  auto place = [st](const std::function<Mat(const Symbol&)>& entry) -> Mat {
    Mat out = Mat::Zero(st->s * st->m, st->t * st->m);
    for (int j = 0; j < st->nu; ++j)
      for (int k = 0; k < st->nu; ++k) {
        const long long coupled = std::min(st->copies[static_cast<size_t>(j)], st->copies[static_cast<size_t>(k)]);
        Mat v = entry(st->grid[static_cast<size_t>(j * st->nu + k)]);
        for (long long p = 0; p < coupled; ++p) {
          const long long row = st->offsets[static_cast<size_t>(j)] + p;
          const long long col = st->offsets[static_cast<size_t>(k)] + p;
          out.block(static_cast<Index>(row) * st->s, static_cast<Index>(col) * st->t, st->s, st->t) = v;
        }
      }
    return out;
  };

  long support = 0;
  bool exact = true;
  for (const Symbol& f : spec.grid) {
    support = std::max(support, f.support());
    exact = exact && f.is_trig_polynomial();
  }
  auto coeff_fn = [place](long k) { return place([k](const Symbol& f) { return f.coefficient(k); }); };
  auto eval_fn = [place](double theta) {
    return place([theta](const Symbol& f) { return f.eval(theta); });
  };
  return Symbol::assembled(static_cast<int>(s * m), static_cast<int>(t * m), coeff_fn, eval_fn,
                           support, exact);
}

// ---------------------------------------------------------------------------
// A_tilde and A_hat
// ---------------------------------------------------------------------------

/// Off-diagonal blocks replaced by square Toeplitz blocks of size
/// min(n_i, n_j), zero-padded on the right or at the bottom.
inline Mat assemble_A_tilde(const BlockMatrixSpec& spec) {
  spec.validate();
  const BlockLayout& L = spec.layout;
  Mat a = Mat::Zero(L.rows(), L.cols());
  for (int i = 0; i < L.nu(); ++i)
    for (int j = 0; j < L.nu(); ++j) {
      const Index ni = L.size(i), nj = L.size(j);
      const Index nmin = (i == j) ? ni : std::min(ni, nj);
      a.block(L.s() * L.offset(i), L.t() * L.offset(j), L.s() * nmin, L.t() * nmin) =
          toeplitz(spec.at(i, j), nmin).dense();
    }
  return a;
}

/// Each square Toeplitz piece of A_tilde replaced by copies of T_{n_m}(f)
/// plus a remainder T_r(f) carrying the o(n_m) size defect (trailing
/// indices truncated or Toeplitz-extended).
inline Mat assemble_A_hat(const BlockMatrixSpec& spec, std::optional<Index> n_m_opt = {}) {
  spec.validate();
  const BlockLayout& L = spec.layout;
  require(L.has_ratios(), "assemble_A_hat: rational ratio data required");
  const Index n_m = n_m_opt.value_or(L.copy_size());
  Mat a = Mat::Zero(L.rows(), L.cols());
  for (int i = 0; i < L.nu(); ++i)
    for (int j = 0; j < L.nu(); ++j) {
      const Index ni = L.size(i), nj = L.size(j);
      const Index nmin = (i == j) ? ni : std::min(ni, nj);
      const long long mmin = std::min(L.copies_of(i), L.copies_of(j));
      // block-diagonal copies inside the leading nmin x nmin square
      Index off = 0;
      for (long long p = 0; p < mmin; ++p) {
        const Index cell = (p + 1 < mmin) ? n_m : nmin - (mmin - 1) * n_m;
        require(cell >= 1, "assemble_A_hat: remainder would be empty");
        a.block(L.s() * (L.offset(i) + off), L.t() * (L.offset(j) + off), L.s() * cell,
                L.t() * cell) = toeplitz(spec.at(i, j), cell).dense();
        off += cell;
      }
    }
  return a;
}

// ---------------------------------------------------------------------------
// Group-3 modification
// ---------------------------------------------------------------------------

/// Symmetrize, then scale the nu diagonal partition blocks and the
/// off-diagonal partition blocks.
inline Mat group3_modify(const Mat& a, const BlockLayout& L, double diag_scale,
                         double offdiag_scale) {
  require(a.rows() == L.rows() && a.cols() == L.cols(), "group3_modify: layout mismatch");
  require(L.s() == L.t(), "group3_modify: square blocks required");
  Mat sym = 0.5 * (a + a.transpose());
  for (int i = 0; i < L.nu(); ++i)
    for (int j = 0; j < L.nu(); ++j)
      sym.block(L.s() * L.offset(i), L.t() * L.offset(j), L.s() * L.size(i), L.t() * L.size(j)) *=
          (i == j) ? diag_scale : offdiag_scale;
  return sym;
}

/// The same modification applied at the symbol level: the symmetrized grid
/// entry is (f_{i,j}(theta) + f_{j,i}(-theta)^T)/2, then scaled. Assembling
/// the returned spec equals group3_modify(assemble_A(spec), ...) exactly.
inline BlockMatrixSpec modified_grid_spec(const BlockMatrixSpec& spec, double diag_scale,
                                          double offdiag_scale) {
  spec.validate();
  const BlockLayout& L = spec.layout;
  require(L.s() == L.t(), "modified_grid_spec: square blocks required");
  const int nu = L.nu(), s = L.s();
  BlockMatrixSpec out{L, {}};
  out.grid.reserve(static_cast<size_t>(nu * nu));
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nu; ++j) {
      const Symbol fij = spec.at(i, j);
      const Symbol fji = spec.at(j, i);
      const double scale = (i == j) ? diag_scale : offdiag_scale;
      long support = std::max(fij.support(), fji.support());
      bool exact = fij.is_trig_polynomial() && fji.is_trig_polynomial();
      auto coeff_fn = [fij, fji, scale](long k) -> Mat {
        return 0.5 * scale * (fij.coefficient(k) + fji.coefficient(-k).transpose());
      };
      auto eval_fn = [fij, fji, scale](double theta) -> Mat {
        return 0.5 * scale * (fij.eval(theta) + fji.eval(-theta).transpose());
      };
      out.grid.push_back(Symbol::assembled(s, s, coeff_fn, eval_fn, support, exact));
    }
  return out;
}

}  // namespace btoep
