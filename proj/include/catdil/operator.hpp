#ifndef CATDIL_OPERATOR_HPP
#define CATDIL_OPERATOR_HPP

// Dense complex operators with an ordered list of bipartite factors.
//
// Basis ordering: the global index is a mixed-radix number over the legs
// (a_1, b_1, a_2, b_2, ..., a_k, b_k), most significant first. Factor i
// contributes an A leg of dimension a_i and a B leg of dimension b_i. The
// A:B cut used by the partial transpose groups every A leg against every
// B leg.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "catdil/error.hpp"

namespace catdil {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct FactorDims {
  std::size_t a = 1;
  std::size_t b = 1;

  std::size_t dimension() const { return a * b; }
  friend bool operator==(const FactorDims &, const FactorDims &) = default;
};

class FactorShape {
public:
  /// Zero factors; total dimension 1 (a scalar).
  FactorShape() = default;

  FactorShape(std::initializer_list<FactorDims> factors)
      : FactorShape(std::vector<FactorDims>(factors)) {}

  explicit FactorShape(std::vector<FactorDims> factors) : factors_(std::move(factors)) {
    for (const auto &f : factors_) {
      if (f.a < 1 || f.b < 1) {
        detail::fail("FactorShape", "every factor dimension must be >= 1");
      }
    }
  }

  /// Non-bipartite factor, encoded as (d, 1).
  static FactorShape plain(std::size_t d) { return FactorShape{{d, 1}}; }
  static FactorShape bipartite(std::size_t a, std::size_t b) { return FactorShape{{a, b}}; }

  std::size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }
  const FactorDims &operator[](std::size_t i) const { return factors_.at(i); }
  const std::vector<FactorDims> &factors() const { return factors_; }

  std::size_t dimension() const {
    std::size_t total = 1;
    for (const auto &f : factors_) {
      total *= f.dimension();
    }
    return total;
  }

  std::size_t a_dimension() const {
    std::size_t total = 1;
    for (const auto &f : factors_) {
      total *= f.a;
    }
    return total;
  }

  std::size_t b_dimension() const { return dimension() / a_dimension(); }

  /// Leg dimensions (a_1, b_1, ..., a_k, b_k).
  std::vector<std::size_t> legs() const {
    std::vector<std::size_t> out;
    out.reserve(2 * factors_.size());
    for (const auto &f : factors_) {
      out.push_back(f.a);
      out.push_back(f.b);
    }
    return out;
  }

  FactorShape concat(const FactorShape &other) const {
    auto out = factors_;
    out.insert(out.end(), other.factors_.begin(), other.factors_.end());
    return FactorShape(std::move(out));
  }

  FactorShape power(std::size_t n) const {
    FactorShape out;
    for (std::size_t i = 0; i < n; ++i) {
      out = out.concat(*this);
    }
    return out;
  }

  FactorShape select(const std::vector<std::size_t> &indices) const {
    std::vector<FactorDims> out;
    out.reserve(indices.size());
    for (auto i : indices) {
      out.push_back(factors_.at(i));
    }
    return FactorShape(std::move(out));
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      os << (i ? "," : "") << '(' << factors_[i].a << ',' << factors_[i].b << ')';
    }
    os << ']';
    return os.str();
  }

  friend bool operator==(const FactorShape &, const FactorShape &) = default;

private:
  std::vector<FactorDims> factors_;
};

class LabeledOperator {
public:
  LabeledOperator(FactorShape shape, Matrix entries)
      : shape_(std::move(shape)), entries_(std::move(entries)) {
    const auto dim = static_cast<Eigen::Index>(shape_.dimension());
    if (entries_.rows() != dim || entries_.cols() != dim) {
      std::ostringstream os;
      os << "matrix is " << entries_.rows() << "x" << entries_.cols() << " but shape "
         << shape_.str() << " has dimension " << dim;
      detail::fail("LabeledOperator", os.str());
    }
  }

  static LabeledOperator identity(FactorShape shape) {
    const auto dim = static_cast<Eigen::Index>(shape.dimension());
    return {std::move(shape), Matrix::Identity(dim, dim)};
  }

  static LabeledOperator zero(FactorShape shape) {
    const auto dim = static_cast<Eigen::Index>(shape.dimension());
    return {std::move(shape), Matrix::Zero(dim, dim)};
  }

  const FactorShape &shape() const { return shape_; }
  const Matrix &matrix() const { return entries_; }
  std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }

  cplx trace() const { return entries_.trace(); }

  /// max |M - M^dagger| entrywise.
  double hermiticity_defect() const {
    if (entries_.size() == 0) {
      return 0.0;
    }
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  }

  double max_abs() const { return entries_.size() ? entries_.cwiseAbs().maxCoeff() : 0.0; }

  LabeledOperator adjoint() const { return {shape_, entries_.adjoint()}; }

  /// (M + M^dagger) / 2
  LabeledOperator hermitian_part() const {
    return {shape_, (entries_ + entries_.adjoint()) * 0.5};
  }

  LabeledOperator &operator+=(const LabeledOperator &o) {
    require_same_shape(o, "operator+");
    entries_ += o.entries_;
    return *this;
  }

  LabeledOperator &operator-=(const LabeledOperator &o) {
    require_same_shape(o, "operator-");
    entries_ -= o.entries_;
    return *this;
  }

  LabeledOperator &operator*=(cplx s) {
    entries_ *= s;
    return *this;
  }

  friend LabeledOperator operator+(LabeledOperator a, const LabeledOperator &b) { return a += b; }
  friend LabeledOperator operator-(LabeledOperator a, const LabeledOperator &b) { return a -= b; }
  friend LabeledOperator operator*(LabeledOperator a, cplx s) { return a *= s; }
  friend LabeledOperator operator*(cplx s, LabeledOperator a) { return a *= s; }
  friend LabeledOperator operator*(double s, LabeledOperator a) { return a *= cplx(s, 0.0); }

private:
  void require_same_shape(const LabeledOperator &o, const char *where) const {
    if (!(shape_ == o.shape_)) {
      detail::fail(where, "shape mismatch " + shape_.str() + " vs " + o.shape_.str());
    }
  }

  FactorShape shape_;
  Matrix entries_;
};

/// Eigenvalues sorted descending.
struct Spectrum {
  std::vector<double> eigenvalues;

  std::size_t size() const { return eigenvalues.size(); }
  double max() const { return eigenvalues.front(); }
  double min() const { return eigenvalues.back(); }
  double sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }
  double abs_sum() const {
    double s = 0.0;
    for (double v : eigenvalues) {
      s += std::abs(v);
    }
    return s;
  }
};

struct EigenDecomposition {
  Spectrum spectrum;
  Matrix vectors; ///< column k pairs with spectrum.eigenvalues[k]
};

namespace detail {

inline void require_hermitian(const LabeledOperator &x, const char *where, double tol = 1e-9) {
  const double scale = std::max(1.0, x.max_abs());
  const double defect = x.hermiticity_defect();
  if (defect > tol * scale) {
    std::ostringstream os;
    os << "input is not Hermitian (defect " << defect << ")";
    fail(where, os.str());
  }
}

/// Mixed-radix digit bookkeeping over a list of leg dimensions.
class LegLayout {
public:
  explicit LegLayout(std::vector<std::size_t> dims) : dims_(std::move(dims)), strides_(dims_.size()) {
    std::size_t stride = 1;
    for (std::size_t k = dims_.size(); k-- > 0;) {
      strides_[k] = stride;
      stride *= dims_[k];
    }
    total_ = stride;
  }

  std::size_t total() const { return total_; }
  std::size_t legs() const { return dims_.size(); }
  std::size_t dim(std::size_t k) const { return dims_[k]; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }
  std::size_t digit(std::size_t index, std::size_t k) const { return (index / strides_[k]) % dims_[k]; }

  /// Index in the sub-layout formed by the selected legs (in the given order).
  std::size_t project(std::size_t index, const std::vector<std::size_t> &selected) const {
    std::size_t out = 0;
    for (auto k : selected) {
      out = out * dims_[k] + digit(index, k);
    }
    return out;
  }

private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

/// Reorders legs: new leg j is old leg order[j]. Returns, for every new
/// index, the old index it reads from.
inline std::vector<std::size_t> leg_permutation_map(const std::vector<std::size_t> &dims,
                                                    const std::vector<std::size_t> &order) {
  const LegLayout old_layout(dims);
  std::vector<std::size_t> new_dims;
  new_dims.reserve(order.size());
  for (auto k : order) {
    new_dims.push_back(dims[k]);
  }
  const LegLayout new_layout(new_dims);
  std::vector<std::size_t> map(old_layout.total());
  for (std::size_t idx = 0; idx < new_layout.total(); ++idx) {
    std::size_t old = 0;
    for (std::size_t j = 0; j < order.size(); ++j) {
      old += new_layout.digit(idx, j) * old_layout.stride(order[j]);
    }
    map[idx] = old;
  }
  return map;
}

inline Matrix gather(const Matrix &x, const std::vector<std::size_t> &map) {
  const auto n = static_cast<Eigen::Index>(map.size());
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = x(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
    }
  }
  return out;
}

/// Traces out every leg whose keep flag is false.
inline Matrix trace_out_legs(const Matrix &x, const std::vector<std::size_t> &dims,
                             const std::vector<bool> &keep) {
  const LegLayout layout(dims);
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    (keep[k] ? kept : traced).push_back(k);
  }
  std::size_t dk = 1;
  for (auto k : kept) {
    dk *= dims[k];
  }
  const std::size_t dt = layout.total() / dk;

  // full[k * dt + t] = global index of (kept digits k, traced digits t)
  std::vector<std::size_t> full(layout.total());
  for (std::size_t idx = 0; idx < layout.total(); ++idx) {
    full[layout.project(idx, kept) * dt + layout.project(idx, traced)] = idx;
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t c = 0; c < dk; ++c) {
    for (std::size_t r = 0; r < dk; ++r) {
      cplx acc{0.0, 0.0};
      for (std::size_t t = 0; t < dt; ++t) {
        acc += x(static_cast<Eigen::Index>(full[r * dt + t]), static_cast<Eigen::Index>(full[c * dt + t]));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return out;
}

} // namespace detail

/// Kronecker product; factor lists concatenate.
inline LabeledOperator tensor(const LabeledOperator &a, const LabeledOperator &b) {
  Matrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return {a.shape().concat(b.shape()), std::move(k)};
}

inline LabeledOperator tensor_power(const LabeledOperator &x, std::size_t n) {
  LabeledOperator out = LabeledOperator::identity(FactorShape{});
  for (std::size_t i = 0; i < n; ++i) {
    out = tensor(out, x);
  }
  return out;
}

/// Keeps the listed factors (result keeps their original order).
inline LabeledOperator partial_trace(const LabeledOperator &x, std::vector<std::size_t> keep) {
  if (keep.empty()) {
    detail::fail("partial_trace", "keep set must be nonempty");
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.back() >= x.shape().size()) {
    detail::fail("partial_trace", "factor index out of range");
  }
  std::vector<bool> leg_keep(2 * x.shape().size(), false);
  for (auto i : keep) {
    leg_keep[2 * i] = true;
    leg_keep[2 * i + 1] = true;
  }
  return {x.shape().select(keep), detail::trace_out_legs(x.matrix(), x.shape().legs(), leg_keep)};
}

/// Transposes every B leg (global A:B cut).
inline LabeledOperator partial_transpose(const LabeledOperator &x) {
  const auto legs = x.shape().legs();
  const detail::LegLayout layout(legs);
  const std::size_t dim = layout.total();
  std::vector<std::size_t> b_part(dim, 0);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    for (std::size_t k = 1; k < legs.size(); k += 2) {
      b_part[idx] += layout.digit(idx, k) * layout.stride(k);
    }
  }
  const Matrix &m = x.matrix();
  Matrix out(m.rows(), m.cols());
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t r = 0; r < dim; ++r) {
      const std::size_t rr = r - b_part[r] + b_part[c];
      const std::size_t cc = c - b_part[c] + b_part[r];
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m(static_cast<Eigen::Index>(rr), static_cast<Eigen::Index>(cc));
    }
  }
  return {x.shape(), std::move(out)};
}

/// New factor k is old factor perm[k].
inline LabeledOperator permute_factors(const LabeledOperator &x, const std::vector<std::size_t> &perm) {
  const std::size_t k = x.shape().size();
  std::vector<bool> seen(k, false);
  if (perm.size() != k) {
    detail::fail("permute_factors", "permutation length does not match factor count");
  }
  for (auto p : perm) {
    if (p >= k || seen[p]) {
      detail::fail("permute_factors", "not a permutation of factor indices");
    }
    seen[p] = true;
  }
  std::vector<std::size_t> leg_order;
  leg_order.reserve(2 * k);
  for (auto p : perm) {
    leg_order.push_back(2 * p);
    leg_order.push_back(2 * p + 1);
  }
  const auto map = detail::leg_permutation_map(x.shape().legs(), leg_order);
  return {x.shape().select(perm), detail::gather(x.matrix(), map)};
}

inline Spectrum eigenvalues_hermitian(const LabeledOperator &x) {
  detail::require_hermitian(x, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
  const auto &ev = solver.eigenvalues();
  Spectrum s;
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::reverse(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

inline EigenDecomposition eig_hermitian(const LabeledOperator &x) {
  detail::require_hermitian(x, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix());
  const auto n = solver.eigenvalues().size();
  EigenDecomposition out;
  out.spectrum.eigenvalues.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.spectrum.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

/// V f(Lambda) V^dagger for a real function of the eigenvalues.
template <typename F>
LabeledOperator spectral_map(const LabeledOperator &x, F &&f) {
  const auto ed = eig_hermitian(x);
  Eigen::VectorXd mapped(static_cast<Eigen::Index>(ed.spectrum.size()));
  for (std::size_t k = 0; k < ed.spectrum.size(); ++k) {
    mapped(static_cast<Eigen::Index>(k)) = f(ed.spectrum.eigenvalues[k]);
  }
  Matrix m = ed.vectors * mapped.asDiagonal() * ed.vectors.adjoint();
  return LabeledOperator(x.shape(), (m + m.adjoint()) * 0.5);
}

inline LabeledOperator abs_operator(const LabeledOperator &x) {
  return spectral_map(x, [](double v) { return std::abs(v); });
}

inline double trace_norm(const LabeledOperator &x) {
  detail::require_hermitian(x, "trace_norm");
  return eigenvalues_hermitian(x).abs_sum();
}

inline double trace_distance(const LabeledOperator &a, const LabeledOperator &b) {
  return 0.5 * trace_norm(a - b);
}

inline double max_abs_diff(const LabeledOperator &a, const LabeledOperator &b) {
  return (a - b).max_abs();
}

struct PsdReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double threshold = 0.0; ///< psd <=> min_eigenvalue >= threshold
};

/// PSD within a relative tolerance; the scale is the trace norm of x.
inline PsdReport is_psd(const LabeledOperator &x, double tol = 1e-10) {
  const auto spectrum = eigenvalues_hermitian(x);
  PsdReport r;
  r.min_eigenvalue = spectrum.min();
  r.threshold = -tol * std::max(spectrum.abs_sum(), 1e-300);
  r.psd = r.min_eigenvalue >= r.threshold;
  return r;
}

struct StateTolerance {
  double trace = 1e-12;
  double hermitian = 1e-12;
  double psd = 1e-10;
};

class DensityOperator;

namespace detail {
inline DensityOperator trusted_state(LabeledOperator op);
}

/// Unit-trace positive semidefinite LabeledOperator. Stored Hermitian-exact.
class DensityOperator {
public:
  explicit DensityOperator(LabeledOperator op, StateTolerance tol = {}) : op_(validate(std::move(op), tol)) {}

  const LabeledOperator &op() const { return op_; }
  operator const LabeledOperator &() const { return op_; }
  const FactorShape &shape() const { return op_.shape(); }
  const Matrix &matrix() const { return op_.matrix(); }
  std::size_t dimension() const { return op_.dimension(); }
  cplx trace() const { return op_.trace(); }

private:
  struct Trusted {};
  DensityOperator(LabeledOperator op, Trusted) : op_(op.hermitian_part()) {}
  friend DensityOperator detail::trusted_state(LabeledOperator op);

  static LabeledOperator validate(LabeledOperator op, const StateTolerance &tol) {
    const cplx tr = op.trace();
    if (std::abs(tr - cplx(1.0, 0.0)) > tol.trace) {
      std::ostringstream os;
      os << "trace " << tr.real() << "+" << tr.imag() << "i is not 1";
      detail::fail("DensityOperator", os.str());
    }
    if (op.hermiticity_defect() > tol.hermitian) {
      detail::fail("DensityOperator", "operator is not Hermitian");
    }
    auto h = op.hermitian_part();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    const double min_ev = solver.eigenvalues()(0);
    if (min_ev < -tol.psd) {
      std::ostringstream os;
      os << "minimum eigenvalue " << min_ev << " below tolerance";
      detail::fail("DensityOperator", os.str());
    }
    return h;
  }

  LabeledOperator op_;
};

namespace detail {

/// For results that are states by construction (products, marginals,
/// relabelings of states); skips the eigenvalue check.
inline DensityOperator trusted_state(LabeledOperator op) {
  return DensityOperator(std::move(op), DensityOperator::Trusted{});
}

} // namespace detail

inline DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
  return detail::trusted_state(tensor(a.op(), b.op()));
}

inline DensityOperator tensor_power(const DensityOperator &x, std::size_t n) {
  return detail::trusted_state(tensor_power(x.op(), n));
}

inline DensityOperator partial_trace(const DensityOperator &x, std::vector<std::size_t> keep) {
  return detail::trusted_state(partial_trace(x.op(), std::move(keep)));
}

inline DensityOperator permute_factors(const DensityOperator &x, const std::vector<std::size_t> &perm) {
  return detail::trusted_state(permute_factors(x.op(), perm));
}

/// Convex combination w*a + (1-w)*b.
inline DensityOperator mix(double w, const DensityOperator &a, const DensityOperator &b) {
  if (!(w >= 0.0 && w <= 1.0)) {
    detail::fail("mix", "weight must lie in [0, 1]");
  }
  if (!(a.shape() == b.shape())) {
    detail::fail("mix", "shape mismatch " + a.shape().str() + " vs " + b.shape().str());
  }
  return detail::trusted_state(w * a.op() + (1.0 - w) * b.op());
}

} // namespace catdil

#endif
