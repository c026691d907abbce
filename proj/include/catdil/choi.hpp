#ifndef CATDIL_CHOI_HPP
#define CATDIL_CHOI_HPP

// Channels through their (unnormalized) Choi operators
//   J = sum_ij |i><j| (x) Lambda(|i><j|),
// input factors first in the canonical ordering. Lambda is a PPT operation
// when J and J^Gamma (B legs of input and output transposed) are both PSD.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "catdil/measures.hpp"
#include "catdil/operator.hpp"
#include "catdil/states.hpp"

namespace catdil {

class ChoiOperator {
public:
  ChoiOperator(LabeledOperator op, std::vector<std::size_t> input_factors)
      : op_(std::move(op)), input_(std::move(input_factors)) {
    std::sort(input_.begin(), input_.end());
    if (std::adjacent_find(input_.begin(), input_.end()) != input_.end()) {
      detail::fail("ChoiOperator", "duplicate input factor index");
    }
    for (auto i : input_) {
      if (i >= op_.shape().size()) {
        detail::fail("ChoiOperator", "input factor index out of range");
      }
    }
    for (std::size_t i = 0; i < op_.shape().size(); ++i) {
      if (!std::binary_search(input_.begin(), input_.end(), i)) {
        output_.push_back(i);
      }
    }
  }

  /// Input factors first: the first in_shape.size() factors of op.
  static ChoiOperator canonical(LabeledOperator op, std::size_t input_count) {
    std::vector<std::size_t> in(input_count);
    for (std::size_t i = 0; i < input_count; ++i) {
      in[i] = i;
    }
    return {std::move(op), std::move(in)};
  }

  const LabeledOperator &op() const { return op_; }
  const std::vector<std::size_t> &input_factors() const { return input_; }
  const std::vector<std::size_t> &output_factors() const { return output_; }
  FactorShape input_shape() const { return op_.shape().select(input_); }
  FactorShape output_shape() const { return op_.shape().select(output_); }
  std::size_t input_dimension() const { return input_shape().dimension(); }
  std::size_t output_dimension() const { return output_shape().dimension(); }

  /// The operator relabeled so input factors come first.
  LabeledOperator canonical_op() const {
    std::vector<std::size_t> perm = input_;
    perm.insert(perm.end(), output_.begin(), output_.end());
    bool identity = true;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      identity = identity && perm[i] == i;
    }
    return identity ? op_ : permute_factors(op_, perm);
  }

private:
  LabeledOperator op_;
  std::vector<std::size_t> input_;
  std::vector<std::size_t> output_;
};

/// Choi operator of a linear map given as a callable on LabeledOperator.
template <typename Map>
ChoiOperator choi_from_map(const FactorShape &in_shape, const FactorShape &out_shape, Map &&map) {
  const auto din = static_cast<Eigen::Index>(in_shape.dimension());
  const auto dout = static_cast<Eigen::Index>(out_shape.dimension());
  Matrix j = Matrix::Zero(din * dout, din * dout);
  for (Eigen::Index a = 0; a < din; ++a) {
    for (Eigen::Index b = 0; b < din; ++b) {
      Matrix unit = Matrix::Zero(din, din);
      unit(a, b) = 1.0;
      const LabeledOperator image = map(LabeledOperator(in_shape, unit));
      if (!(image.shape() == out_shape)) {
        detail::fail("choi_from_map", "map output shape mismatch");
      }
      j.block(a * dout, b * dout, dout, dout) = image.matrix();
    }
  }
  return ChoiOperator::canonical(LabeledOperator(in_shape.concat(out_shape), j), in_shape.size());
}

/// Raw channel action Lambda(x) = Tr_in[(x^T (x) 1) J] on any operator.
inline LabeledOperator choi_action(const ChoiOperator &choi, const LabeledOperator &x) {
  if (!(x.shape() == choi.input_shape())) {
    detail::fail("apply_choi", "input shape " + x.shape().str() + " does not match " + choi.input_shape().str());
  }
  const auto din = static_cast<Eigen::Index>(choi.input_dimension());
  const auto dout = static_cast<Eigen::Index>(choi.output_dimension());
  const Matrix j = choi.canonical_op().matrix();
  Matrix out = Matrix::Zero(dout, dout);
  for (Eigen::Index a = 0; a < din; ++a) {
    for (Eigen::Index b = 0; b < din; ++b) {
      const cplx w = x.matrix()(a, b);
      if (w != cplx(0.0, 0.0)) {
        out += w * j.block(a * dout, b * dout, dout, dout);
      }
    }
  }
  return {choi.output_shape(), out};
}

/// Channel action on a state; the output is checked as a state at 1e-10.
inline DensityOperator apply_choi(const ChoiOperator &choi, const DensityOperator &x) {
  return DensityOperator(choi_action(choi, x.op()), StateTolerance{1e-10, 1e-10, 1e-10});
}

inline ChoiOperator identity_choi(const FactorShape &shape) {
  return choi_from_map(shape, shape, [](const LabeledOperator &x) { return x; });
}

/// Full transpose map: positive but not completely positive.
inline ChoiOperator transpose_choi(const FactorShape &shape) {
  return choi_from_map(shape, shape, [](const LabeledOperator &x) {
    return LabeledOperator(x.shape(), x.matrix().transpose());
  });
}

/// x -> Tr(x) sigma
inline ChoiOperator replacer_choi(const FactorShape &in_shape, const DensityOperator &sigma) {
  return choi_from_map(in_shape, sigma.shape(), [&](const LabeledOperator &x) { return x.trace() * sigma.op(); });
}

/// x -> x/2 + Tr(x) 1/(2 d^2) on a (d, d) factor; maps Phi_d to the noisy
/// maximally entangled state.
inline ChoiOperator analytic_mixer_choi(std::size_t d) {
  if (d < 2) {
    detail::fail("analytic_mixer_choi", "local dimension must be >= 2");
  }
  const auto shape = FactorShape::bipartite(d, d);
  const auto noise = maximally_mixed(shape);
  return choi_from_map(shape, shape, [&](const LabeledOperator &x) { return 0.5 * x + (0.5 * x.trace()) * noise.op(); });
}

/// Coin flip placing the input in copy 1 or copy 2 and 1/d^2 in the other:
/// x -> (x (x) 1/d^2 + 1/d^2 (x) x)/2. Maps Phi_d to the
/// symmetric broadcast of the noisy maximally entangled state.
inline ChoiOperator coin_flip_broadcast_choi(std::size_t d) {
  if (d < 2) {
    detail::fail("coin_flip_broadcast_choi", "local dimension must be >= 2");
  }
  const auto shape = FactorShape::bipartite(d, d);
  const auto noise = maximally_mixed(shape);
  return choi_from_map(shape, shape.power(2), [&](const LabeledOperator &x) {
    return 0.5 * tensor(x, noise.op()) + 0.5 * tensor(noise.op(), x);
  });
}

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  std::map<std::string, double> residuals; ///< cp, ppt, tp and (for synthesis) correctness
  std::optional<ChoiOperator> feasible_point;
  bool infeasible_flagged = false;
  std::optional<double> npt_witness; ///< min eigenvalue of target^Gamma when it certifies infeasibility
  std::vector<double> best_history;  ///< best max-residual so far, one entry per check
  double tol = 0.0;

  double max_residual() const {
    double m = 0.0;
    for (const auto &[name, value] : residuals) {
      m = std::max(m, value);
    }
    return m;
  }
};

namespace detail {

inline double tp_residual(const Matrix &j, Eigen::Index din, Eigen::Index dout) {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < din; ++a) {
    for (Eigen::Index b = 0; b < din; ++b) {
      cplx acc{0.0, 0.0};
      for (Eigen::Index k = 0; k < dout; ++k) {
        acc += j(a * dout + k, b * dout + k);
      }
      worst = std::max(worst, std::abs(acc - cplx(a == b ? 1.0 : 0.0, 0.0)));
    }
  }
  return worst;
}

inline double negative_part(const LabeledOperator &x) {
  return std::max(0.0, -eigenvalues_hermitian(x.hermitian_part()).min());
}

} // namespace detail

/// CP, PPT-operation and TP residuals of a Choi operator.
inline SolveReport verify_ppt_operation(const ChoiOperator &choi, double tol = 1e-6) {
  const auto j = choi.canonical_op();
  SolveReport report;
  report.tol = tol;
  report.residuals["cp"] = detail::negative_part(j);
  report.residuals["ppt"] = detail::negative_part(partial_transpose(j));
  report.residuals["tp"] = detail::tp_residual(j.matrix(), static_cast<Eigen::Index>(choi.input_dimension()),
                                               static_cast<Eigen::Index>(choi.output_dimension()));
  report.converged = report.max_residual() <= tol;
  if (report.converged) {
    report.feasible_point = choi;
  }
  return report;
}

struct SynthesisOptions {
  int max_iter = 20000;
  double tol = 1e-6;
  int check_every = 10;
  int stall_window = 500; ///< stop when the best residual has not dropped by 0.1% over this many iterations
};

/// Largest Choi dimension the synthesizer accepts.
inline constexpr std::size_t kChoiDimensionBudget = 256;

namespace detail {

// Affine set {J : Tr_out J = 1, Lambda(input) = target} with a precomputed
// pseudo-inverse of the constraint Gram matrix; vec(J) is column-major.
class AffineProjector {
public:
  AffineProjector(const Matrix &input, const Matrix &target, Eigen::Index din, Eigen::Index dout)
      : dim_(din * dout) {
    using Triplet = Eigen::Triplet<cplx>;
    std::vector<Triplet> triplets;
    std::vector<cplx> rhs;
    Eigen::Index row = 0;
    auto entry = [&](Eigen::Index r, Eigen::Index c) { return c * dim_ + r; };
    for (Eigen::Index a = 0; a < din; ++a) {
      for (Eigen::Index b = 0; b < din; ++b, ++row) {
        for (Eigen::Index k = 0; k < dout; ++k) {
          triplets.emplace_back(row, entry(a * dout + k, b * dout + k), cplx(1.0, 0.0));
        }
        rhs.emplace_back(a == b ? 1.0 : 0.0, 0.0);
      }
    }
    for (Eigen::Index k = 0; k < dout; ++k) {
      for (Eigen::Index l = 0; l < dout; ++l, ++row) {
        for (Eigen::Index a = 0; a < din; ++a) {
          for (Eigen::Index b = 0; b < din; ++b) {
            const cplx w = input(a, b);
            if (w != cplx(0.0, 0.0)) {
              triplets.emplace_back(row, entry(a * dout + k, b * dout + l), w);
            }
          }
        }
        rhs.push_back(target(k, l));
      }
    }
    a_.resize(row, dim_ * dim_);
    a_.setFromTriplets(triplets.begin(), triplets.end());
    a_.makeCompressed();
    b_ = Eigen::Map<const Vector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    a_adj_ = a_.adjoint();

    const Matrix gram = Matrix(a_ * a_adj_);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    const auto &ev = solver.eigenvalues();
    const double cutoff = 1e-10 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd inv(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      inv(k) = ev(k) > cutoff ? 1.0 / ev(k) : 0.0;
    }
    gram_pinv_ = solver.eigenvectors() * inv.cast<cplx>().asDiagonal() * solver.eigenvectors().adjoint();
  }

  double residual(const Matrix &j) const {
    const Eigen::Map<const Vector> v(j.data(), dim_ * dim_);
    return (a_ * v - b_).cwiseAbs().maxCoeff();
  }

  Matrix project(const Matrix &j) const {
    Matrix out = j;
    Eigen::Map<Vector> v(out.data(), dim_ * dim_);
    const Vector r = a_ * v - b_;
    v -= a_adj_ * (gram_pinv_ * r);
    return (out + out.adjoint()) * 0.5;
  }

private:
  Eigen::Index dim_;
  Eigen::SparseMatrix<cplx> a_;
  Eigen::SparseMatrix<cplx> a_adj_;
  Vector b_;
  Matrix gram_pinv_;
};

inline Matrix project_psd(const Matrix &x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver((x + x.adjoint()) * 0.5);
  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  Matrix out = solver.eigenvectors() * clipped.cast<cplx>().asDiagonal() * solver.eigenvectors().adjoint();
  return (out + out.adjoint()) * 0.5;
}

} // namespace detail

/// Searches for a PPT operation mapping Phi_2^(m) to target exactly, via
/// Dykstra's alternating projections over the CP cone, the PPT-operation
/// cone and the affine TP + correctness set.
inline SolveReport synthesize_ppt_dilution(std::size_t m, const DensityOperator &target,
                                           const SynthesisOptions &opts = {}) {
  if (!(opts.tol > 0.0) || opts.max_iter < 1 || opts.check_every < 1 || opts.stall_window < 1) {
    detail::fail("synthesize_ppt_dilution", "tol must be positive and iteration counts at least 1");
  }
  std::size_t choi_dim = target.dimension();
  for (std::size_t k = 0; k < m && choi_dim <= kChoiDimensionBudget; ++k) {
    choi_dim *= 4;
  }
  if (choi_dim > kChoiDimensionBudget) {
    throw ResourceLimit("synthesize_ppt_dilution: Choi dimension exceeds budget " +
                        std::to_string(kChoiDimensionBudget));
  }
  const auto phi = max_entangled(2);
  const auto input = tensor_power(phi, m);
  const auto in_shape = input.shape();
  const auto din = static_cast<Eigen::Index>(in_shape.dimension());
  const auto dout = static_cast<Eigen::Index>(target.dimension());
  const auto choi_shape = in_shape.concat(target.shape());
  const detail::AffineProjector affine(input.matrix(), target.matrix(), din, dout);

  auto transpose_b = [&](const Matrix &x) { return partial_transpose(LabeledOperator(choi_shape, x)).matrix(); };

  SolveReport report;
  report.tol = opts.tol;
  if (m == 0) {
    const double witness = eigenvalues_hermitian(partial_transpose(target.op())).min();
    if (witness < -opts.tol) {
      report.npt_witness = witness;
      report.infeasible_flagged = true;
    }
  }

  const Eigen::Index dim = din * dout;
  Matrix j = Matrix::Identity(dim, dim) / static_cast<double>(dout);
  Matrix inc_cp = Matrix::Zero(dim, dim);
  Matrix inc_ppt = Matrix::Zero(dim, dim);
  Matrix inc_aff = Matrix::Zero(dim, dim);

  double best = std::numeric_limits<double>::infinity();
  std::map<std::string, double> best_residuals;
  Matrix best_j = j;
  int last_improvement = 0;
  int it = 0;
  while (it < opts.max_iter) {
    ++it;
    const Matrix y = detail::project_psd(j + inc_cp);
    inc_cp = j + inc_cp - y;
    const Matrix z = transpose_b(detail::project_psd(transpose_b(y + inc_ppt)));
    inc_ppt = y + inc_ppt - z;
    const Matrix next = affine.project(z + inc_aff);
    inc_aff = z + inc_aff - next;
    j = next;

    if (it % opts.check_every != 0 && it != opts.max_iter) {
      continue;
    }
    const LabeledOperator jl(choi_shape, j);
    std::map<std::string, double> res{
        {"cp", detail::negative_part(jl)},
        {"ppt", detail::negative_part(partial_transpose(jl))},
        {"tp", detail::tp_residual(j, din, dout)},
        {"correctness", (choi_action(ChoiOperator::canonical(jl, in_shape.size()), input.op()).matrix() -
                         target.matrix())
                            .cwiseAbs()
                            .maxCoeff()},
    };
    double worst = 0.0;
    for (const auto &[name, value] : res) {
      worst = std::max(worst, value);
    }
    if (worst < best * (1.0 - 1e-3)) {
      last_improvement = it;
    }
    if (worst < best) {
      best = worst;
      best_residuals = res;
      best_j = j;
    }
    report.best_history.push_back(best);
    if (best <= opts.tol) {
      report.converged = true;
      break;
    }
    if (it - last_improvement >= opts.stall_window) {
      report.infeasible_flagged = true;
      break;
    }
  }
  report.iterations = it;
  report.residuals = best_residuals;
  if (report.converged) {
    report.feasible_point = ChoiOperator::canonical(LabeledOperator(choi_shape, best_j), in_shape.size());
  }
  return report;
}

} // namespace catdil

#endif
