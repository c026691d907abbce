#ifndef CATDIL_BROADCAST_HPP
#define CATDIL_BROADCAST_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "catdil/operator.hpp"
#include "catdil/states.hpp"

namespace catdil {

struct BroadcastReport {
  std::size_t n = 0;
  std::vector<double> residuals; ///< trace distance of each single-copy marginal to rho
  bool is_broadcast = false;
  double tol = 0.0;

  double max_residual() const {
    double m = 0.0;
    for (double r : residuals) {
      m = std::max(m, r);
    }
    return m;
  }
};

/// Factor indices of copy i when every copy carries `per_copy` factors.
inline std::vector<std::size_t> copy_factors(std::size_t per_copy, std::size_t i) {
  std::vector<std::size_t> out(per_copy);
  for (std::size_t k = 0; k < per_copy; ++k) {
    out[k] = i * per_copy + k;
  }
  return out;
}

inline DensityOperator copy_marginal(const DensityOperator &mu, std::size_t per_copy, std::size_t i) {
  return partial_trace(mu, copy_factors(per_copy, i));
}

inline BroadcastReport verify_broadcast(const DensityOperator &mu, const DensityOperator &rho, std::size_t n,
                                        double tol = 1e-9) {
  if (n < 1) {
    detail::fail("verify_broadcast", "copy count must be >= 1");
  }
  if (!(mu.shape() == rho.shape().power(n))) {
    detail::fail("verify_broadcast",
                 "shape " + mu.shape().str() + " is not " + std::to_string(n) + " copies of " + rho.shape().str());
  }
  BroadcastReport report;
  report.n = n;
  report.tol = tol;
  const std::size_t per_copy = rho.shape().size();
  for (std::size_t i = 0; i < n; ++i) {
    report.residuals.push_back(trace_distance(copy_marginal(mu, per_copy, i).op(), rho.op()));
  }
  report.is_broadcast = report.max_residual() <= tol;
  return report;
}

namespace detail {

inline void require_pure(const DensityOperator &phi, const char *where) {
  if (eigenvalues_hermitian(phi.op()).max() < 1.0 - 1e-9) {
    fail(where, "target state is not pure");
  }
}

} // namespace detail

/// True when mu is within trace distance tol of phi (x) phi. For a pure
/// phi every 2-copy broadcast is that product, so false flags a numerical
/// violation rather than a second broadcast.
inline bool pure_broadcast_uniqueness(const DensityOperator &mu, const DensityOperator &phi, double tol = 1e-6,
                                      double broadcast_tol = 1e-9) {
  detail::require_pure(phi, "pure_broadcast_uniqueness");
  if (!verify_broadcast(mu, phi, 2, broadcast_tol).is_broadcast) {
    detail::fail("pure_broadcast_uniqueness", "mu is not a 2-copy broadcast of phi");
  }
  return trace_distance(mu.op(), tensor(phi, phi).op()) <= tol;
}

struct ProjectionOptions {
  int max_iter = 200;
  double residual_tol = 1e-14; ///< stop once max |marginal - rho| falls below this
  std::size_t rank = 0;        ///< columns of the factor Y; 0 picks min(copy dimension, 4)
};

struct BroadcastProjection {
  DensityOperator point;
  double marginal_residual = 0.0;
  int iterations = 0;
};

namespace detail {

// Marginal residual of X = Y Y^dagger against rho for a two-copy layout
// with per-copy dimension d: entries of Tr_2 X - rho then Tr_1 X - rho,
// real parts followed by imaginary parts.
inline Eigen::VectorXd broadcast_residual(const Matrix &y, const Matrix &rho, Eigen::Index d) {
  const Matrix x = y * y.adjoint();
  Matrix t2 = Matrix::Zero(d, d);
  Matrix t1 = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) {
        t2(i, j) += x(i * d + k, j * d + k);
        t1(i, j) += x(k * d + i, k * d + j);
      }
    }
  }
  t2 -= rho;
  t1 -= rho;
  const Eigen::Index m = d * d;
  Eigen::VectorXd r(4 * m);
  for (Eigen::Index e = 0; e < m; ++e) {
    const Eigen::Index i = e / d;
    const Eigen::Index j = e % d;
    r(e) = t2(i, j).real();
    r(m + e) = t2(i, j).imag();
    r(2 * m + e) = t1(i, j).real();
    r(3 * m + e) = t1(i, j).imag();
  }
  return r;
}

// Jacobian of broadcast_residual with respect to (Re Y, Im Y), column-major
// over Y entries. dX = s e_p y_q^dagger + conj(s) y_q e_p^dagger with
// p = (p1, p2) the two-copy index.
inline Eigen::MatrixXd broadcast_jacobian(const Matrix &y, Eigen::Index d) {
  const Eigen::Index big = y.rows();
  const Eigen::Index rank = y.cols();
  const Eigen::Index m = d * d;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(4 * m, 2 * big * rank);
  Matrix d2(d, d);
  Matrix d1(d, d);
  for (Eigen::Index q = 0; q < rank; ++q) {
    const auto col = y.col(q);
    for (Eigen::Index p = 0; p < big; ++p) {
      const Eigen::Index p1 = p / d;
      const Eigen::Index p2 = p % d;
      for (int part = 0; part < 2; ++part) {
        const cplx s = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        d2.setZero();
        d1.setZero();
        for (Eigen::Index j = 0; j < d; ++j) {
          d2(p1, j) += s * std::conj(col(j * d + p2));
          d2(j, p1) += std::conj(s) * col(j * d + p2);
          d1(p2, j) += s * std::conj(col(p1 * d + j));
          d1(j, p2) += std::conj(s) * col(p1 * d + j);
        }
        const Eigen::Index c = part * big * rank + q * big + p;
        for (Eigen::Index e = 0; e < m; ++e) {
          const Eigen::Index i = e / d;
          const Eigen::Index j = e % d;
          jac(e, c) = d2(i, j).real();
          jac(m + e, c) = d2(i, j).imag();
          jac(2 * m + e, c) = d1(i, j).real();
          jac(3 * m + e, c) = d1(i, j).imag();
        }
      }
    }
  }
  return jac;
}

} // namespace detail

/// Moves `start` onto the set of 2-copy broadcasts of rho. The iterate is
/// kept PSD by factoring X = Y Y^dagger; each step is the minimum-norm
/// Gauss-Newton correction onto the linearized marginal constraints, with
/// step halving when the residual does not decrease.
inline BroadcastProjection project_to_two_broadcast(const DensityOperator &start, const DensityOperator &rho,
                                                    const ProjectionOptions &opts = {}) {
  if (!(start.shape() == rho.shape().power(2))) {
    detail::fail("project_to_two_broadcast", "start state is not two copies of " + rho.shape().str());
  }
  const auto d = static_cast<Eigen::Index>(rho.dimension());
  const auto big = d * d;
  const auto rank = static_cast<Eigen::Index>(opts.rank ? std::min<std::size_t>(opts.rank, static_cast<std::size_t>(big))
                                                        : std::min<std::size_t>(static_cast<std::size_t>(d), 4));

  const auto ed = eig_hermitian(start.op());
  Matrix y(big, rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    y.col(k) = ed.vectors.col(k) * std::sqrt(std::max(ed.spectrum.eigenvalues[static_cast<std::size_t>(k)], 0.0));
  }
  y /= std::sqrt(y.squaredNorm());

  Eigen::VectorXd res = detail::broadcast_residual(y, rho.matrix(), d);
  double err = res.cwiseAbs().maxCoeff();
  int it = 0;
  for (; it < opts.max_iter && err > opts.residual_tol; ++it) {
    const Eigen::MatrixXd jac = detail::broadcast_jacobian(y, d);
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-res);
    Matrix dy(big, rank);
    for (Eigen::Index q = 0; q < rank; ++q) {
      for (Eigen::Index p = 0; p < big; ++p) {
        dy(p, q) = cplx(step(q * big + p), step(big * rank + q * big + p));
      }
    }
    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving, scale *= 0.5) {
      const Matrix trial = y + scale * dy;
      Eigen::VectorXd trial_res = detail::broadcast_residual(trial, rho.matrix(), d);
      const double trial_err = trial_res.cwiseAbs().maxCoeff();
      if (trial_err < err) {
        y = trial;
        res = std::move(trial_res);
        err = trial_err;
        improved = true;
        break;
      }
    }
    if (!improved) {
      break;
    }
  }

  Matrix x = y * y.adjoint();
  x /= x.trace().real();
  return {detail::trusted_state(LabeledOperator(start.shape(), x)), err, it};
}

struct RigidityReport {
  std::vector<double> distances; ///< trace distance of each projected sample to phi (x) phi
  std::vector<double> residuals; ///< marginal residual of each sample
  double tol = 0.0;
  bool rigid = false; ///< every sample is a broadcast and lies within tol of phi (x) phi

  double max_distance() const {
    double m = 0.0;
    for (double v : distances) {
      m = std::max(m, v);
    }
    return m;
  }
};

/// Samples 2-copy broadcasts of a pure state by projecting random starts,
/// and checks that all of them collapse to phi (x) phi.
inline RigidityReport purity_rigidity(const DensityOperator &phi, std::size_t starts = 50, std::uint64_t seed = 1,
                                      double tol = 1e-6, const ProjectionOptions &opts = {}) {
  detail::require_pure(phi, "purity_rigidity");
  std::mt19937_64 rng(seed);
  const auto two = phi.shape().power(2);
  const auto product = tensor(phi, phi);
  RigidityReport report;
  report.tol = tol;
  report.rigid = true;
  for (std::size_t s = 0; s < starts; ++s) {
    const auto start = random_density(two, rng);
    const auto sample = project_to_two_broadcast(start, phi, opts);
    report.residuals.push_back(sample.marginal_residual);
    report.distances.push_back(trace_distance(sample.point.op(), product.op()));
    const bool is_broadcast = verify_broadcast(sample.point, phi, 2).is_broadcast;
    if (!is_broadcast || !pure_broadcast_uniqueness(sample.point, phi, tol)) {
      report.rigid = false;
    }
  }
  return report;
}

} // namespace catdil

#endif
