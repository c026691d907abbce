#ifndef CATDIL_STATES_HPP
#define CATDIL_STATES_HPP

#include <cmath>
#include <random>
#include <vector>

#include "catdil/operator.hpp"

namespace catdil {

struct IsotropicParams {
  std::size_t d = 2;
  double lam = 0.5; ///< weight on the maximally entangled state
};

/// |psi><psi| / <psi|psi>
inline DensityOperator pure_state(const FactorShape &shape, const Vector &ket) {
  if (static_cast<std::size_t>(ket.size()) != shape.dimension()) {
    detail::fail("pure_state", "ket length does not match shape " + shape.str());
  }
  const double norm2 = ket.squaredNorm();
  if (!(norm2 > 0.0)) {
    detail::fail("pure_state", "zero ket");
  }
  return detail::trusted_state(LabeledOperator(shape, ket * ket.adjoint() / norm2));
}

inline DensityOperator maximally_mixed(const FactorShape &shape) {
  const double d = static_cast<double>(shape.dimension());
  return detail::trusted_state((1.0 / d) * LabeledOperator::identity(shape));
}

/// |k><k| in the computational basis.
inline DensityOperator basis_state(const FactorShape &shape, std::size_t k) {
  if (k >= shape.dimension()) {
    detail::fail("basis_state", "index out of range");
  }
  Vector ket = Vector::Zero(static_cast<Eigen::Index>(shape.dimension()));
  ket(static_cast<Eigen::Index>(k)) = 1.0;
  return pure_state(shape, ket);
}

/// Diagonal state sum_i p_i |i><i| on a plain factor (d, 1).
inline DensityOperator classical_state(const std::vector<double> &probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {
      detail::fail("classical_state", "probabilities must be nonnegative");
    }
    total += p;
  }
  if (probs.empty() || std::abs(total - 1.0) > 1e-12) {
    detail::fail("classical_state", "probabilities must sum to 1");
  }
  Eigen::VectorXd diag(static_cast<Eigen::Index>(probs.size()));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    diag(static_cast<Eigen::Index>(i)) = probs[i];
  }
  Matrix m = diag.cast<cplx>().asDiagonal();
  return detail::trusted_state(LabeledOperator(FactorShape::plain(probs.size()), m));
}

/// sum_i sqrt(p_i) |ii> on two plain factors: a 2-copy broadcast of the
/// classical state with the same probabilities.
inline DensityOperator classical_purification(const std::vector<double> &probs) {
  const auto d = probs.size();
  (void)classical_state(probs);
  Vector ket = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) {
    ket(static_cast<Eigen::Index>(i * d + i)) = std::sqrt(probs[i]);
  }
  const auto plain = FactorShape::plain(d);
  return pure_state(plain.concat(plain), ket);
}

inline Vector max_entangled_ket(std::size_t d) {
  Vector ket = Vector::Zero(static_cast<Eigen::Index>(d * d));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    ket(static_cast<Eigen::Index>(i * d + i)) = amp;
  }
  return ket;
}

/// Phi_d on a single (d, d) factor.
inline DensityOperator max_entangled(std::size_t d) {
  if (d < 2) {
    detail::fail("max_entangled", "local dimension must be >= 2");
  }
  return pure_state(FactorShape::bipartite(d, d), max_entangled_ket(d));
}

/// f Phi_d + (1 - f)(1 - Phi_d)/(d^2 - 1): the isotropic state with
/// fidelity f against Phi_d.
inline DensityOperator isotropic_from_fidelity(std::size_t d, double f) {
  if (d < 2) {
    detail::fail("isotropic_from_fidelity", "local dimension must be >= 2");
  }
  if (!(f >= 0.0 && f <= 1.0)) {
    detail::fail("isotropic_from_fidelity", "fidelity must lie in [0, 1]");
  }
  const auto shape = FactorShape::bipartite(d, d);
  const LabeledOperator phi = max_entangled(d).op();
  const LabeledOperator rest = LabeledOperator::identity(shape) - phi;
  const double d2 = static_cast<double>(d * d);
  return detail::trusted_state(f * phi + ((1.0 - f) / (d2 - 1.0)) * rest);
}

/// lam Phi_d + (1 - lam) 1/d^2. At lam = 1/2 this is the noisy maximally
/// entangled state whose catalytic cost is halved by the broadcast protocol.
inline DensityOperator isotropic(const IsotropicParams &params) {
  if (params.d < 2) {
    detail::fail("isotropic", "local dimension must be >= 2");
  }
  if (!(params.lam >= 0.0 && params.lam <= 1.0)) {
    detail::fail("isotropic", "lam must lie in [0, 1]");
  }
  const auto phi = max_entangled(params.d);
  return mix(params.lam, phi, maximally_mixed(phi.shape()));
}

inline double isotropic_fidelity(const IsotropicParams &params) {
  const double d2 = static_cast<double>(params.d * params.d);
  return params.lam + (1.0 - params.lam) / d2;
}

/// <Phi_d| x |Phi_d> for a single (d, d) factor.
inline double entangled_fidelity(const LabeledOperator &x) {
  if (x.shape().size() != 1 || x.shape()[0].a != x.shape()[0].b) {
    detail::fail("entangled_fidelity", "expected a single (d, d) factor, got " + x.shape().str());
  }
  const Vector ket = max_entangled_ket(x.shape()[0].a);
  return (ket.adjoint() * x.matrix() * ket)(0, 0).real();
}

/// (s0 (x) s1 + s1 (x) s0) / 2; both marginals equal (s0 + s1) / 2.
inline DensityOperator symmetric_two_broadcast(const DensityOperator &s0, const DensityOperator &s1) {
  if (!(s0.shape() == s1.shape())) {
    detail::fail("symmetric_two_broadcast", "shape mismatch " + s0.shape().str() + " vs " + s1.shape().str());
  }
  return mix(0.5, tensor(s0, s1), tensor(s1, s0));
}

/// (1 - p)|0><0| + p|1><1|, 0 < p < 1/2.
inline DensityOperator gibbs_qubit(double p) {
  if (!(p > 0.0 && p < 0.5)) {
    detail::fail("gibbs_qubit", "excited population must satisfy 0 < p < 1/2");
  }
  return classical_state({1.0 - p, p});
}

/// (1 - q)|0><0| + q gamma_p
inline DensityOperator classical_mix(double q, double p) {
  if (!(q >= 0.0 && q <= 1.0)) {
    detail::fail("classical_mix", "q must lie in [0, 1]");
  }
  const auto gamma = gibbs_qubit(p);
  return mix(q, gamma, basis_state(FactorShape::plain(2), 0));
}

/// Projection onto the isotropic family preserving the fidelity with
/// Phi_d. Equal to the U (x) conj(U) group average.
inline DensityOperator isotropic_twirl(const DensityOperator &x) {
  const auto &shape = x.shape();
  if (shape.size() != 1 || shape[0].a != shape[0].b) {
    detail::fail("isotropic_twirl", "expected a single (d, d) factor, got " + shape.str());
  }
  const double f = std::clamp(entangled_fidelity(x), 0.0, 1.0);
  return isotropic_from_fidelity(shape[0].a, f);
}

/// Haar-random unitary via QR of a complex Ginibre matrix.
template <typename Rng>
Matrix random_unitary(std::size_t n, Rng &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      z(i, j) = cplx(g(rng), g(rng));
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const cplx diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) {
      q.col(k) *= diag / mag;
    }
  }
  return q;
}

/// G G^dagger / tr with G a dim x rank Ginibre matrix. rank 0 means full.
template <typename Rng>
DensityOperator random_density(const FactorShape &shape, Rng &rng, std::size_t rank = 0) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto dim = static_cast<Eigen::Index>(shape.dimension());
  const auto r = static_cast<Eigen::Index>(rank == 0 ? shape.dimension() : rank);
  Matrix z(dim, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      z(i, j) = cplx(g(rng), g(rng));
    }
  }
  Matrix m = z * z.adjoint();
  m /= m.trace();
  return detail::trusted_state(LabeledOperator(shape, m));
}

template <typename Rng>
DensityOperator random_pure(const FactorShape &shape, Rng &rng) {
  return random_density(shape, rng, 1);
}

/// Random diagonal state on a plain factor.
template <typename Rng>
DensityOperator random_classical(std::size_t d, Rng &rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(d);
  double total = 0.0;
  for (auto &v : p) {
    v = e(rng);
    total += v;
  }
  for (auto &v : p) {
    v /= total;
  }
  // renormalize the last entry so the sum is 1 to rounding
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    head += p[i];
  }
  p.back() = std::max(0.0, 1.0 - head);
  return classical_state(p);
}

/// U x U^dagger (no shape change).
inline DensityOperator conjugate(const DensityOperator &x, const Matrix &u) {
  if (u.rows() != static_cast<Eigen::Index>(x.dimension()) || u.cols() != u.rows()) {
    detail::fail("conjugate", "unitary dimension mismatch");
  }
  return detail::trusted_state(LabeledOperator(x.shape(), u * x.matrix() * u.adjoint()));
}

} // namespace catdil

#endif
