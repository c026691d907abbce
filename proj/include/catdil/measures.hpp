#ifndef CATDIL_MEASURES_HPP
#define CATDIL_MEASURES_HPP

#include <cmath>
#include <limits>
#include <string_view>

#include "catdil/operator.hpp"
#include "catdil/states.hpp"

namespace catdil {

enum class Applicability { exact_formula, upper_bound_only, undefined };

inline std::string_view to_string(Applicability a) {
  switch (a) {
  case Applicability::exact_formula:
    return "exact-formula";
  case Applicability::upper_bound_only:
    return "upper-bound-only";
  case Applicability::undefined:
    return "undefined";
  }
  return "undefined";
}

/// A cost in bits. Infinite bits is the marker for "no certified value";
/// finite bits always come with a defined applicability.
struct CostValue {
  double bits = std::numeric_limits<double>::infinity();
  Applicability applicability = Applicability::undefined;

  bool finite() const { return std::isfinite(bits); }
};

struct BinegativityReport {
  double min_eigenvalue = 0.0;
  bool positive = false;
  double tol = 0.0;
};

/// Threshold below which an eigenvalue of sigma is treated as zero in d_max.
inline constexpr double kSupportThreshold = 1e-11;
/// Weight of rho outside support(sigma) above which d_max is infinite.
inline constexpr double kOutsideSupportWeight = 1e-10;
/// Relative tolerance of the PPT test inside log_negativity.
inline constexpr double kPptTolerance = 1e-10;

/// log2 || rho^Gamma ||_1. Exactly 0 when rho^Gamma passes the PSD test.
inline double log_negativity(const DensityOperator &rho) {
  const auto spectrum = eigenvalues_hermitian(partial_transpose(rho.op()));
  const double norm = spectrum.abs_sum();
  if (spectrum.min() >= -kPptTolerance * norm) {
    return 0.0;
  }
  return std::max(0.0, std::log2(norm));
}

/// Minimum eigenvalue of |rho^Gamma|^Gamma.
inline BinegativityReport binegativity(const DensityOperator &rho, double tol = 1e-9) {
  const auto bineg = partial_transpose(abs_operator(partial_transpose(rho.op())));
  BinegativityReport r;
  r.min_eigenvalue = eigenvalues_hermitian(bineg).min();
  r.tol = tol;
  r.positive = r.min_eigenvalue >= -tol;
  return r;
}

/// Exact PPT cost through the logarithmic negativity, certified only on
/// states with positive binegativity. Outside that set the value is not
/// extrapolated: bits is the infinite marker and applicability undefined.
inline CostValue exact_ppt_cost(const DensityOperator &rho, double tol = 1e-9) {
  if (!binegativity(rho, tol).positive) {
    return {};
  }
  return {log_negativity(rho), Applicability::exact_formula};
}

/// max-relative entropy log2 min{s : rho <= s sigma}; +infinity when rho
/// has weight outside support(sigma).
inline double d_max(const DensityOperator &rho, const DensityOperator &sigma) {
  if (!(rho.shape() == sigma.shape())) {
    detail::fail("d_max", "shape mismatch " + rho.shape().str() + " vs " + sigma.shape().str());
  }
  const auto ed = eig_hermitian(sigma.op());
  const auto &ev = ed.spectrum.eigenvalues;
  Eigen::Index support = 0;
  while (support < static_cast<Eigen::Index>(ev.size()) && ev[static_cast<std::size_t>(support)] > kSupportThreshold) {
    ++support;
  }
  const auto n = static_cast<Eigen::Index>(ev.size());
  if (support < n) {
    const Matrix kernel = ed.vectors.rightCols(n - support);
    const double outside = (kernel.adjoint() * rho.matrix() * kernel).trace().real();
    if (outside > kOutsideSupportWeight) {
      return std::numeric_limits<double>::infinity();
    }
  }
  if (support == 0) {
    return std::numeric_limits<double>::infinity();
  }
  Matrix w = ed.vectors.leftCols(support);
  for (Eigen::Index k = 0; k < support; ++k) {
    w.col(k) /= std::sqrt(ev[static_cast<std::size_t>(k)]);
  }
  Matrix reduced = w.adjoint() * rho.matrix() * w;
  reduced = (reduced + reduced.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(reduced, Eigen::EigenvaluesOnly);
  const double top = solver.eigenvalues()(support - 1);
  return std::max(0.0, std::log2(top));
}

struct IsotropicPptDistance {
  double bits = 0.0;
  double reference_fidelity = 0.0; ///< fidelity of the minimizing PPT isotropic state
  int evaluations = 0;
};

/// D_max from an isotropic-symmetric state to the PPT set. Twirling maps
/// the PPT set onto the isotropic segment with fidelity g in (0, 1/d], so
/// the search is one-dimensional: golden-section on g to 1e-10, with the
/// endpoint g = 1/d evaluated explicitly.
inline IsotropicPptDistance d_max_to_ppt_isotropic_report(const DensityOperator &rho) {
  const auto &shape = rho.shape();
  if (shape.size() != 1 || shape[0].a != shape[0].b) {
    detail::fail("d_max_to_ppt_isotropic", "expected a single (d, d) factor, got " + shape.str());
  }
  const auto twirled = isotropic_twirl(rho);
  if (max_abs_diff(rho.op(), twirled.op()) > 1e-10) {
    detail::fail("d_max_to_ppt_isotropic", "input is not isotropic-symmetric");
  }
  const std::size_t d = shape[0].a;
  const double upper = 1.0 / static_cast<double>(d);
  const double f = entangled_fidelity(rho.op());
  IsotropicPptDistance out;
  if (f <= upper + 1e-12) {
    out.reference_fidelity = f;
    return out;
  }

  auto objective = [&](double g) {
    ++out.evaluations;
    return d_max(rho, isotropic_from_fidelity(d, g));
  };

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-12;
  double hi = upper;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objective(x2);
    }
  }
  double best_g = 0.5 * (lo + hi);
  double best = objective(best_g);
  const double at_boundary = objective(upper);
  if (at_boundary <= best) {
    best = at_boundary;
    best_g = upper;
  }
  out.bits = best;
  out.reference_fidelity = best_g;
  return out;
}

inline double d_max_to_ppt_isotropic(const DensityOperator &rho) {
  return d_max_to_ppt_isotropic_report(rho).bits;
}

/// Number of marginal eigenvalues above tol for a pure state, across the
/// global A:B cut (all A legs against all B legs).
inline std::size_t schmidt_rank(const DensityOperator &psi, double tol = 1e-9) {
  const auto spectrum = eigenvalues_hermitian(psi.op());
  if (spectrum.max() < 1.0 - 1e-9) {
    detail::fail("schmidt_rank", "input is not pure");
  }
  const auto legs = psi.shape().legs();
  std::vector<bool> keep(legs.size(), false);
  for (std::size_t k = 0; k < legs.size(); k += 2) {
    keep[k] = true;
  }
  const Matrix reduced = detail::trace_out_legs(psi.matrix(), legs, keep);
  Eigen::SelfAdjointEigenSolver<Matrix> solver((reduced + reduced.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    if (solver.eigenvalues()(k) > tol) {
      ++rank;
    }
  }
  return rank;
}

/// Exact LOCC cost of a pure state: log2 of its Schmidt rank.
inline double exact_locc_cost_pure(const DensityOperator &psi, double tol = 1e-9) {
  return std::log2(static_cast<double>(schmidt_rank(psi, tol)));
}

namespace detail {

inline Eigen::VectorXd diagonal_of(const DensityOperator &x, const char *where) {
  const Matrix &m = x.matrix();
  const Matrix off = m - Matrix(m.diagonal().asDiagonal());
  if (off.size() && off.cwiseAbs().maxCoeff() > 1e-10) {
    fail(where, "state is not diagonal in the supplied basis");
  }
  return m.diagonal().real();
}

} // namespace detail

/// Exact work cost of a semiclassical state: log2 max_i p_i / gamma_i.
inline double work_cost_semiclassical(const DensityOperator &rho, const DensityOperator &gamma) {
  if (!(rho.shape() == gamma.shape())) {
    detail::fail("work_cost_semiclassical", "shape mismatch " + rho.shape().str() + " vs " + gamma.shape().str());
  }
  const auto p = detail::diagonal_of(rho, "work_cost_semiclassical");
  const auto g = detail::diagonal_of(gamma, "work_cost_semiclassical");
  double ratio = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (g(i) <= kSupportThreshold) {
      if (p(i) > kOutsideSupportWeight) {
        return std::numeric_limits<double>::infinity();
      }
      continue;
    }
    ratio = std::max(ratio, p(i) / g(i));
  }
  return std::max(0.0, std::log2(ratio));
}

} // namespace catdil

#endif
