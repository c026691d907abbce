#ifndef CATDIL_TESTS_ORACLE_HPP
#define CATDIL_TESTS_ORACLE_HPP

// Slow reference implementations used only by the tests. They share no code
// with the library beyond the Matrix type.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "catdil/operator.hpp"

namespace oracle {

using catdil::cplx;
using catdil::Matrix;

namespace frozen {
// log2((d^2 + 1)/d) - 1, d = 2..8
inline constexpr double kNoisyPhiLogNeg[] = {
    0.32192809488736235, 0.7369655941662063, 1.0874628412503395, 1.37851162325373,
    1.6244908649077936,  1.8365012677171206, 2.0223678130284544,
};
inline constexpr double kLog2SevenSixths = 0.22239242133644802;
inline constexpr double kHalfLog2FourThirds = 0.20751874963942188;
inline constexpr double kThermoViolationQuarter = 0.014873671697026136;
inline constexpr double kThermoGapPoint4 = 0.04655470219574087;
} // namespace frozen

/// Per-leg dimensions (a1, b1, a2, b2, ...).
inline std::vector<std::size_t> leg_dims(const catdil::FactorShape &shape) {
  std::vector<std::size_t> dims;
  for (const auto &f : shape.factors()) {
    dims.push_back(f.a);
    dims.push_back(f.b);
  }
  return dims;
}

inline std::vector<std::size_t> to_digits(std::size_t index, const std::vector<std::size_t> &dims) {
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
  return digits;
}

inline std::size_t from_digits(const std::vector<std::size_t> &digits, const std::vector<std::size_t> &dims) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    index = index * dims[k] + digits[k];
  }
  return index;
}

/// Swaps every B-leg digit between row and column.
inline Matrix partial_transpose(const catdil::FactorShape &shape, const Matrix &m) {
  const auto dims = leg_dims(shape);
  const auto n = static_cast<std::size_t>(m.rows());
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      auto rd = to_digits(r, dims);
      auto cd = to_digits(c, dims);
      for (std::size_t k = 1; k < dims.size(); k += 2) {
        std::swap(rd[k], cd[k]);
      }
      out(static_cast<Eigen::Index>(from_digits(rd, dims)), static_cast<Eigen::Index>(from_digits(cd, dims))) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

/// Keeps the listed factors (in ascending order) and sums over the rest.
inline Matrix partial_trace(const catdil::FactorShape &shape, const Matrix &m, const std::vector<std::size_t> &keep) {
  const auto dims = leg_dims(shape);
  std::vector<bool> kept_leg(dims.size(), false);
  std::vector<std::size_t> out_dims;
  for (std::size_t f = 0; f < shape.size(); ++f) {
    if (std::find(keep.begin(), keep.end(), f) != keep.end()) {
      kept_leg[2 * f] = kept_leg[2 * f + 1] = true;
      out_dims.push_back(dims[2 * f]);
      out_dims.push_back(dims[2 * f + 1]);
    }
  }
  std::size_t out_n = 1;
  for (auto d : out_dims) {
    out_n *= d;
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(out_n), static_cast<Eigen::Index>(out_n));
  const auto n = static_cast<std::size_t>(m.rows());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const auto rd = to_digits(r, dims);
      const auto cd = to_digits(c, dims);
      bool diagonal_in_traced = true;
      std::vector<std::size_t> ro, co;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (kept_leg[k]) {
          ro.push_back(rd[k]);
          co.push_back(cd[k]);
        } else if (rd[k] != cd[k]) {
          diagonal_in_traced = false;
        }
      }
      if (diagonal_in_traced) {
        out(static_cast<Eigen::Index>(from_digits(ro, out_dims)), static_cast<Eigen::Index>(from_digits(co, out_dims))) +=
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return out;
}

/// Cyclic Jacobi on the real embedding [[Re, -Im], [Im, Re]]; every
/// eigenvalue of H appears twice there. Ascending order.
inline std::vector<double> eigenvalues(const Matrix &h) {
  const auto n = h.rows();
  Eigen::MatrixXd a(2 * n, 2 * n);
  a << h.real(), -h.imag(), h.imag(), h.real();
  const auto m = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        off += a(p, q) * a(p, q);
      }
    }
    if (off < 1e-30) {
      break;
    }
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        if (std::abs(a(p, q)) < 1e-300) {
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < m; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < m; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> all(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    all[static_cast<std::size_t>(k)] = a(k, k);
  }
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (std::size_t k = 0; k < all.size(); k += 2) {
    out.push_back(0.5 * (all[k] + all[k + 1]));
  }
  return out;
}

inline double trace_norm(const Matrix &h) {
  double s = 0.0;
  for (double v : eigenvalues(h)) {
    s += std::abs(v);
  }
  return s;
}

inline double log_negativity(const catdil::FactorShape &shape, const Matrix &rho) {
  return std::log2(trace_norm(partial_transpose(shape, rho)));
}

/// Smallest log2 t with t sigma - rho PSD, by bisection. Needs sigma > 0.
inline double d_max(const Matrix &rho, const Matrix &sigma) {
  auto feasible = [&](double t) { return eigenvalues(t * sigma - rho).front() >= -1e-13; };
  double lo = 0.0;
  double hi = 1.0;
  while (!feasible(hi)) {
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return std::max(0.0, std::log2(hi));
}

} // namespace oracle

#endif
