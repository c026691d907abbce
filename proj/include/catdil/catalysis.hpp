#ifndef CATDIL_CATALYSIS_HPP
#define CATDIL_CATALYSIS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catdil/broadcast.hpp"
#include "catdil/measures.hpp"
#include "catdil/operator.hpp"
#include "catdil/states.hpp"

namespace catdil {

/// m ebits spent on n target copies. The broadcast protocol turns n copies
/// of a 2-copy broadcast into 2n copies of the target, hence m / (2n).
class RateRecord {
public:
  RateRecord(std::size_t m, std::size_t n) : m_(m), n_(n) {
    if (n < 1) {
      detail::fail("RateRecord", "target copy count must be >= 1");
    }
  }

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  double rate() const { return static_cast<double>(m_) / static_cast<double>(n_); }
  double catalytic_rate() const { return static_cast<double>(m_) / (2.0 * static_cast<double>(n_)); }

private:
  std::size_t m_;
  std::size_t n_;
};

struct ProtocolStage {
  std::string label;
  std::vector<std::string> slots; ///< one label per block of target-shaped factors
  DensityOperator state;
};

struct ProtocolTrace {
  std::vector<ProtocolStage> stages;
  DensityOperator final_catalyst;
  DensityOperator final_system;
  double catalyst_residual = 0.0; ///< trace distance of the returned catalyst to rho^n
  double system_residual = 0.0;   ///< trace distance of the system to rho^(2n)
  double tol = 0.0;

  bool exact() const { return catalyst_residual <= tol && system_residual <= tol; }
};

/// Matrix entry budget (dimension squared) for a protocol instance.
inline constexpr std::size_t kProtocolEntryBudget = std::size_t{1} << 16;

/// Runs the broadcast-and-swap catalytic protocol at the state level. The
/// system holds mu^n on slots (S_j, S'_j), the catalyst rho^n on C_j; S'_j
/// is swapped with C_j, after which the catalyst is returned as rho^n and
/// the system carries rho^(2n).
inline ProtocolTrace run_broadcast_swap_protocol(const DensityOperator &mu, const DensityOperator &rho, std::size_t n = 1,
                                        double tol = 1e-10) {
  if (n < 1) {
    detail::fail("run_broadcast_swap_protocol", "n must be >= 1");
  }
  if (!verify_broadcast(mu, rho, 2).is_broadcast) {
    detail::fail("run_broadcast_swap_protocol", "mu is not a 2-copy broadcast of rho");
  }
  double total = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    total *= static_cast<double>(mu.dimension()) * static_cast<double>(rho.dimension());
  }
  if (total * total > static_cast<double>(kProtocolEntryBudget)) {
    throw ResourceLimit("run_broadcast_swap_protocol: global dimension " + std::to_string(static_cast<long long>(total)) +
                        " exceeds the dense entry budget");
  }

  const std::size_t k = rho.shape().size();
  std::vector<std::string> system_slots;
  std::vector<std::string> catalyst_slots;
  for (std::size_t j = 1; j <= n; ++j) {
    system_slots.push_back("S" + std::to_string(j));
    system_slots.push_back("S'" + std::to_string(j));
    catalyst_slots.push_back("C" + std::to_string(j));
  }
  auto all_slots = system_slots;
  all_slots.insert(all_slots.end(), catalyst_slots.begin(), catalyst_slots.end());

  const auto catalyst = tensor_power(rho, n);
  const auto joint = tensor(tensor_power(mu, n), catalyst);

  // block order after the swap: S'_j <-> C_j
  std::vector<std::size_t> blocks(3 * n);
  for (std::size_t b = 0; b < 3 * n; ++b) {
    blocks[b] = b;
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::swap(blocks[2 * j + 1], blocks[2 * n + j]);
  }
  std::vector<std::size_t> perm;
  for (auto b : blocks) {
    for (std::size_t f = 0; f < k; ++f) {
      perm.push_back(b * k + f);
    }
  }
  const auto swapped = permute_factors(joint, perm);

  std::vector<std::size_t> system_factors(2 * n * k);
  for (std::size_t f = 0; f < 2 * n * k; ++f) {
    system_factors[f] = f;
  }
  std::vector<std::size_t> catalyst_factors(n * k);
  for (std::size_t f = 0; f < n * k; ++f) {
    catalyst_factors[f] = 2 * n * k + f;
  }
  auto final_catalyst = partial_trace(swapped, catalyst_factors);
  auto final_system = partial_trace(swapped, system_factors);
  const double cat_res = trace_distance(final_catalyst.op(), catalyst.op());
  const double sys_res = trace_distance(final_system.op(), tensor_power(rho, 2 * n).op());

  std::vector<ProtocolStage> stages;
  stages.push_back({"catalyst prepared", catalyst_slots, catalyst});
  stages.push_back({"dilution output alongside catalyst", all_slots, joint});
  stages.push_back({"after swapping S' and C", all_slots, swapped});
  return {std::move(stages), std::move(final_catalyst), std::move(final_system), cat_res, sys_res, tol};
}

/// Standard exact cost against the broadcast-protocol upper bound on the
/// catalytic cost.
struct AdvantageCertificate {
  std::string theory;
  CostValue cost_standard;
  double cost_upper_catalytic = std::numeric_limits<double>::infinity();
  Applicability catalytic_applicability = Applicability::undefined;
  double gap = std::numeric_limits<double>::quiet_NaN(); ///< cost_standard.bits - cost_upper_catalytic
  std::optional<BinegativityReport> gate_rho;
  std::optional<BinegativityReport> gate_mu;
  bool valid = false; ///< both costs carry exact formulas (and both gates pass, for entanglement)
};

inline AdvantageCertificate catalytic_cost_upper_bound(const DensityOperator &rho, const DensityOperator &mu,
                                                       double tol = 1e-9) {
  if (!verify_broadcast(mu, rho, 2).is_broadcast) {
    detail::fail("catalytic_cost_upper_bound", "mu is not a 2-copy broadcast of rho");
  }
  AdvantageCertificate cert;
  cert.theory = "ppt-entanglement";
  cert.gate_rho = binegativity(rho, tol);
  cert.gate_mu = binegativity(mu, tol);
  if (cert.gate_rho->positive) {
    cert.cost_standard = {log_negativity(rho), Applicability::exact_formula};
  }
  if (cert.gate_mu->positive) {
    cert.cost_upper_catalytic = 0.5 * log_negativity(mu);
    cert.catalytic_applicability = Applicability::exact_formula;
  }
  cert.valid = cert.gate_rho->positive && cert.gate_mu->positive;
  if (cert.valid) {
    cert.gap = cert.cost_standard.bits - cert.cost_upper_catalytic;
  }
  return cert;
}

/// Exact PPT entanglement cost; throws outside positive binegativity.
struct PptCostModel {
  double tol = 1e-9;

  std::string_view name() const { return "ppt-entanglement"; }

  double operator()(const DensityOperator &x) const {
    const auto c = exact_ppt_cost(x, tol);
    if (c.applicability != Applicability::exact_formula) {
      detail::fail("PptCostModel", "state has negative binegativity; exact-cost formula does not apply");
    }
    return c.bits;
  }
};

/// Exact work cost of semiclassical states against gamma^(copies).
struct WorkCostModel {
  DensityOperator gamma;

  std::string_view name() const { return "work-cost"; }

  double operator()(const DensityOperator &x) const {
    const std::size_t per = gamma.shape().size();
    if (per == 0 || x.shape().size() % per != 0) {
      detail::fail("WorkCostModel", "state is not a power of the Gibbs shape");
    }
    return work_cost_semiclassical(x, tensor_power(gamma, x.shape().size() / per));
  }
};

struct NonconvexityWitness {
  DensityOperator sigma0;
  DensityOperator sigma1;
  DensityOperator rho; ///< midpoint
  double cost0 = 0.0;
  double cost1 = 0.0;
  double cost_mid = 0.0;
  double violation = 0.0; ///< cost_mid - (cost0 + cost1) / 2
  std::optional<DensityOperator> broadcast;
  std::optional<double> cost_broadcast;
  std::optional<bool> chain_holds; ///< cost(mu) <= cost0 + cost1 < 2 cost_mid

  bool is_witness() const { return violation > 0.0; }
};

/// Midpoint-convexity test. A positive violation also builds the symmetric
/// broadcast mu of the midpoint and checks the chained inequality.
template <typename CostModel>
NonconvexityWitness nonconvexity_witness(const DensityOperator &s0, const DensityOperator &s1,
                                         const CostModel &cost, double chain_tol = 1e-10) {
  auto mid = mix(0.5, s0, s1);
  NonconvexityWitness w{s0, s1, mid};
  w.cost0 = cost(s0);
  w.cost1 = cost(s1);
  w.cost_mid = cost(mid);
  w.violation = w.cost_mid - 0.5 * (w.cost0 + w.cost1);
  if (w.violation > 0.0) {
    auto mu = symmetric_two_broadcast(s0, s1);
    w.cost_broadcast = cost(mu);
    w.chain_holds = *w.cost_broadcast <= w.cost0 + w.cost1 + chain_tol &&
                    w.cost0 + w.cost1 < 2.0 * w.cost_mid - chain_tol;
    w.broadcast = std::move(mu);
  }
  return w;
}

inline NonconvexityWitness nonconvexity_witness(const DensityOperator &s0, const DensityOperator &s1) {
  return nonconvexity_witness(s0, s1, PptCostModel{});
}

/// 2 E(rho) - E(mu); positive values exhibit a failure of strong
/// superadditivity with rho_12 = mu.
inline double superadditivity_violation(const DensityOperator &rho, const DensityOperator &mu, double tol = 1e-9) {
  if (!verify_broadcast(mu, rho, 2).is_broadcast) {
    detail::fail("superadditivity_violation", "mu is not a 2-copy broadcast of rho");
  }
  const PptCostModel cost{tol};
  return 2.0 * cost(rho) - cost(mu);
}

/// rho = |0><0|/2 + gamma/2 against its symmetric broadcast. The standard
/// cost is W(rho); the catalytic bound is W(mu || gamma (x) gamma) / 2.
inline AdvantageCertificate thermo_advantage(double p) {
  const auto gamma = gibbs_qubit(p);
  const auto ground = basis_state(FactorShape::plain(2), 0);
  const auto rho = classical_mix(0.5, p);
  const auto mu = symmetric_two_broadcast(ground, gamma);
  if (!verify_broadcast(mu, rho, 2).is_broadcast) {
    detail::fail("thermo_advantage", "symmetric broadcast failed marginal check");
  }
  const WorkCostModel cost{gamma};
  AdvantageCertificate cert;
  cert.theory = "work-cost";
  cert.cost_standard = {cost(rho), Applicability::exact_formula};
  cert.cost_upper_catalytic = 0.5 * cost(mu);
  cert.catalytic_applicability = Applicability::exact_formula;
  cert.gap = cert.cost_standard.bits - cert.cost_upper_catalytic;
  cert.valid = true;
  return cert;
}

/// |log2 SR(psi (x) phi) - log2 SR(psi) - log2 SR(phi)| for pure inputs.
inline double pure_additivity_check(const DensityOperator &psi, const DensityOperator &phi, double tol = 1e-9) {
  const double joint = exact_locc_cost_pure(tensor(psi, phi), tol);
  return std::abs(joint - exact_locc_cost_pure(psi, tol) - exact_locc_cost_pure(phi, tol));
}

/// Samples the 2-copy broadcasts of Phi_d and reports whether they all
/// collapse to Phi_d (x) Phi_d: with a single broadcast available, the
/// catalytic distillation bound reduces to the standard one.
inline bool distillation_no_advantage_check(std::size_t d, std::size_t starts = 8, std::uint64_t seed = 1) {
  return purity_rigidity(max_entangled(d), starts, seed).rigid;
}

/// The noisy maximally entangled state and its symmetric broadcast:
/// rho = Phi_d/2 + 1/(2 d^2), mu = (Phi_d (x) 1/d^2 + 1/d^2 (x) Phi_d)/2.
struct NoisyPhiInstance {
  DensityOperator rho;
  DensityOperator mu;
};

inline NoisyPhiInstance noisy_phi_instance(std::size_t d) {
  const auto phi = max_entangled(d);
  const auto noise = maximally_mixed(phi.shape());
  return {isotropic({d, 0.5}), symmetric_two_broadcast(phi, noise)};
}

} // namespace catdil

#endif
