// Acceptance run: one [PASS]/[FAIL] line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "catdil/catdil.hpp"
#include "support/oracle.hpp"
#include "support/properties.hpp"

using namespace catdil;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<bool(std::string &)> run;
};

bool ac1(std::string &detail) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::size_t d = 2; d <= 8; ++d) {
    const double ln = log_negativity(isotropic({d, 0.5}));
    worst = std::max(worst, std::abs(ln - oracle::frozen::kNoisyPhiLogNeg[d - 2]));
    worst = std::max(worst, std::abs(ln - noisy_phi_log_negativity(d)));
  }
  const double elapsed = seconds_since(t0);
  detail = "max |L_N - closed form| = " + format_number(worst) + ", " + format_number(elapsed) + " s";
  return worst <= 1e-9 && elapsed < 5.0;
}

bool ac2(std::string &detail) {
  double worst = 0.0;
  for (std::size_t d = 2; d <= 3; ++d) {
    const auto inst = noisy_phi_instance(d);
    if (!verify_broadcast(inst.mu, inst.rho, 2).is_broadcast) {
      detail = "mu is not a broadcast at d=" + std::to_string(d);
      return false;
    }
    worst = std::max(worst, std::abs(log_negativity(inst.mu) - log_negativity(inst.rho)));
  }
  detail = "max |L_N(mu) - L_N(rho)| = " + format_number(worst);
  return worst <= 1e-9;
}

bool ac3(std::string &detail) {
  double lowest = 1.0;
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto inst = noisy_phi_instance(d);
    lowest = std::min({lowest, binegativity(inst.rho).min_eigenvalue, binegativity(inst.mu).min_eigenvalue});
  }
  detail = "min eigenvalue of |X^G|^G over rho, mu, d=2..5: " + format_number(lowest);
  return lowest >= -1e-9;
}

bool ac4(std::string &detail) {
  double worst = 0.0;
  bool valid = true;
  for (std::size_t d = 2; d <= 3; ++d) {
    const auto inst = noisy_phi_instance(d);
    const auto cert = catalytic_cost_upper_bound(inst.rho, inst.mu);
    valid = valid && cert.valid;
    worst = std::max(worst, std::abs(cert.gap - 0.5 * oracle::frozen::kNoisyPhiLogNeg[d - 2]));
  }
  detail = "max |gap - L_N/2| = " + format_number(worst);
  return valid && worst <= 1e-9;
}

bool ac5(std::string &detail) {
  const auto report = protocol(2, 1);
  const auto inst = noisy_phi_instance(2);
  const auto trace = run_broadcast_swap_protocol(inst.mu, inst.rho, 1);
  const double cat = trace_distance(trace.final_catalyst, inst.rho);
  const double sys = trace_distance(trace.final_system, tensor(inst.rho, inst.rho));
  detail = "catalyst " + format_number(cat) + ", system " + format_number(sys);
  return report.passed() && cat <= 1e-10 && sys <= 1e-10;
}

bool ac6(std::string &detail) {
  const auto inst = noisy_phi_instance(2);
  const double v = superadditivity_violation(inst.rho, inst.mu);
  detail = "2E(rho) - E(mu) = " + format_number(v);
  return std::abs(v - oracle::frozen::kNoisyPhiLogNeg[0]) <= 1e-9 && v > 0.3;
}

bool ac7(std::string &detail) {
  const auto gamma = gibbs_qubit(0.25);
  const auto w = nonconvexity_witness(basis_state(FactorShape::plain(2), 0), gamma, WorkCostModel{gamma});
  const double expected = oracle::frozen::kLog2SevenSixths - oracle::frozen::kHalfLog2FourThirds;
  bool gaps = true;
  std::string gap_text;
  for (double p : {0.1, 0.25, 0.4}) {
    const auto cert = thermo_advantage(p);
    gaps = gaps && cert.valid && cert.gap > 0.0;
    gap_text += " " + format_number(cert.gap);
  }
  detail = "violation " + format_number(w.violation) + "; gaps" + gap_text;
  return std::abs(w.violation - expected) <= 1e-12 &&
         std::abs(w.violation - oracle::frozen::kThermoViolationQuarter) <= 1e-12 && gaps;
}

bool ac8(std::string &detail) {
  double worst = 0.0;
  for (std::size_t d = 2; d <= 3; ++d) {
    for (double lam : {0.5, 0.75, 1.0}) {
      const auto rho = isotropic({d, lam});
      worst = std::max(worst, std::abs(d_max_to_ppt_isotropic(rho) - log_negativity(rho)));
    }
  }
  detail = "max |D_max(rho||PPT) - L_N| = " + format_number(worst);
  return worst <= 1e-6;
}

bool ac9(std::string &detail) {
  const auto rep = purity_rigidity(max_entangled(2), 50, 1, 1e-6);
  detail = std::to_string(rep.distances.size()) + " starts, max distance " + format_number(rep.max_distance());
  return rep.rigid && rep.distances.size() == 50;
}

bool ac10(std::string &detail) {
  bool ok = true;
  detail.clear();
  const std::pair<std::size_t, DensityOperator> feasible[] = {{1, isotropic({2, 0.5})},
                                                              {1, noisy_phi_instance(2).mu}};
  for (const auto &[m, target] : feasible) {
    const auto t0 = Clock::now();
    const auto rep = synthesize_ppt_dilution(m, target);
    const double elapsed = seconds_since(t0);
    const bool good = rep.converged && rep.max_residual() <= 1e-6 && rep.iterations <= 20000 && elapsed < 60.0 &&
                      verify_ppt_operation(*rep.feasible_point, 1e-6).converged;
    ok = ok && good;
    detail += "dim " + std::to_string(target.dimension()) + ": " + std::to_string(rep.iterations) + " it, " +
              format_number(elapsed) + " s; ";
  }
  const auto npt = synthesize_ppt_dilution(0, isotropic({2, 0.5}));
  const bool flagged = !npt.converged && npt.infeasible_flagged && npt.npt_witness &&
                       std::abs(*npt.npt_witness + 0.125) <= 1e-9;
  detail += "m=0 witness " + (npt.npt_witness ? format_number(*npt.npt_witness) : std::string("none"));
  return ok && flagged;
}

bool ac11(std::string &detail) {
  bool ok = true;
  detail.clear();
  for (const auto &o : props::acceptance_suite(200)) {
    ok = ok && o.ok() && o.cases == 200;
    detail += o.name + " " + std::to_string(o.failures) + "/" + std::to_string(o.cases) + "; ";
  }
  return ok;
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "noisy-Phi log-negativity closed form, d=2..8", ac1},
      {"AC2", "L_N(mu) = L_N(rho), d=2,3", ac2},
      {"AC3", "binegativity gates, d=2..5", ac3},
      {"AC4", "catalytic gap = L_N/2, d=2,3", ac4},
      {"AC5", "protocol marginals exact", ac5},
      {"AC6", "superadditivity violation, d=2", ac6},
      {"AC7", "thermodynamic non-convexity and gaps", ac7},
      {"AC8", "D_max to PPT equals L_N", ac8},
      {"AC9", "purity rigidity, 50 starts", ac9},
      {"AC10", "PPT dilution synthesis", ac10},
      {"AC11", "property suites, 200 cases each", ac11},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    std::string detail;
    bool pass = false;
    try {
      pass = c.run(detail);
    } catch (const std::exception &e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s %s (%s)\n", pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), detail.c_str());
    failed += pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
