#include <gtest/gtest.h>

#include <cmath>

#include "catdil/catdil.hpp"
#include "support/oracle.hpp"

using namespace catdil;

TEST(RateRecord, CatalyticRateIsHalf) {
  for (std::size_t m = 0; m < 6; ++m) {
    for (std::size_t n = 1; n < 6; ++n) {
      const RateRecord r(m, n);
      EXPECT_EQ(r.catalytic_rate(), r.rate() / 2.0);
    }
  }
  EXPECT_THROW(RateRecord(1, 0), InvalidArgument);
}

TEST(Protocol, NoisyPhiInstanceIsExact) {
  const auto inst = noisy_phi_instance(2);
  const auto trace = run_broadcast_swap_protocol(inst.mu, inst.rho);
  EXPECT_TRUE(trace.exact());
  EXPECT_LE(trace.catalyst_residual, 1e-12);
  EXPECT_LE(trace.system_residual, 1e-12);
  ASSERT_EQ(trace.stages.size(), 3u);
  EXPECT_EQ(trace.stages.back().state.dimension(), 64u);
  EXPECT_LE(trace_distance(trace.final_system, tensor(inst.rho, inst.rho)), 1e-12);
}

TEST(Protocol, ProductBroadcastHasNoAdvantage) {
  const auto rho = isotropic({2, 0.5});
  const auto mu = tensor(rho, rho);
  EXPECT_TRUE(run_broadcast_swap_protocol(mu, rho).exact());
  const auto cert = catalytic_cost_upper_bound(rho, mu);
  EXPECT_TRUE(cert.valid);
  EXPECT_NEAR(cert.gap, 0.0, 1e-9);
  EXPECT_NEAR(cert.cost_upper_catalytic, cert.cost_standard.bits, 1e-9);
}

TEST(Protocol, ClassicalPurificationBroadcast) {
  const std::vector<double> probs{0.7, 0.2, 0.1};
  const auto trace = run_broadcast_swap_protocol(classical_purification(probs), classical_state(probs));
  EXPECT_TRUE(trace.exact());
}

TEST(Protocol, TwoCopyBlocksWithinBudget) {
  const std::vector<double> probs{0.5, 0.5};
  const auto trace = run_broadcast_swap_protocol(classical_purification(probs), classical_state(probs), 2);
  EXPECT_TRUE(trace.exact());
  const auto inst = noisy_phi_instance(2);
  EXPECT_THROW(run_broadcast_swap_protocol(inst.mu, inst.rho, 2), ResourceLimit);
}

TEST(Protocol, RejectsNonBroadcast) {
  const auto rho = isotropic({2, 0.5});
  EXPECT_THROW(run_broadcast_swap_protocol(tensor(rho, isotropic({2, 0.4})), rho), InvalidArgument);
}

TEST(Certificate, NoisyPhiInstances) {
  for (std::size_t d : {2u, 3u}) {
    const auto inst = noisy_phi_instance(d);
    const auto cert = catalytic_cost_upper_bound(inst.rho, inst.mu);
    const double ln = oracle::frozen::kNoisyPhiLogNeg[d - 2];
    EXPECT_TRUE(cert.valid);
    EXPECT_NEAR(cert.cost_standard.bits, ln, 1e-9);
    EXPECT_NEAR(cert.cost_upper_catalytic, ln / 2.0, 1e-9);
    EXPECT_NEAR(cert.gap, ln / 2.0, 1e-9);
  }
  const auto c2 = catalytic_cost_upper_bound(noisy_phi_instance(2).rho, noisy_phi_instance(2).mu);
  EXPECT_NEAR(c2.gap, 0.1609640, 1e-7);
  const auto c3 = catalytic_cost_upper_bound(noisy_phi_instance(3).rho, noisy_phi_instance(3).mu);
  EXPECT_NEAR(c3.cost_upper_catalytic, 0.3684828, 1e-7);
}

TEST(Certificate, GapOnlyWithPassingGates) {
  const auto rho = isotropic({2, 0.5});
  const auto cert = catalytic_cost_upper_bound(rho, tensor(rho, rho));
  EXPECT_TRUE(cert.gate_rho->positive && cert.gate_mu->positive);
  EXPECT_THROW(catalytic_cost_upper_bound(rho, tensor(rho, isotropic({2, 0.3}))), InvalidArgument);
}

TEST(NonconvexityWitness, PptExampleIsHonestNonWitness) {
  const auto phi = max_entangled(2);
  const auto w = nonconvexity_witness(phi, maximally_mixed(phi.shape()));
  EXPECT_NEAR(w.violation, oracle::frozen::kNoisyPhiLogNeg[0] - 0.5, 1e-9);
  EXPECT_FALSE(w.is_witness());
  EXPECT_FALSE(w.broadcast.has_value());
}

TEST(NonconvexityWitness, WorkCostExample) {
  const auto gamma = gibbs_qubit(0.25);
  const auto w = nonconvexity_witness(basis_state(FactorShape::plain(2), 0), gamma, WorkCostModel{gamma});
  EXPECT_NEAR(w.violation, oracle::frozen::kThermoViolationQuarter, 1e-12);
  EXPECT_NEAR(w.cost_mid, oracle::frozen::kLog2SevenSixths, 1e-12);
  EXPECT_TRUE(w.is_witness());
  ASSERT_TRUE(w.chain_holds.has_value());
  EXPECT_TRUE(*w.chain_holds);
  EXPECT_LE(*w.cost_broadcast, w.cost0 + w.cost1 + 1e-10);
}

TEST(NonconvexityWitness, EqualInputsGiveZero) {
  const auto gamma = gibbs_qubit(0.25);
  EXPECT_NEAR(nonconvexity_witness(gamma, gamma, WorkCostModel{gamma}).violation, 0.0, 1e-15);
  const auto rho = isotropic({2, 0.5});
  EXPECT_NEAR(nonconvexity_witness(rho, rho).violation, 0.0, 1e-12);
}

TEST(Superadditivity, NoisyPhiInstancesAndProduct) {
  const auto i2 = noisy_phi_instance(2);
  EXPECT_NEAR(superadditivity_violation(i2.rho, i2.mu), oracle::frozen::kNoisyPhiLogNeg[0], 1e-9);
  const auto i3 = noisy_phi_instance(3);
  EXPECT_NEAR(superadditivity_violation(i3.rho, i3.mu), oracle::frozen::kNoisyPhiLogNeg[1], 1e-9);
  EXPECT_NEAR(superadditivity_violation(i2.rho, tensor(i2.rho, i2.rho)), 0.0, 1e-9);
}

TEST(ThermoAdvantage, ClosedForms) {
  const auto c = thermo_advantage(0.25);
  EXPECT_NEAR(c.cost_standard.bits, oracle::frozen::kLog2SevenSixths, 1e-12);
  EXPECT_NEAR(c.cost_upper_catalytic, oracle::frozen::kHalfLog2FourThirds, 1e-12);
  EXPECT_NEAR(c.gap, oracle::frozen::kThermoViolationQuarter, 1e-12);
  EXPECT_NEAR(thermo_advantage(0.4).gap, oracle::frozen::kThermoGapPoint4, 1e-12);
  EXPECT_NEAR(thermo_advantage(0.4).gap, std::log2(0.8 / 0.6) - 0.5 * std::log2(1.0 / 0.6), 1e-12);
}

TEST(ThermoAdvantage, GapVanishesAsPGoesToZero) {
  double prev = thermo_advantage(0.2).gap;
  for (double p : {0.1, 0.01, 0.001, 1e-5}) {
    const double g = thermo_advantage(p).gap;
    EXPECT_GT(g, 0.0);
    EXPECT_LT(g, prev);
    prev = g;
  }
  EXPECT_LT(prev, 1e-8);
}

TEST(PureAdditivity, Examples) {
  EXPECT_NEAR(pure_additivity_check(max_entangled(2), max_entangled(3)), 0.0, 1e-12);
  EXPECT_EQ(schmidt_rank(tensor(max_entangled(2), max_entangled(3))), 6u);
  EXPECT_NEAR(pure_additivity_check(max_entangled(3), basis_state(FactorShape::bipartite(2, 2), 0)), 0.0, 1e-12);
  Vector ket = Vector::Zero(4);
  ket(0) = std::sqrt(1.0 - 1e-6);
  ket(3) = 1e-3;
  const auto psi = pure_state(FactorShape::bipartite(2, 2), ket);
  EXPECT_NEAR(pure_additivity_check(psi, max_entangled(2)), 0.0, 1e-12);
  EXPECT_EQ(schmidt_rank(tensor(psi, max_entangled(2))), 4u);
}

TEST(DistillationNoAdvantage, PureTargets) {
  EXPECT_TRUE(distillation_no_advantage_check(2));
  EXPECT_TRUE(distillation_no_advantage_check(3, 3));
  EXPECT_THROW(purity_rigidity(isotropic({2, 0.5}), 2), InvalidArgument);
}
