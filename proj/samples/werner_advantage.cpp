// Prints the catalytic gap for the noisy maximally entangled state.

#include <cstdio>

#include "catdil/catdil.hpp"

int main() {
  using namespace catdil;
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto inst = noisy_phi_instance(d);
    const auto cert = catalytic_cost_upper_bound(inst.rho, inst.mu);
    std::printf("d=%zu  E(rho)=%.9f  E(mu)/2=%.9f  gap=%.9f  %s\n", d, cert.cost_standard.bits,
                cert.cost_upper_catalytic, cert.gap, cert.valid ? "certified" : "not certified");
  }

  const auto trace = run_broadcast_swap_protocol(noisy_phi_instance(2).mu, noisy_phi_instance(2).rho);
  for (const auto &stage : trace.stages) {
    std::printf("%-24s dim %zu\n", stage.label.c_str(), stage.state.dimension());
  }
  std::printf("catalyst residual %.3g, system residual %.3g\n", trace.catalyst_residual, trace.system_residual);
  return trace.exact() ? 0 : 1;
}
