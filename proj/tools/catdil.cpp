#include <cstdint>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "catdil/catdil.hpp"

namespace {

enum ExitCode : int { kPass = 0, kUsage = 2, kIo = 3, kNumerical = 4 };

std::string render(const catdil::ScenarioReport &r, const std::string &format) {
  if (format == "csv") {
    return catdil::render_csv(r);
  }
  if (format == "json") {
    return catdil::render_json(r);
  }
  return catdil::render_text(r);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact PPT dilution costs, broadcasts and catalytic advantage certificates"};
  app.set_version_flag("--version", std::string(catdil::kVersion));
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  std::function<catdil::ScenarioReport()> run;

  std::size_t werner_d = 2;
  auto *werner = app.add_subcommand("werner-example", "Noisy maximally entangled state and its broadcast");
  werner->add_option("--d", werner_d, "Local dimension")->capture_default_str();
  werner->callback([&] { run = [&] { return catdil::werner_example(werner_d); }; });

  double thermo_p = 0.25;
  std::size_t q_grid = 11;
  auto *thermo = app.add_subcommand("thermo-example", "Work cost sweep and midpoint-convexity violation");
  thermo->add_option("--p", thermo_p, "Excited-state population")->capture_default_str();
  thermo->add_option("--q-grid", q_grid, "Number of q grid points")->capture_default_str();
  thermo->callback([&] { run = [&] { return catdil::thermo_example(thermo_p, q_grid); }; });

  std::size_t dmax_d = 2;
  double lam = 0.5;
  auto *dmax = app.add_subcommand("dmax-ppt", "D_max distance to PPT for isotropic states");
  dmax->add_option("--d", dmax_d, "Local dimension")->capture_default_str();
  dmax->add_option("--lam", lam, "Weight on the maximally entangled state")->capture_default_str();
  dmax->callback([&] { run = [&] { return catdil::dmax_ppt(dmax_d, lam); }; });

  catdil::SynthesizeRequest synth_req;
  std::string synth_out;
  auto *synth = app.add_subcommand("synthesize", "Search for a PPT operation mapping Phi_2^m to a target");
  synth->add_option("--m", synth_req.m, "Input copies of Phi_2")->capture_default_str();
  synth->add_option("--target", synth_req.target, "Target state name")->capture_default_str();
  synth->add_option("--tol", synth_req.tol, "Residual tolerance")->capture_default_str();
  synth->add_option("--max-iter", synth_req.max_iter, "Iteration cap")->capture_default_str();
  synth->add_option("--out", synth_out, "Write the feasible Choi operator to this file");
  synth->callback([&] {
    if (!synth_out.empty()) {
      synth_req.output_path = synth_out;
    }
    run = [&] { return catdil::synthesize(synth_req); };
  });

  std::string mu_path;
  std::string rho_path;
  std::size_t bc_n = 2;
  double bc_tol = 1e-9;
  auto *vb = app.add_subcommand("verify-broadcast", "Check the marginals of a candidate broadcast");
  vb->add_option("--mu", mu_path, "Broadcast operator file")->required();
  vb->add_option("--rho", rho_path, "Target state file")->required();
  vb->add_option("--n", bc_n, "Number of copies")->capture_default_str();
  vb->add_option("--tol", bc_tol, "Trace-distance tolerance")->capture_default_str();
  vb->callback([&] { run = [&] { return catdil::verify_broadcast_files(mu_path, rho_path, bc_n, bc_tol); }; });

  std::size_t proto_d = 2;
  std::size_t proto_n = 1;
  double proto_tol = 1e-10;
  auto *proto = app.add_subcommand("protocol", "Run the broadcast/swap catalytic protocol");
  proto->add_option("--d", proto_d, "Local dimension")->capture_default_str();
  proto->add_option("--n", proto_n, "Copies per block")->capture_default_str();
  proto->add_option("--tol", proto_tol, "Marginal tolerance")->capture_default_str();
  proto->callback([&] { run = [&] { return catdil::protocol(proto_d, proto_n, proto_tol); }; });

  std::size_t rig_d = 2;
  std::size_t rig_starts = 50;
  std::uint64_t seed = 1;
  double rig_tol = 1e-6;
  auto *rig = app.add_subcommand("purity-rigidity", "Sample 2-copy broadcasts of Phi_d");
  rig->add_option("--d", rig_d, "Local dimension")->capture_default_str();
  rig->add_option("--starts", rig_starts, "Random starts")->capture_default_str();
  rig->add_option("--seed", seed, "RNG seed")->capture_default_str();
  rig->add_option("--tol", rig_tol, "Trace-distance tolerance")->capture_default_str();
  rig->callback([&] { run = [&] { return catdil::purity_rigidity_scenario(rig_d, rig_starts, seed, rig_tol); }; });

  std::string export_name;
  std::string export_out;
  auto *exp = app.add_subcommand("export", "Write a named state in the interchange format");
  exp->add_option("--state", export_name, "phi-<d>, noise-<d>, noisy-phi-<d> or broadcast-<d>")->required();
  exp->add_option("--out", export_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (exp->parsed()) {
      catdil::write_operator(export_out, catdil::named_state(export_name));
      return kPass;
    }
    const auto report = run();
    std::cout << render(report, format);
    return report.passed() ? kPass : kNumerical;
  } catch (const catdil::IoError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const catdil::InvalidArgument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const catdil::ResourceLimit &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
