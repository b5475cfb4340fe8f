#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "phasebell/cli.hpp"

namespace {

void add_common(CLI::App* sub, phasebell::cli::ExperimentConfig& cfg) {
  sub->add_option("--n", cfg.n, "points per axis (power of two)");
  sub->add_option("--box", cfg.box, "half-width of the box [-box, box]");
  sub->add_option("--state", cfg.state, "gaussian | ho:n1,n2 | psi+:L | psi-:L | random:seed | file:path");
  sub->add_option("--pattern", cfg.pattern, "theta | half:c1,c2,c1p,c2p");
  sub->add_option("--L", cfg.L, "cutoff L (repeatable)")->allow_extra_args(false);
  sub->add_option("--grid-L", cfg.grid_L, "cutoff of the grid-route cross-check");
  sub->add_option("--sign", cfg.sign, "+1 or -1")->check(CLI::IsMember({1, -1}));
  sub->add_option("--seed", cfg.seed);
  sub->add_option("--epsilon", cfg.epsilon, "support threshold for rho0");
  sub->add_option("--drop-marginal", cfg.drop_marginal)->check(CLI::IsMember({"qq", "qp", "pq", "pp"}));
  sub->add_option("--families", cfg.families, "number of random F families");
  sub->add_option("--tamper", cfg.tamper, "state whose marginal replaces the last chain member");
  sub->add_option("--atoms", cfg.atoms, "a1 a2 a1' a2' b1 b2 b1' b2'")->expected(8);
  sub->add_option("--out", cfg.out, "output path (default: $PHASEBELL_OUT/<command> or stdout)");
  sub->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space Bell inequality experiments"};
  app.require_subcommand(1);
  phasebell::cli::ExperimentConfig cfg;
  for (const char* name :
       {"classical-counterexample", "quantum-violation", "operator-checks", "three-marginal", "wigner", "selftest"}) {
    add_common(app.add_subcommand(name), cfg);
  }
  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    const auto report = phasebell::cli::run(cfg);
    phasebell::cli::emit(report);
    return report.pass() ? EXIT_SUCCESS : EXIT_FAILURE;
  } catch (const std::exception& e) {
    std::cerr << "phasebell: " << e.what() << "\n";
    return 2;
  }
}
