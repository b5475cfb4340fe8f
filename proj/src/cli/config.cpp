#include <algorithm>
#include <cmath>

#include "phasebell/cli.hpp"
#include "phasebell/grid.hpp"

namespace phasebell::cli {

namespace {

bool power_of_two(std::size_t n) { return n >= 4 && (n & (n - 1)) == 0; }

}  // namespace

void ExperimentConfig::validate() const {
  static const std::vector<std::string> commands{"classical-counterexample", "quantum-violation", "operator-checks",
                                                 "three-marginal", "wigner", "selftest"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    throw Error("unknown command '" + command + "'");
  }
  if (n && !power_of_two(*n)) throw Error("--n must be a power of two >= 4");
  if (box && !(*box > 0.0 && std::isfinite(*box))) throw Error("--box must be positive");
  for (double l : L) {
    if (!(l > 1.0) || !std::isfinite(l)) throw Error("--L values must be finite and > 1");
  }
  if (!(grid_L > 1.0) || !std::isfinite(grid_L)) throw Error("--grid-L must be finite and > 1");
  if (sign != 1 && sign != -1) throw Error("--sign must be +1 or -1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("--epsilon must lie in (0, 1)");
  grid::marginal_pair_from_string(drop_marginal);
  if (families == 0) throw Error("--families must be positive");
  if (atoms.size() != 8) throw Error("--atoms needs eight values");
  if (format != "json" && format != "csv") throw Error("--format must be json or csv");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"command", command},
                   {"n", n ? nlohmann::json(*n) : nlohmann::json(nullptr)},
                   {"box", box ? nlohmann::json(*box) : nlohmann::json(nullptr)},
                   {"state", state},
                   {"pattern", pattern},
                   {"L", L},
                   {"grid_L", grid_L},
                   {"sign", sign},
                   {"seed", seed},
                   {"epsilon", epsilon},
                   {"drop_marginal", drop_marginal},
                   {"families", families},
                   {"tamper", tamper},
                   {"atoms", atoms},
                   {"out", out},
                   {"format", format}};
  return j;
}

}  // namespace phasebell::cli
