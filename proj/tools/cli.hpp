#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wholm/core.hpp"
#include "wholm/montecarlo.hpp"

namespace wholm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kPropertyFailure = 3 };

/// args excludes the program name. Never throws; errors go to `err` as one
/// line and are reflected in the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

TestingProblem load_problem_csv(const std::string& path, double alpha);

/// Cartesian product of list-valued keys; everything else is shared.
struct SimulationGrid {
  SimulationConfig base;
  std::vector<std::size_t> m;
  std::vector<double> pi0;
  std::vector<double> rho;
  std::vector<WeightScenario> scenario;

  std::vector<SimulationConfig> cells() const;
};

/// key=value lines; '#' starts a comment. Keys: m, pi0, rho_list, n, mu_alt,
/// alpha, reps, scenario, seed. m, pi0, rho_list and scenario accept comma
/// lists. Throws ValidationError naming the line.
SimulationGrid parse_simulation_config(std::istream& in);

}  // namespace wholm::cli
