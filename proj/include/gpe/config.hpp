#pragma once

// Run configuration: an INI file with [problem], [scheme] and [experiment]
// sections. Unknown sections or keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpe/iterate.hpp"
#include "gpe/model.hpp"

namespace gpe {

struct ProblemSpec {
  std::string preset;  // "", "mp1" or "mp2"
  double a = -2.0;
  double b = 2.0;
  int n_cells = 1000;
  Potential potential;
  std::string potential_file;  // tabulated values, one per node
  double beta = 0.0;
};

enum class SweepParam { None, Tau, Sigma };

struct ExperimentSpec {
  std::uint64_t reference_seed = 1;
  double reference_tol = 1e-13;
  SweepParam sweep = SweepParam::None;
  std::vector<double> values;  // sweep grid
  std::vector<double> sigmas;  // shift diagnostics printed by `spectrum`
  std::string output;          // directory; empty means stdout
};

struct RunSpec {
  ProblemSpec problem;
  SchemeConfig scheme;
  ExperimentSpec experiment;
};

// Preset values for the two model problems ("mp1", "mp2").
RunSpec preset_spec(const std::string& name);

// Parses and validates a config file. Throws Error with kind ParseError
// (message carries the line number) or ValidationError (names the key).
RunSpec parse_config(const std::string& path,
                     const std::optional<std::string>& preset = std::nullopt);
RunSpec parse_config_text(const std::string& text,
                          const std::optional<std::string>& preset = std::nullopt);

// Re-checks all numeric constraints; throws ValidationError naming the key.
void validate(const RunSpec& spec);

GpeProblem build_problem(const RunSpec& spec);

}  // namespace gpe
