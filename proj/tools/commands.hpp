#pragma once

#include <iosfwd>

#include "gpe/config.hpp"

namespace gpe::cli {

enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kConfigFailure = 2 };

// Each command writes its report to `out`, diagnostics to `err`, and files
// into spec.experiment.output when it is set.
int cmd_solve(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_rates(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace gpe::cli
