#include "gpe/harness.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "gpe/error.hpp"

namespace gpe {

GpeProblem model_problem_1(int n_cells) {
  Potential v;
  v.quad_coeff = 0.25;
  v.sin_amp = 1.0;
  v.sin_k = 2.0;
  return GpeProblem(build_mesh(-2.0, 2.0, n_cells), v, 5.0);
}

GpeProblem model_problem_2(int n_cells) {
  Potential v;
  v.quad_coeff = 0.5;
  return GpeProblem(build_mesh(-16.0, 16.0, n_cells), v, 400.0);
}

GroundState reference_solve(const GpeProblem& problem, std::uint64_t seed,
                            double tol, int max_iter) {
  SchemeConfig cfg;
  cfg.scheme = Scheme::Damped;
  cfg.line_search = true;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.seed = seed;
  auto [gs, trace] = run(problem, cfg);
  if (!trace.converged) {
    throw Error(ErrorKind::MaxIterExceeded,
                "max-iter-exceeded: reference solve did not reach tol " +
                    format_real(tol));
  }
  return gs;
}

ContractionRates contraction_rates(const std::vector<double>& errors,
                                   double cutoff) {
  ContractionRates out;
  out.r.assign(errors.size(), kNaN);
  for (std::size_t n = 1; n < errors.size(); ++n) {
    const double prev = errors[n - 1];
    if (std::isfinite(prev) && prev > cutoff && std::isfinite(errors[n])) {
      out.r[n] = errors[n] / prev;
      ++out.valid;
    }
  }
  if (out.valid < 6) {
    throw Error(ErrorKind::InsufficientData,
                "insufficient-data: " + std::to_string(out.valid) +
                    " valid contraction ratios, need 6");
  }
  double sum = 0.0;
  int taken = 0;
  for (std::size_t n = out.r.size(); n-- > 0 && taken < 5;) {
    if (std::isfinite(out.r[n])) {
      sum += out.r[n];
      ++taken;
    }
  }
  out.terminal_rate = sum / taken;
  return out;
}

ContractionRates contraction_rates(const IterationTrace& trace, double cutoff) {
  std::vector<double> errors;
  errors.reserve(trace.records.size());
  for (const auto& rec : trace.records) errors.push_back(rec.h1_error);
  return contraction_rates(errors, cutoff);
}

double predicted_rate(const GpeProblem& problem, const GroundState& reference,
                      const SpectralReport& report, const SchemeConfig& config) {
  switch (config.scheme) {
    case Scheme::Basic: return report.rate_basic;
    case Scheme::Gfdn: return report.rate_gfdn(config.tau);
    case Scheme::Damped: return report.rate_damped(config.tau);
    case Scheme::Shifted: {
      const double lj = nearest_excluding_first(problem, reference, config.sigma);
      return shift_diagnostic(problem, reference, config.sigma, lj);
    }
  }
  return kNaN;
}

ExperimentCell run_cell(const GpeProblem& problem, const GroundState& reference,
                        const SpectralReport& report, const SchemeConfig& config) {
  ExperimentCell cell;
  cell.config = config;
  try {
    cell.predicted = predicted_rate(problem, reference, report, config);
  } catch (const Error&) {
    cell.predicted = kNaN;
  }
  try {
    auto [gs, trace] = run(problem, config, reference);
    cell.trace = std::move(trace);
    cell.converged = cell.trace.converged;
    try {
      cell.terminal_rate = contraction_rates(cell.trace, config.rate_cutoff).terminal_rate;
    } catch (const Error&) {
      cell.terminal_rate = kNaN;
    }
  } catch (const Error& e) {
    cell.converged = false;
    cell.error = e.what();
  }
  return cell;
}

ExperimentResult run_experiment(const std::string& problem_id,
                                const GpeProblem& problem,
                                const std::vector<SchemeConfig>& configs,
                                std::uint64_t reference_seed) {
  ExperimentResult result;
  result.problem_id = problem_id;
  result.reference = reference_solve(problem, reference_seed);
  result.report = spectral_report(problem, result.reference);
  result.cells.reserve(configs.size());
  for (const auto& cfg : configs) {
    result.cells.push_back(run_cell(problem, result.reference, result.report, cfg));
  }
  return result;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const IterationTrace& trace) {
  std::string out = kTraceCsvHeader;
  out += '\n';
  for (const auto& rec : trace.records) {
    out += std::to_string(rec.n);
    for (double v : {rec.lambda, rec.energy, rec.h1_error, rec.r, rec.tau}) {
      out += ',';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace gpe
