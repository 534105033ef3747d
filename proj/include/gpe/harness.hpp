#pragma once

// Experiment orchestration: model-problem presets, reference solves,
// contraction-rate extraction and observed-vs-predicted comparison.

#include <cstdint>
#include <string>
#include <vector>

#include "gpe/iterate.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

inline constexpr int kDefaultCells = 1000;
inline constexpr double kReferenceTol = 1e-13;

// V(x) = x^2/4 + sin(2 pi x)^2 on (-2, 2), beta = 5.
GpeProblem model_problem_1(int n_cells = kDefaultCells);
// V(x) = x^2/2 on (-16, 16), beta = 400.
GpeProblem model_problem_2(int n_cells = kDefaultCells);

// Damped iteration with line search from a positive random field.
// Throws MaxIterExceeded when the tolerance is not met.
GroundState reference_solve(const GpeProblem& problem, std::uint64_t seed = 1,
                            double tol = kReferenceTol, int max_iter = 20000);

struct ContractionRates {
  std::vector<double> r;  // r[n] = e_n / e_{n-1}; NaN when invalid (r[0] too)
  std::size_t valid = 0;
  double terminal_rate = 0.0;  // mean of the last 5 valid ratios
};

// Throws InsufficientData when fewer than 6 ratios are valid.
ContractionRates contraction_rates(const IterationTrace& trace,
                                   double cutoff = 50.0 * kReferenceTol);
// Same, from a raw error sequence.
ContractionRates contraction_rates(const std::vector<double>& errors,
                                   double cutoff = 50.0 * kReferenceTol);

struct ExperimentCell {
  SchemeConfig config;
  IterationTrace trace;
  double predicted = 0.0;
  double terminal_rate = kNaN;  // NaN when the rates are unavailable
  bool converged = false;
  std::string error;  // non-empty when the scheme itself failed
};

struct ExperimentResult {
  std::string problem_id;
  GroundState reference;
  SpectralReport report;
  std::vector<ExperimentCell> cells;
};

// Predicted asymptotic rate of a scheme from the spectral report.
double predicted_rate(const GpeProblem& problem, const GroundState& reference,
                      const SpectralReport& report, const SchemeConfig& config);

// Runs one configured scheme against the reference; scheme errors are
// captured in the cell instead of thrown.
ExperimentCell run_cell(const GpeProblem& problem, const GroundState& reference,
                        const SpectralReport& report, const SchemeConfig& config);

ExperimentResult run_experiment(const std::string& problem_id,
                                const GpeProblem& problem,
                                const std::vector<SchemeConfig>& configs,
                                std::uint64_t reference_seed = 1);

// CSV helpers (17 significant digits, '.' decimal, "nan" for missing).
std::string format_real(double v);
std::string trace_csv(const IterationTrace& trace);
inline constexpr const char* kTraceCsvHeader = "n,lambda_n,energy_n,h1_error,r_n,tau_n";

}  // namespace gpe
