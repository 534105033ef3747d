#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "gpe/error.hpp"
#include "gpe/harness.hpp"

namespace gpe::cli {

namespace fs = std::filesystem;

namespace {

int report_error(const Error& e, std::ostream& err) {
  err << e.what() << '\n';
  switch (e.kind()) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidDomain:
    case ErrorKind::NegativePotential:
      return kConfigFailure;
    default:
      return kNumericalFailure;
  }
}

// Opens <output>/<name> for writing; empty output means "use `fallback`".
class Sink {
 public:
  Sink(const RunSpec& spec, const std::string& name, std::ostream& fallback)
      : fallback_(fallback) {
    if (!spec.experiment.output.empty()) {
      fs::create_directories(spec.experiment.output);
      path_ = fs::path(spec.experiment.output) / name;
      file_.open(path_, std::ios::binary | std::ios::trunc);
      if (!file_) {
        throw Error(ErrorKind::ValidationError,
                    "validation-error: experiment.output: cannot write '" +
                        path_.string() + "'");
      }
    }
  }

  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }
  bool to_file() const { return file_.is_open(); }
  const fs::path& path() const { return path_; }

 private:
  std::ostream& fallback_;
  std::ofstream file_;
  fs::path path_;
};

GroundState reference_for(const GpeProblem& problem, const RunSpec& spec) {
  return reference_solve(problem, spec.experiment.reference_seed,
                         spec.experiment.reference_tol);
}

}  // namespace

int cmd_solve(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    validate(spec);
    const GpeProblem problem = build_problem(spec);
    const SchemeConfig& cfg = spec.scheme;
    cfg.validate();
    auto [gs, trace] = run(problem, cfg);

    out << "scheme=" << to_string(cfg.scheme) << '\n'
        << "converged=" << (trace.converged ? "true" : "false") << '\n'
        << "iterations=" << trace.iterations << '\n'
        << "lambda=" << format_real(gs.lambda) << '\n'
        << "energy=" << format_real(gs.energy) << '\n'
        << "residual=" << format_real(gs.residual) << '\n';
    if (!trace.converged) {
      err << trace.message << '\n';
      return kNumericalFailure;
    }
    if (!spec.experiment.output.empty()) {
      Sink sink(spec, "state.csv", out);
      sink.stream() << "x,u\n";
      const Mesh1D& mesh = problem.mesh();
      for (int i = 0; i <= mesh.n_cells; ++i) {
        sink.stream() << format_real(mesh.node(i)) << ','
                      << format_real(gs.u.at_node(i)) << '\n';
      }
      out << "state=" << sink.path().string() << '\n';
    }
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_rates(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    validate(spec);
    const GpeProblem problem = build_problem(spec);
    const SchemeConfig& cfg = spec.scheme;
    cfg.validate();
    const GroundState reference = reference_for(problem, spec);
    auto [gs, trace] = run(problem, cfg, reference);

    Sink sink(spec, "rates.csv", out);
    sink.stream() << trace_csv(trace);
    if (sink.to_file()) {
      out << "rates=" << sink.path().string() << '\n'
          << "iterations=" << trace.iterations << '\n';
      try {
        out << "terminal_rate="
            << format_real(contraction_rates(trace, cfg.rate_cutoff).terminal_rate)
            << '\n';
      } catch (const Error& e) {
        err << e.what() << '\n';
      }
    }
    if (!trace.converged) {
      err << trace.message << '\n';
      return kNumericalFailure;
    }
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_spectrum(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    validate(spec);
    const GpeProblem problem = build_problem(spec);
    const GroundState reference = reference_for(problem, spec);
    const SpectralReport report = spectral_report(problem, reference);

    Sink sink(spec, "spectrum.txt", out);
    std::ostream& os = sink.stream();
    os << "lambda=" << format_real(reference.lambda) << '\n'
       << "lambda1=" << format_real(report.lambda1) << '\n'
       << "lambda2=" << format_real(report.lambda2) << '\n'
       << "mu1=" << format_real(report.mu1) << '\n'
       << "abs_mu1=" << format_real(std::abs(report.mu1)) << '\n'
       << "mu_min=" << format_real(report.mu_min) << '\n'
       << "mu_max=" << format_real(report.mu_max) << '\n'
       << "rate_basic=" << format_real(report.rate_basic) << '\n'
       << "tau_crit=" << format_real(report.tau_crit) << '\n';

    const std::vector<double> taus =
        spec.experiment.sweep == SweepParam::Tau && !spec.experiment.values.empty()
            ? spec.experiment.values
            : std::vector<double>{0.1, 0.5, 1.0, 1.5, 10.0, 100.0};
    os << "tau,rate_gfdn,rate_damped,rate_damped_sharp\n";
    for (double tau : taus) {
      os << format_real(tau) << ',' << format_real(report.rate_gfdn(tau)) << ','
         << format_real(report.rate_damped(tau)) << ','
         << format_real(report.rate_damped_sharp(tau)) << '\n';
    }

    std::vector<double> sigmas = spec.experiment.sigmas;
    if (sigmas.empty() && spec.experiment.sweep == SweepParam::Sigma) {
      sigmas = spec.experiment.values;
    }
    if (!sigmas.empty()) {
      os << "sigma,lambda_j,theta_linf,theta_shift\n";
      for (double sigma : sigmas) {
        const double lj = nearest_excluding_first(problem, reference, sigma);
        os << format_real(sigma) << ',' << format_real(lj) << ','
           << format_real(theta_linf(problem, reference.u, reference.lambda, sigma))
           << ',' << format_real(shift_diagnostic(problem, reference, sigma, lj))
           << '\n';
      }
    }
    if (sink.to_file()) out << "spectrum=" << sink.path().string() << '\n';
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_sweep(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    validate(spec);
    if (spec.experiment.sweep == SweepParam::None) {
      throw Error(ErrorKind::ValidationError,
                  "validation-error: experiment.sweep: must be tau or sigma");
    }
    if (spec.experiment.values.empty()) {
      throw Error(ErrorKind::ValidationError,
                  "validation-error: experiment.values: empty sweep grid");
    }
    if (spec.experiment.sweep == SweepParam::Sigma &&
        spec.scheme.scheme != Scheme::Shifted) {
      throw Error(ErrorKind::ValidationError,
                  "validation-error: experiment.sweep: sigma sweeps need scheme "
                  "'shifted'");
    }
    if (spec.experiment.sweep == SweepParam::Tau &&
        spec.scheme.scheme != Scheme::Gfdn && spec.scheme.scheme != Scheme::Damped) {
      throw Error(ErrorKind::ValidationError,
                  "validation-error: experiment.sweep: tau sweeps need scheme "
                  "'gfdn' or 'damped'");
    }
    const GpeProblem problem = build_problem(spec);
    const GroundState reference = reference_for(problem, spec);
    const SpectralReport report = spectral_report(problem, reference);

    Sink sink(spec, "sweep.csv", out);
    std::ostream& os = sink.stream();
    os << "parameter,predicted_rate,observed_rate,converged\n";
    bool any = false;
    for (double value : spec.experiment.values) {
      SchemeConfig cfg = spec.scheme;
      if (spec.experiment.sweep == SweepParam::Tau) {
        cfg.tau = value;
        cfg.line_search = false;
      } else {
        cfg.sigma = value;
      }
      const ExperimentCell cell = run_cell(problem, reference, report, cfg);
      any = any || cell.converged;
      if (!cell.error.empty()) err << "cell " << format_real(value) << ": " << cell.error << '\n';
      os << format_real(value) << ',' << format_real(cell.predicted) << ','
         << format_real(cell.terminal_rate) << ',' << (cell.converged ? "true" : "false")
         << '\n';
    }
    if (sink.to_file()) out << "sweep=" << sink.path().string() << '\n';
    return any ? kOk : kNumericalFailure;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace gpe::cli
