// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "dense_oracle.hpp"
#include "fixtures.hpp"
#include "gpe/config.hpp"
#include "gpe/harness.hpp"

using namespace gpe;
namespace fs = std::filesystem;

namespace {

// Collects the individual checks of one criterion.
class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
    detail_.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + what);
  }

  bool finish() const {
    for (const auto& line : detail_) std::printf("%s\n", line.c_str());
    std::printf("%s criterion %d: %s\n", failures_.empty() ? "PASS" : "FAIL", id_,
                title_.c_str());
    std::fflush(stdout);
    return failures_.empty();
  }

 private:
  int id_;
  std::string title_;
  std::vector<std::string> detail_;
  std::vector<std::string> failures_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string within(const char* name, double got, double want, double tol) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s = %.8g (target %.8g +- %.1e)", name, got, want, tol);
  return buf;
}

std::string in_range(const char* name, double got, double lo, double hi) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s = %.6g in [%g, %g]", name, got, lo, hi);
  return buf;
}

SchemeConfig scheme(Scheme s, double tol, double tau = 1.0, double sigma = 0.0) {
  SchemeConfig c;
  c.scheme = s;
  c.tol = tol;
  c.tau = tau;
  c.sigma = sigma;
  c.max_iter = 5000;
  return c;
}

double terminal_rate(const IterationTrace& trace, const SchemeConfig& c) {
  try {
    return contraction_rates(trace, c.rate_cutoff).terminal_rate;
  } catch (const Error&) {
    return kNaN;
  }
}

struct Reproduction {
  double lambda, lambda2, ratio, mu1;
  double tol;
  double lambda_tol, lambda2_tol, ratio_tol, mu1_tol;
  double rate_lo, rate_hi;
  int its_lo, its_hi;
};

bool reproduce(int id, const char* title, const GpeProblem& p, const GroundState& ref,
               const Reproduction& want) {
  Criterion c(id, title);
  const SpectralReport r = spectral_report(p, ref);
  c.check(std::abs(ref.lambda - want.lambda) <= want.lambda_tol,
          within("lambda", ref.lambda, want.lambda, want.lambda_tol));
  c.check(std::abs(r.lambda2 - want.lambda2) <= want.lambda2_tol,
          within("lambda2", r.lambda2, want.lambda2, want.lambda2_tol));
  c.check(std::abs(r.rate_basic - want.ratio) <= want.ratio_tol,
          within("lambda1/lambda2", r.rate_basic, want.ratio, want.ratio_tol));
  c.check(std::abs(r.mu1 - want.mu1) <= want.mu1_tol, within("mu1", r.mu1, want.mu1, want.mu1_tol));

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SchemeConfig cfg = scheme(Scheme::Basic, want.tol);
    cfg.seed = seed;
    const auto [gs, trace] = run(p, cfg, ref);
    const double rate = terminal_rate(trace, cfg);
    char buf[200];
    std::snprintf(buf, sizeof buf, "seed %llu: %d iterations in [%d, %d], terminal rate %.5g",
                  static_cast<unsigned long long>(seed), trace.iterations, want.its_lo,
                  want.its_hi, rate);
    c.check(trace.converged && trace.iterations >= want.its_lo && trace.iterations <= want.its_hi,
            buf);
    // The rate criterion is judged on the default seed; the other seeds are
    // reported for context.
    if (seed == 1) {
      c.check(rate >= want.rate_lo && rate <= want.rate_hi,
              in_range("terminal rate (seed 1)", rate, want.rate_lo, want.rate_hi));
    }
  }
  return c.finish();
}

bool criterion_3() {
  Criterion c(3, "discrete L-infinity bound and theta weight at sigma = 0");
  for (int which : {1, 2}) {
    const GpeProblem& p = which == 1 ? test::mp1() : test::mp2();
    const GroundState& gs = which == 1 ? test::mp1_ref() : test::mp2_ref();
    const double peak = linf_nodal(gs.u);
    const double lhs = p.beta() * peak * peak;
    char buf[200];
    std::snprintf(buf, sizeof buf, "MP%d: beta*|u|_inf^2 = %.6g <= lambda*(1+5e-3) = %.6g", which,
                  lhs, gs.lambda * (1.0 + 5e-3));
    c.check(lhs <= gs.lambda * (1.0 + 5e-3), buf);
    const double theta = theta_linf(p, gs.u, gs.lambda, 0.0);
    std::snprintf(buf, sizeof buf, "MP%d: theta_linf(0) = %.8g (target 1 +- 5e-3)", which, theta);
    c.check(std::abs(theta - 1.0) <= 5e-3, buf);
  }
  return c.finish();
}

bool criterion_4() {
  Criterion c(4, "observed MP1 rates respect the proven bounds");
  const GpeProblem& p = test::mp1();
  const GroundState& ref = test::mp1_ref();
  const SpectralReport r = spectral_report(p, ref);
  const double tol = 1e-11;

  {
    const SchemeConfig cfg = scheme(Scheme::Basic, tol);
    const double q = terminal_rate(run(p, cfg, ref).second, cfg);
    c.check(q <= r.rate_basic, fmt("basic %.5g <= lambda1/lambda2", q) + fmt(" = %.5g", r.rate_basic));
    c.check(q <= std::abs(r.mu1) + 0.005,
            fmt("basic %.5g <= |mu1| + 0.005", q) + fmt(" = %.5g", std::abs(r.mu1) + 0.005));
  }
  for (double tau : {1.0, 10.0, 100.0}) {
    const SchemeConfig cfg = scheme(Scheme::Gfdn, tol, tau);
    const auto [gs, trace] = run(p, cfg, ref);
    const double q = terminal_rate(trace, cfg);
    const double bound = r.rate_gfdn(tau) + 0.01;
    c.check(trace.converged && q <= bound,
            fmt("gfdn tau=%g: ", tau) + fmt("%.5g <= ", q) + fmt("%.5g", bound));
  }
  for (double tau : {0.5, 1.0, 1.5}) {
    const SchemeConfig cfg = scheme(Scheme::Damped, tol, tau);
    const auto [gs, trace] = run(p, cfg, ref);
    const double q = terminal_rate(trace, cfg);
    const double bound = r.rate_damped(tau) + 0.01;
    c.check(trace.converged && q <= bound,
            fmt("damped tau=%g: ", tau) + fmt("%.5g <= ", q) + fmt("%.5g", bound));
  }
  return c.finish();
}

bool criterion_5() {
  Criterion c(5, "shift close to lambda degrades convergence");
  const GpeProblem& p = test::mp1();
  const GroundState& ref = test::mp1_ref();

  const SchemeConfig basic_cfg = scheme(Scheme::Basic, 1e-11);
  const double basic_rate = terminal_rate(run(p, basic_cfg, ref).second, basic_cfg);

  SchemeConfig cfg = scheme(Scheme::Shifted, 1e-11, 1.0, ref.lambda - 0.1);
  cfg.max_iter = 200;
  const auto [gs, trace] = run(p, cfg, ref);
  const double q = terminal_rate(trace, cfg);
  std::ostringstream what;
  what << "sigma = lambda - 0.1: converged=" << (trace.converged ? "true" : "false")
       << " after " << trace.iterations << " iterations, terminal rate " << q
       << " vs basic " << basic_rate;
  c.check(!trace.converged || q > basic_rate, what.str());

  for (double gap : {0.5, 0.2, 0.1, 0.05, 0.01}) {
    const double sigma = ref.lambda - gap;
    const double lj = nearest_excluding_first(p, ref, sigma);
    const double d = shift_diagnostic(p, ref, sigma, lj);
    std::ostringstream s;
    s << "sigma = lambda - " << gap << ": diagnostic " << d << " > 1";
    c.check(d > 1.0, s.str());
  }
  return c.finish();
}

bool criterion_6() {
  Criterion c(6, "dense-oracle equivalence");
  auto tight = [](const GpeProblem& p) {
    SchemeConfig cfg;
    cfg.tol = 1e-16;
    cfg.max_iter = 2000;
    return run_from(p, cfg, reference_solve(p).u).first;
  };
  for (int which : {1, 2}) {
    for (int n : {16, 32, 64}) {
      const GpeProblem p = which == 1 ? test::mp1_coarse(n) : test::mp2_coarse(n);
      const GroundState gs = tight(p);
      const BandedSymMatrix a = assemble_A(p, gs.u);
      const auto ev = oracle::pencil_eigenvalues(a, p.mass());
      const LinearizedPair pair = linearized_pair(p, gs);

      const Mesh1D& mesh = p.mesh();
      const double lambda = gs.lambda;
      const double two_beta = 2.0 * p.beta();
      const BandedSymMatrix theta = oracle::weighted_mass_reference(mesh, [&](double x) {
        const int cell = std::clamp(static_cast<int>((x - mesh.a) / mesh.h), 0, mesh.n_cells - 1);
        const double t = (x - mesh.node(cell)) / mesh.h;
        const double v = (1.0 - t) * gs.u.at_node(cell) + t * gs.u.at_node(cell + 1);
        return lambda - two_beta * v * v;
      });
      const double mu_dense =
          oracle::largest_in_magnitude(oracle::weighted_eigenvalues(a, theta, p.mass(), gs.u.values));
      const double mu = weighted_mu1(p, gs).mu1;

      const double err = std::max({std::abs(pair.lambda1 - ev(0)), std::abs(pair.lambda2 - ev(1)),
                                   std::abs(mu - mu_dense)});
      char buf[200];
      std::snprintf(buf, sizeof buf, "MP%d n_cells=%d: max deviation %.2e <= 1e-8", which, n, err);
      c.check(err <= 1e-8, buf);
    }
  }

  // beta = 0: the basic scheme is classical inverse iteration.
  Potential v;
  v.quad_coeff = 0.5;
  const GpeProblem lin(build_mesh(-4.0, 4.0, 64), v, 0.0);
  const Eigen::MatrixXd a = oracle::dense(assemble_A(lin, Field(lin.mesh())));
  const Eigen::MatrixXd m = oracle::dense(lin.mass());
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Field u = random_initial(lin.mesh(), 1);
  Eigen::VectorXd x = oracle::vec(u.values);
  double worst = 0.0;
  for (int n = 0; n < 30; ++n) {
    u = step_basic(lin, u);
    x = lu.solve(m * x);
    x /= std::sqrt(x.dot(m * x));
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      worst = std::max(worst, std::abs(x(k) - u[static_cast<std::size_t>(k)]));
    }
  }
  c.check(worst <= 1e-9, fmt("beta = 0 vs classical inverse iteration: %.2e <= 1e-9", worst));
  return c.finish();
}

bool criterion_7() {
  Criterion c(7, "structural invariants");
  for (int which : {1, 2}) {
    const GpeProblem& p = which == 1 ? test::mp1() : test::mp2();
    const GroundState& ref = which == 1 ? test::mp1_ref() : test::mp2_ref();
    const std::string tag = "MP" + std::to_string(which) + ": ";

    // Normalization of every step, along a basic trajectory.
    double norm_dev = 0.0;
    double shift_dev = 0.0;
    double damped_dev = 0.0;
    Field u = random_initial(p.mesh(), 11);
    for (int n = 0; n < 10; ++n) {
      const Field b = step_basic(p, u);
      const Field s0 = step_shifted(p, u, 0.0);
      const Field d1 = step_damped(p, u, 1.0);
      for (const Field& f : {b, step_gfdn(p, u, 1.0), step_shifted(p, u, ref.lambda - 1.0),
                             step_damped(p, u, 0.7), d1}) {
        norm_dev = std::max(norm_dev, std::abs(l2_norm(f) - 1.0));
      }
      for (std::size_t k = 0; k < b.size(); ++k) {
        shift_dev = std::max(shift_dev, std::abs(s0[k] - b[k]));
        damped_dev = std::max(damped_dev, std::abs(d1[k] - b[k]));
      }
      u = b;
    }
    c.check(norm_dev <= 1e-12, tag + fmt("per-step |norm - 1| = %.2e <= 1e-12", norm_dev));
    c.check(shift_dev <= 1e-12, tag + fmt("shifted(sigma=0) vs basic: %.2e <= 1e-12", shift_dev));
    c.check(damped_dev <= 1e-12, tag + fmt("damped(tau=1) vs basic: %.2e <= 1e-12", damped_dev));

    // Energy decrease of the line-search damped scheme.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SchemeConfig cfg = scheme(Scheme::Damped, 1e-11);
      cfg.line_search = true;
      cfg.seed = seed;
      const auto [gs, trace] = run(p, cfg);
      double worst = -1e300;
      for (std::size_t i = 1; i < trace.records.size(); ++i) {
        worst = std::max(worst, trace.records[i].energy - trace.records[i - 1].energy);
      }
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "%sline search seed %llu: %d steps, max energy increase %.2e <= 1e-10",
                    tag.c_str(), static_cast<unsigned long long>(seed), trace.iterations, worst);
      c.check(trace.converged && worst <= 1e-10, buf);
    }
  }
  return c.finish();
}

bool criterion_8() {
  Criterion c(8, "cmd_rates output is byte-identical across runs");
  const fs::path base = fs::temp_directory_path() / ("gpe_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  std::vector<std::string> csv;
  for (int i = 0; i < 2; ++i) {
    RunSpec spec = preset_spec("mp1");
    spec.experiment.output = (base / std::to_string(i)).string();
    std::ostringstream out, err;
    const int code = cli::cmd_rates(spec, out, err);
    c.check(code == cli::kOk, "run " + std::to_string(i + 1) + " exit code " + std::to_string(code));
    std::ifstream in(base / std::to_string(i) / "rates.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    csv.push_back(ss.str());
  }
  fs::remove_all(base);
  c.check(!csv[0].empty() && csv[0] == csv[1],
          "rates.csv identical (" + std::to_string(csv[0].size()) + " bytes)");
  return c.finish();
}

}  // namespace

int main() {
  int failed = 0;
  auto tally = [&](bool ok) { failed += ok ? 0 : 1; };
  try {
    tally(reproduce(1, "model problem 1 reproduction", test::mp1(), test::mp1_ref(),
                    {2.65187, 3.35315, 0.79086, 0.26197, 1e-11, 2e-3, 2e-3, 1e-3, 2e-3, 0.25, 0.27,
                     10, 30}));
    tally(reproduce(2, "model problem 2 reproduction", test::mp2(), test::mp2_ref(),
                    {35.57746, 35.60994, 0.99909, -0.94192, 1e-10, 5e-2, 5e-2, 1e-3, 5e-3, 0.930,
                     0.945, 250, 450}));
    tally(criterion_3());
    tally(criterion_4());
    tally(criterion_5());
    tally(criterion_6());
    tally(criterion_7());
    tally(criterion_8());
  } catch (const std::exception& e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
