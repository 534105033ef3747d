#include "gpe/iterate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gpe/error.hpp"

namespace gpe {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::Basic: return "basic";
    case Scheme::Gfdn: return "gfdn";
    case Scheme::Shifted: return "shifted";
    case Scheme::Damped: return "damped";
  }
  return "basic";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "basic") return Scheme::Basic;
  if (name == "gfdn") return Scheme::Gfdn;
  if (name == "shifted") return Scheme::Shifted;
  if (name == "damped") return Scheme::Damped;
  return std::nullopt;
}

void SchemeConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorKind::InvalidArgument, key + ": " + why);
  };
  if (!(tol > 0.0)) fail("tol", "must be > 0");
  if (max_iter < 1) fail("max_iter", "must be >= 1");
  if (scheme == Scheme::Gfdn && !(tau > 0.0)) fail("tau", "must be > 0 for gfdn");
  if (scheme == Scheme::Damped && !line_search && !(tau > 0.0 && tau < 2.0)) {
    fail("tau", "must lie in (0, 2) for damped");
  }
  if (!std::isfinite(sigma)) fail("sigma", "must be finite");
}

Field random_initial(const Mesh1D& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Field u(mesh);
  // Explicit 53-bit mapping onto the open interval (0,1), identical on every
  // standard library.
  for (double& v : u.values) {
    v = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  }
  return normalized(std::move(u));
}

namespace {

Field solve_normalized(const BandedSymMatrix& system, const GpeProblem& problem,
                       const Field& u) {
  const auto rhs = problem.mass().multiply(u.values);
  return normalized(Field(u.mesh, solve_banded(system, rhs)));
}

Field solve_raw(const BandedSymMatrix& system, const GpeProblem& problem,
                const Field& u) {
  const auto rhs = problem.mass().multiply(u.values);
  return Field(u.mesh, solve_banded(system, rhs));
}

BandedSymMatrix shifted_system(const BandedSymMatrix& a, const GpeProblem& problem,
                               double sigma) {
  if (sigma == 0.0) return a;
  return combine(1.0, a, -sigma, problem.mass());
}

BandedSymMatrix gfdn_system(const BandedSymMatrix& a, const GpeProblem& problem,
                            double tau) {
  return combine(1.0, problem.mass(), tau, a);
}

double gamma_from(const Field& u, const Field& g) {
  const double ip = l2_inner(g, u);
  if (!(ip > 0.0)) {
    throw Error(ErrorKind::NonpositiveGamma,
                "nonpositive-gamma: (G_u u, u) = " + std::to_string(ip));
  }
  return 1.0 / ip;
}

Field scaled(Field f, double s) {
  for (double& v : f.values) v *= s;
  return f;
}

}  // namespace

Field apply_inverse(const GpeProblem& problem, const Field& u) {
  return solve_raw(assemble_A(problem, u), problem, u);
}

Field step_basic(const GpeProblem& problem, const Field& u) {
  return solve_normalized(assemble_A(problem, u), problem, u);
}

Field step_gfdn(const GpeProblem& problem, const Field& u, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau must be > 0");
  return solve_normalized(gfdn_system(assemble_A(problem, u), problem, tau),
                          problem, u);
}

Field step_shifted(const GpeProblem& problem, const Field& u, double sigma) {
  return solve_normalized(shifted_system(assemble_A(problem, u), problem, sigma),
                          problem, u);
}

double gamma(const GpeProblem&, const Field& u, const Field& g) {
  return gamma_from(u, g);
}

Field damped_update(const Field& u, const Field& d, double tau) {
  Field z(u.mesh);
  for (std::size_t k = 0; k < z.size(); ++k) {
    z[k] = (1.0 - tau) * u[k] + tau * d[k];
  }
  return normalized(std::move(z));
}

Field step_damped(const GpeProblem& problem, const Field& u, double tau) {
  if (!(tau > 0.0 && tau < 2.0)) {
    throw Error(ErrorKind::InvalidArgument, "tau must lie in (0, 2)");
  }
  const Field g = apply_inverse(problem, u);
  const double gam = gamma_from(u, g);
  return damped_update(u, scaled(g, gam), tau);
}

double line_search_tau(const GpeProblem& problem, const Field& u,
                       const Field& g, double gamma_val) {
  const Field d = scaled(g, gamma_val);
  auto phi = [&](double tau) { return energy(problem, damped_update(u, d, tau)); };

  constexpr int kGrid = 21;
  const double step = (kLineSearchTauMax - kLineSearchTauMin) / (kGrid - 1);
  double best_tau = kLineSearchTauMin;
  double best_e = phi(best_tau);
  int best_i = 0;
  for (int i = 1; i < kGrid; ++i) {
    const double t = kLineSearchTauMin + i * step;
    const double e = phi(t);
    if (e < best_e) {
      best_e = e;
      best_tau = t;
      best_i = i;
    }
  }

  // Golden-section search on the bracket around the best grid point.
  double lo = kLineSearchTauMin + std::max(best_i - 1, 0) * step;
  double hi = kLineSearchTauMin + std::min(best_i + 1, kGrid - 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (hi - lo > 1e-4) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = phi(x2);
    }
  }
  if (f1 < best_e) {
    best_e = f1;
    best_tau = x1;
  }
  if (f2 < best_e) {
    best_e = f2;
    best_tau = x2;
  }
  return best_tau;
}

double aligned_h1_error(const Field& reference, const Field& u) {
  const double sign = l2_inner(u, reference) < 0.0 ? -1.0 : 1.0;
  Field diff(u.mesh);
  for (std::size_t k = 0; k < diff.size(); ++k) {
    diff[k] = reference[k] - sign * u[k];
  }
  return h1_norm(diff);
}

std::pair<GroundState, IterationTrace> run(
    const GpeProblem& problem, const SchemeConfig& config,
    const std::optional<GroundState>& reference) {
  return run_from(problem, config, random_initial(problem.mesh(), config.seed),
                  reference);
}

std::pair<GroundState, IterationTrace> run_from(
    const GpeProblem& problem, const SchemeConfig& config, Field initial,
    const std::optional<GroundState>& reference) {
  config.validate();
  if (reference && !(reference->u.mesh == problem.mesh())) {
    throw Error(ErrorKind::MeshMismatch, "mesh-mismatch: reference state");
  }

  IterationTrace trace;
  Field u = std::move(initial);
  BandedSymMatrix a = assemble_A(problem, u);
  double lambda = a.quadratic_form(u.values);

  auto record = [&](int n, double tau) {
    IterationRecord rec;
    rec.n = n;
    rec.lambda = lambda;
    rec.energy = energy(problem, u);
    rec.tau = tau;
    const auto au = a.multiply(u.values);
    const auto mu = problem.mass().multiply(u.values);
    double s = 0.0;
    for (std::size_t k = 0; k < au.size(); ++k) {
      const double r = au[k] - lambda * mu[k];
      s += r * r;
    }
    rec.residual = std::sqrt(s);
    if (reference) {
      rec.h1_error = aligned_h1_error(reference->u, u);
      if (!trace.records.empty()) {
        const double prev = trace.records.back().h1_error;
        if (prev > config.rate_cutoff) rec.r = rec.h1_error / prev;
      }
    }
    trace.records.push_back(rec);
  };

  record(0, kNaN);
  for (int n = 1; n <= config.max_iter; ++n) {
    double tau_used = kNaN;
    Field next;
    switch (config.scheme) {
      case Scheme::Basic:
        next = solve_normalized(a, problem, u);
        break;
      case Scheme::Shifted:
        next = solve_normalized(shifted_system(a, problem, config.sigma), problem, u);
        break;
      case Scheme::Gfdn:
        next = solve_normalized(gfdn_system(a, problem, config.tau), problem, u);
        break;
      case Scheme::Damped: {
        const Field g = solve_raw(a, problem, u);
        const double gam = gamma_from(u, g);
        tau_used = config.line_search ? line_search_tau(problem, u, g, gam)
                                      : config.tau;
        next = damped_update(u, scaled(g, gam), tau_used);
        break;
      }
    }
    u = std::move(next);
    a = assemble_A(problem, u);
    const double lambda_next = a.quadratic_form(u.values);
    const double increment = std::abs(lambda_next - lambda);
    lambda = lambda_next;
    record(n, tau_used);
    trace.iterations = n;
    if (increment <= config.tol) {
      trace.converged = true;
      break;
    }
  }
  if (!trace.converged) {
    trace.message = "max-iter-exceeded: no convergence within " +
                    std::to_string(config.max_iter) + " iterations";
  }
  return {make_ground_state(problem, std::move(u)), std::move(trace)};
}

}  // namespace gpe
