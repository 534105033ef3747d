#include "gpe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "gpe/error.hpp"

namespace gpe {

namespace {

constexpr int kPairMaxIter = 500;
constexpr int kPowerMaxIter = 2000;

double pencil_rayleigh(const BandedSymMatrix& a, const BandedSymMatrix& m,
                       const std::vector<double>& x) {
  return a.quadratic_form(x) / m.quadratic_form(x);
}

void m_normalize(const BandedSymMatrix& m, std::vector<double>& x) {
  const double n = std::sqrt(m.quadratic_form(x));
  for (double& v : x) v /= n;
}

// x <- x - (x, y)_M y for M-normalized y.
void m_deflate(const BandedSymMatrix& m, std::vector<double>& x,
               const std::vector<double>& y) {
  const double c = m.bilinear_form(x, y);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] -= c * y[k];
}

double pencil_residual(const BandedSymMatrix& a, const BandedSymMatrix& m,
                       const std::vector<double>& x, double lambda) {
  const auto ax = a.multiply(x);
  const auto mx = m.multiply(x);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = ax[k] - lambda * mx[k];
    s += r * r;
  }
  return std::sqrt(s);
}

// Shifted inverse iteration toward the eigenvalue near `target`, with
// optional M-orthogonal deflation against `lock` (re-applied every step).
std::pair<double, std::vector<double>> refine_eigenpair(
    const BandedSymMatrix& a, const BandedSymMatrix& m, double target,
    std::vector<double> x, const std::vector<double>* lock) {
  double rel_shift = 1e-6;
  for (int attempt = 0; attempt < 4; ++attempt, rel_shift *= 10.0) {
    const double sigma = target - rel_shift * std::max(std::abs(target), 1.0);
    std::optional<TridiagLDLT> factor;
    try {
      factor.emplace(combine(1.0, a, -sigma, m));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearSingular) throw;
      continue;
    }
    std::vector<double> v = x;
    if (lock) m_deflate(m, v, *lock);
    m_normalize(m, v);
    for (int it = 0; it < kPairMaxIter; ++it) {
      v = factor->solve(m.multiply(v));
      if (lock) m_deflate(m, v, *lock);
      m_normalize(m, v);
      const double lambda = pencil_rayleigh(a, m, v);
      if (pencil_residual(a, m, v, lambda) <= 1e-9 * norm2(v)) {
        return {lambda, std::move(v)};
      }
    }
    throw Error(ErrorKind::NoConvergence,
                "no-convergence: linearized eigenpair after " +
                    std::to_string(kPairMaxIter) + " inner iterations");
  }
  throw Error(ErrorKind::NearSingular, "near-singular: eigenpair shift");
}

std::vector<double> deterministic_start(std::size_t n) {
  std::mt19937_64 rng(20240531);
  std::vector<double> x(n);
  for (double& v : x) v = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53 - 0.5;
  return x;
}

}  // namespace

double pencil_eigenvalue(const BandedSymMatrix& a, const BandedSymMatrix& m,
                         std::size_t k) {
  if (k >= a.dim()) {
    throw Error(ErrorKind::InvalidArgument, "eigenvalue index out of range");
  }
  // Bracket: grow the upper end until at least k+1 eigenvalues lie below.
  double lo = 0.0;
  double hi = 1.0;
  while (count_eigenvalues_below(a, m, lo) > k) lo = lo == 0.0 ? -1.0 : 2.0 * lo;
  while (count_eigenvalues_below(a, m, hi) <= k) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_eigenvalues_below(a, m, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

LinearizedPair linearized_pair(const GpeProblem& problem, const GroundState& gs) {
  const BandedSymMatrix a = assemble_A(problem, gs.u);
  const BandedSymMatrix& m = problem.mass();

  const double l1 = pencil_eigenvalue(a, m, 0);
  const double l2 = pencil_eigenvalue(a, m, 1);

  auto [lambda1, x1] = refine_eigenpair(a, m, l1, gs.u.values, nullptr);
  if (m.bilinear_form(x1, gs.u.values) < 0.0) {
    for (double& v : x1) v = -v;
  }

  // Start the second pair from an odd-weighted copy of u: the second mode
  // of a symmetric well has one sign change.
  std::vector<double> start = deterministic_start(x1.size());
  const Mesh1D& mesh = problem.mesh();
  const double mid = 0.5 * (mesh.a + mesh.b);
  for (std::size_t k = 0; k < start.size(); ++k) {
    start[k] = 1e-3 * start[k] + (mesh.dof_x(k) - mid) * gs.u[k];
  }
  auto [lambda2, x2] = refine_eigenpair(a, m, l2, std::move(start), &x1);

  LinearizedPair out;
  out.lambda1 = lambda1;
  out.u1 = Field(mesh, std::move(x1));
  out.lambda2 = lambda2;
  out.u2 = Field(mesh, std::move(x2));
  return out;
}

namespace {

struct PowerResult {
  double mu = 0.0;
  std::vector<double> v;
  int iterations = 0;
  bool converged = false;
};

// Rayleigh-Ritz on span{p, v} for the last two power iterates. With a
// competing eigenvalue close in magnitude, almost all of the remaining error
// lies in that plane; the 2x2 problem in an A-orthonormal basis removes it.
void ritz_refine(const BandedSymMatrix& a, const BandedSymMatrix& m_theta,
                 const std::vector<double>& p, std::vector<double>& v, double shift,
                 double& mu) {
  // v is A-normalized; d = p - a(p, v) v, then A-normalized.
  const double c = a.bilinear_form(p, v);
  std::vector<double> d(p.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = p[k] - c * v[k];
  const double dn = std::sqrt(a.quadratic_form(d));
  if (!(dn > 1e-14)) return;
  for (double& e : d) e /= dn;

  const double w11 = m_theta.quadratic_form(v);
  const double w12 = m_theta.bilinear_form(v, d);
  const double w22 = m_theta.quadratic_form(d);
  const double mean = 0.5 * (w11 + w22);
  const double rad = std::hypot(0.5 * (w11 - w22), w12);
  // The power map targets the eigenvalue farthest from the shift.
  const double hi = mean + rad, lo = mean - rad;
  const double target = std::abs(hi - shift) >= std::abs(lo - shift) ? hi : lo;
  if (std::abs(target - mu) > 1e-6 * std::max(std::abs(mu), 1.0)) return;

  // Eigenvector of [[w11, w12], [w12, w22]] for `target`.
  double y1 = w12, y2 = target - w11;
  if (std::abs(y1) + std::abs(y2) < 1e-300) {
    y1 = target - w22;
    y2 = w12;
  }
  if (y1 < 0.0) {
    y1 = -y1;
    y2 = -y2;
  }
  const double yn = std::hypot(y1, y2);
  if (!(yn > 0.0)) return;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (y1 * v[k] + y2 * d[k]) / yn;
  mu = m_theta.quadratic_form(v) / a.quadratic_form(v);
}

// Power iteration for v -> P A^{-1} M_theta v - shift v, with the Rayleigh
// quotient of the unshifted operator in the A inner product.
PowerResult projected_power(const TridiagLDLT& a_factor, const BandedSymMatrix& a,
                            const BandedSymMatrix& m_theta,
                            const BandedSymMatrix& m, const std::vector<double>& u,
                            double shift) {
  const double uu = m.quadratic_form(u);
  auto project = [&](std::vector<double>& x) {
    const double c = m.bilinear_form(x, u) / uu;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] -= c * u[k];
  };
  auto a_normalize = [&](std::vector<double>& x) {
    const double n = std::sqrt(a.quadratic_form(x));
    for (double& v : x) v /= n;
  };

  PowerResult res;
  std::vector<double> v = deterministic_start(u.size());
  project(v);
  a_normalize(v);
  std::vector<double> prev = v;
  double mu_prev = m_theta.quadratic_form(v) / a.quadratic_form(v);
  for (int it = 1; it <= kPowerMaxIter; ++it) {
    std::vector<double> y = a_factor.solve(m_theta.multiply(v));
    project(y);
    if (shift != 0.0) {
      for (std::size_t k = 0; k < y.size(); ++k) y[k] -= shift * v[k];
    }
    a_normalize(y);
    prev = std::move(v);
    v = std::move(y);
    const double mu = m_theta.quadratic_form(v) / a.quadratic_form(v);
    res.iterations = it;
    if (std::abs(mu - mu_prev) < 1e-10) {
      res.mu = mu;
      res.converged = true;
      break;
    }
    mu_prev = mu;
    res.mu = mu;
  }
  if (res.converged) ritz_refine(a, m_theta, prev, v, shift, res.mu);
  res.v = std::move(v);
  return res;
}

}  // namespace

WeightedSpectrum weighted_mu1(const GpeProblem& problem, const GroundState& gs) {
  const BandedSymMatrix a = assemble_A(problem, gs.u);
  const BandedSymMatrix& m = problem.mass();
  const BandedSymMatrix m_theta =
      combine(gs.lambda, m, -2.0 * problem.beta(), density_mass(gs.u));
  const TridiagLDLT a_factor(a);

  PowerResult first = projected_power(a_factor, a, m_theta, m, gs.u.values, 0.0);
  if (!first.converged) {
    throw Error(ErrorKind::NoConvergence,
                "no-convergence: weighted eigenvalue power iteration after " +
                    std::to_string(kPowerMaxIter) +
                    " iterations (last estimate " + std::to_string(first.mu) +
                    "; |mu1| may be nearly degenerate with -mu1)");
  }
  // The opposite end of the spectrum dominates after shifting by mu1.
  PowerResult other =
      projected_power(a_factor, a, m_theta, m, gs.u.values, first.mu);

  WeightedSpectrum out;
  out.mu1 = first.mu;
  out.iterations = first.iterations;
  out.mu_min = std::min(first.mu, other.mu);
  out.mu_max = std::max(first.mu, other.mu);
  out.v1 = Field(problem.mesh(), std::move(first.v));
  return out;
}

double SpectralReport::rate_gfdn(double tau) const {
  return (1.0 + tau * lambda1) / (1.0 + tau * lambda2);
}

double SpectralReport::rate_damped(double tau) const {
  return std::abs(1.0 - tau) + tau * rate_basic;
}

double SpectralReport::rate_damped_sharp(double tau) const {
  return std::max(std::abs(1.0 - tau + tau * mu_min),
                  std::abs(1.0 - tau + tau * mu_max));
}

SpectralReport predict_rates(double lambda1, double lambda2, double mu1,
                             double mu_min, double mu_max) {
  SpectralReport r;
  r.lambda1 = lambda1;
  r.lambda2 = lambda2;
  r.mu1 = mu1;
  r.mu_min = mu_min;
  r.mu_max = mu_max;
  r.rate_basic = lambda1 / lambda2;
  r.tau_crit = 2.0 / (1.0 + r.rate_basic);
  return r;
}

SpectralReport spectral_report(const GpeProblem& problem, const GroundState& gs) {
  const LinearizedPair pair = linearized_pair(problem, gs);
  const WeightedSpectrum w = weighted_mu1(problem, gs);
  return predict_rates(pair.lambda1, pair.lambda2, w.mu1, w.mu_min, w.mu_max);
}

double nearest_excluding_first(const GpeProblem& problem, const GroundState& gs,
                               double sigma) {
  const BandedSymMatrix a = assemble_A(problem, gs.u);
  const BandedSymMatrix& m = problem.mass();
  const std::size_t below = count_eigenvalues_below(a, m, sigma);
  const std::size_t upper = std::max<std::size_t>(below, 1);
  double best = pencil_eigenvalue(a, m, upper);
  if (below >= 2) {
    const double lower = pencil_eigenvalue(a, m, below - 1);
    if (std::abs(lower - sigma) < std::abs(best - sigma)) best = lower;
  }
  return best;
}

double shift_diagnostic(const GpeProblem& problem, const GroundState& gs,
                        double sigma, double lambda_j) {
  if (std::abs(lambda_j - sigma) < 1e-14) {
    throw Error(ErrorKind::ShiftEqualsLambda, "shift equals lambda_j");
  }
  const double theta = theta_linf(problem, gs.u, gs.lambda, sigma);
  return std::abs(gs.lambda - sigma) / std::abs(lambda_j - sigma) * theta;
}

}  // namespace gpe
