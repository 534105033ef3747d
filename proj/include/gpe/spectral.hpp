#pragma once

// Auxiliary eigenvalue problems that predict the asymptotic contraction of
// the inverse iterations, and the closed-form rate predictors built on them.

#include <cstddef>

#include "gpe/model.hpp"

namespace gpe {

struct LinearizedPair {
  double lambda1 = 0.0;
  Field u1;  // M-normalized, sign-aligned with the ground state
  double lambda2 = 0.0;
  Field u2;  // M-normalized, M-orthogonal to u1
};

// Two smallest eigenpairs of the pencil (A_u, M) at the ground state.
LinearizedPair linearized_pair(const GpeProblem& problem, const GroundState& gs);

struct WeightedSpectrum {
  double mu1 = 0.0;     // signed, largest in magnitude
  Field v1;             // A_u-normalized eigenvector, L2-orthogonal to u
  double mu_min = 0.0;  // extreme eigenvalues of the weighted problem
  double mu_max = 0.0;
  int iterations = 0;
};

// Weighted problem (v, (lambda - 2 beta u^2) w) = mu a_u(v, w) on the
// L2-orthogonal complement of u, by projected power iteration.
WeightedSpectrum weighted_mu1(const GpeProblem& problem, const GroundState& gs);

struct SpectralReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu1 = 0.0;
  double mu_min = 0.0;
  double mu_max = 0.0;
  double rate_basic = 0.0;  // lambda1 / lambda2
  double tau_crit = 0.0;    // 2 / (1 + lambda1 / lambda2)

  double rate_gfdn(double tau) const;
  double rate_damped(double tau) const;
  // max_j |1 - tau + tau mu_j| over the weighted spectrum.
  double rate_damped_sharp(double tau) const;
};

SpectralReport predict_rates(double lambda1, double lambda2, double mu1,
                             double mu_min, double mu_max);

// Full report: linearized pair, weighted spectrum, and predictors.
SpectralReport spectral_report(const GpeProblem& problem, const GroundState& gs);

// k-th smallest (k = 0, 1, ...) eigenvalue of the pencil (a, m), by Sturm
// bisection to machine precision. Requires a positive definite m.
double pencil_eigenvalue(const BandedSymMatrix& a, const BandedSymMatrix& m,
                         std::size_t k);

// Pencil eigenvalue of (A_u, M) nearest sigma, excluding the smallest one.
double nearest_excluding_first(const GpeProblem& problem, const GroundState& gs,
                               double sigma);

// |lambda - sigma| / |lambda_j - sigma| * ||1 - 2 beta/(lambda - sigma) u^2||_inf
double shift_diagnostic(const GpeProblem& problem, const GroundState& gs,
                        double sigma, double lambda_j);

}  // namespace gpe
