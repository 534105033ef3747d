#pragma once

// Generalized inverse iterations for the ground state: basic, GFDN,
// shifted, and damped (with optional energy line search).

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpe/model.hpp"

namespace gpe {

enum class Scheme { Basic, Gfdn, Shifted, Damped };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

struct SchemeConfig {
  Scheme scheme = Scheme::Basic;
  double tau = 1.0;    // GFDN step size or damping parameter
  double sigma = 0.0;  // shift
  double tol = 1e-11;  // stopping tolerance on |lambda^(n+1) - lambda^(n)|
  int max_iter = 1000;
  bool line_search = false;  // damped only
  std::uint64_t seed = 1;
  // r(n) is recorded only while the previous H1 error exceeds this.
  double rate_cutoff = 50.0 * 1e-13;

  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct IterationRecord {
  int n = 0;
  double lambda = 0.0;
  double energy = 0.0;
  double h1_error = kNaN;  // vs reference, when one is given
  double r = kNaN;         // h1_error(n) / h1_error(n-1), when valid
  double tau = kNaN;       // damping actually used (damped only)
  double residual = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  int iterations = 0;
  std::string message;
};

inline constexpr double kLineSearchTauMin = 0.05;
inline constexpr double kLineSearchTauMax = 1.95;

// Uniform (0,1) nodal values from a seeded mt19937_64, L2-normalized.
Field random_initial(const Mesh1D& mesh, std::uint64_t seed);

// G_u u = A_u^{-1} M u.
Field apply_inverse(const GpeProblem& problem, const Field& u);

Field step_basic(const GpeProblem& problem, const Field& u);
Field step_gfdn(const GpeProblem& problem, const Field& u, double tau);
Field step_shifted(const GpeProblem& problem, const Field& u, double sigma);
Field step_damped(const GpeProblem& problem, const Field& u, double tau);

// 1 / (g, u)_{L2} with g = G_u u. Throws NonpositiveGamma.
double gamma(const GpeProblem& problem, const Field& u, const Field& g);

// Energy-minimizing damping in [kLineSearchTauMin, kLineSearchTauMax]:
// 21-point scan, then golden-section refinement of the bracket to 1e-4.
double line_search_tau(const GpeProblem& problem, const Field& u,
                       const Field& g, double gamma_val);

// Convex-type update (1 - tau) u + tau d, normalized.
Field damped_update(const Field& u, const Field& d, double tau);

std::pair<GroundState, IterationTrace> run(
    const GpeProblem& problem, const SchemeConfig& config,
    const std::optional<GroundState>& reference = std::nullopt);

// Same as run() but starting from a given normalized field.
std::pair<GroundState, IterationTrace> run_from(
    const GpeProblem& problem, const SchemeConfig& config, Field initial,
    const std::optional<GroundState>& reference = std::nullopt);

// H1 distance to the reference after flipping u so (u, ref)_{L2} >= 0.
double aligned_h1_error(const Field& reference, const Field& u);

}  // namespace gpe
