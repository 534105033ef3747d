#pragma once

// The Gross-Pitaevskii problem on a 1D mesh: potential, energy, and the
// z-linearized operator A_z = 1/2 K + M_V + beta M_{|z|^2}.

#include <optional>
#include <vector>

#include "gpe/fem1d.hpp"

namespace gpe {

// V(x) = quad_coeff x^2 + sin_amp sin(sin_k pi x)^2 + offset, or a P1
// interpolant of tabulated values on all mesh nodes (boundary included).
struct Potential {
  double quad_coeff = 0.0;
  double sin_amp = 0.0;
  double sin_k = 0.0;
  double offset = 0.0;
  std::optional<std::vector<double>> tabulated;

  double operator()(const Mesh1D& mesh, int cell, double x) const;
};

// V at every mesh node 0..n_cells. Throws NegativePotential when a value is
// below -1e-12.
std::vector<double> eval_potential(const Potential& p, const Mesh1D& mesh);

class GpeProblem {
 public:
  // Validates beta >= 0 and V >= 0 at nodes and quadrature points.
  GpeProblem(const Mesh1D& mesh, Potential potential, double beta);

  const Mesh1D& mesh() const { return mesh_; }
  const Potential& potential() const { return potential_; }
  double beta() const { return beta_; }

  const BandedSymMatrix& stiffness() const { return stiffness_; }
  const BandedSymMatrix& mass() const { return mass_; }
  const BandedSymMatrix& potential_mass() const { return potential_mass_; }
  // 1/2 K + M_V, the z-independent part of A_z.
  const BandedSymMatrix& linear_part() const { return linear_part_; }

 private:
  Mesh1D mesh_;
  Potential potential_;
  double beta_;
  BandedSymMatrix stiffness_;
  BandedSymMatrix mass_;
  BandedSymMatrix potential_mass_;
  BandedSymMatrix linear_part_;
};

struct GroundState {
  Field u;
  double lambda = 0.0;
  double energy = 0.0;
  double residual = 0.0;
};

BandedSymMatrix assemble_A(const GpeProblem& problem, const Field& z);

// Entries integral(z_h^2 phi_i phi_j), exact under the cell quadrature.
BandedSymMatrix density_mass(const Field& z);

// E(v) = 1/2 int( 1/2 |v'|^2 + V v^2 + beta/2 v^4 ).
double energy(const GpeProblem& problem, const Field& v);
double quartic_integral(const Field& v);

// lambda^(n) = a_v(v, v); requires |l2_norm(v) - 1| <= 1e-8.
double rayleigh_lambda(const GpeProblem& problem, const Field& v);

// Euclidean norm of A_u u - lambda M u.
double eigen_residual(const GpeProblem& problem, const Field& u, double lambda);

// max over nodes of |1 - 2 beta/(lambda - sigma) u^2|.
double theta_linf(const GpeProblem& problem, const Field& u, double lambda,
                  double sigma);

// Flips the sign so that the nodal mean is nonnegative.
void align_positive(Field& u);

// Builds a GroundState record for a normalized, converged u.
GroundState make_ground_state(const GpeProblem& problem, Field u);

Field normalized(Field u);

}  // namespace gpe
