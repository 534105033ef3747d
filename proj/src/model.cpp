#include "gpe/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gpe/error.hpp"

namespace gpe {

double Potential::operator()(const Mesh1D& mesh, int cell, double x) const {
  if (tabulated) {
    const auto& tab = *tabulated;
    const double t = (x - mesh.node(cell)) / mesh.h;
    return (1.0 - t) * tab[static_cast<std::size_t>(cell)] +
           t * tab[static_cast<std::size_t>(cell) + 1];
  }
  const double s = std::sin(sin_k * std::numbers::pi * x);
  return quad_coeff * x * x + sin_amp * s * s + offset;
}

std::vector<double> eval_potential(const Potential& p, const Mesh1D& mesh) {
  if (p.tabulated &&
      p.tabulated->size() != static_cast<std::size_t>(mesh.n_cells) + 1) {
    throw Error(ErrorKind::MeshMismatch,
                "mesh-mismatch: tabulated potential needs n_cells+1 values");
  }
  std::vector<double> v(static_cast<std::size_t>(mesh.n_cells) + 1);
  for (int i = 0; i <= mesh.n_cells; ++i) {
    const int cell = i < mesh.n_cells ? i : mesh.n_cells - 1;
    v[static_cast<std::size_t>(i)] = p(mesh, cell, mesh.node(i));
    if (v[static_cast<std::size_t>(i)] < -1e-12) {
      throw Error(ErrorKind::NegativePotential,
                  "negative-potential: V(" + std::to_string(mesh.node(i)) +
                      ") = " + std::to_string(v[static_cast<std::size_t>(i)]));
    }
  }
  return v;
}

GpeProblem::GpeProblem(const Mesh1D& mesh, Potential potential, double beta)
    : mesh_(mesh), potential_(std::move(potential)), beta_(beta) {
  if (!(beta >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "beta must be >= 0");
  }
  eval_potential(potential_, mesh_);
  stiffness_ = assemble_stiffness(mesh_);
  mass_ = assemble_mass(mesh_);
  potential_mass_ = assemble_weighted_mass(mesh_, [this](int c, double x) {
    const double v = potential_(mesh_, c, x);
    if (v < -1e-12) {
      throw Error(ErrorKind::NegativePotential,
                  "negative-potential at quadrature point x=" + std::to_string(x));
    }
    return v;
  });
  linear_part_ = combine(0.5, stiffness_, 1.0, potential_mass_);
}

namespace {

void require_mesh(const GpeProblem& problem, const Field& f) {
  if (!(problem.mesh() == f.mesh) || f.size() != problem.mesh().dofs()) {
    throw Error(ErrorKind::MeshMismatch, "mesh-mismatch: field vs problem");
  }
}

}  // namespace

BandedSymMatrix density_mass(const Field& z) {
  const Mesh1D& mesh = z.mesh;
  return assemble_weighted_mass(mesh, [&](int c, double x) {
    const double t = (x - mesh.node(c)) / mesh.h;
    const double zh = (1.0 - t) * z.at_node(c) + t * z.at_node(c + 1);
    return zh * zh;
  });
}

BandedSymMatrix assemble_A(const GpeProblem& problem, const Field& z) {
  require_mesh(problem, z);
  if (problem.beta() == 0.0) return problem.linear_part();
  return combine(1.0, problem.linear_part(), problem.beta(), density_mass(z));
}

double quartic_integral(const Field& v) {
  return integrate(v, [](double, double u) { return u * u * u * u; });
}

double energy(const GpeProblem& problem, const Field& v) {
  require_mesh(problem, v);
  const double grad = problem.stiffness().quadratic_form(v.values);
  const double pot = problem.potential_mass().quadratic_form(v.values);
  const double quart = problem.beta() == 0.0 ? 0.0 : quartic_integral(v);
  return 0.5 * (0.5 * grad + pot + 0.5 * problem.beta() * quart);
}

double rayleigh_lambda(const GpeProblem& problem, const Field& v) {
  const double norm = l2_norm(v);
  if (std::abs(norm - 1.0) > 1e-8) {
    throw Error(ErrorKind::NotNormalized,
                "not-normalized: l2 norm " + std::to_string(norm));
  }
  return assemble_A(problem, v).quadratic_form(v.values);
}

double eigen_residual(const GpeProblem& problem, const Field& u, double lambda) {
  const auto au = assemble_A(problem, u).multiply(u.values);
  const auto mu = problem.mass().multiply(u.values);
  double s = 0.0;
  for (std::size_t k = 0; k < au.size(); ++k) {
    const double r = au[k] - lambda * mu[k];
    s += r * r;
  }
  return std::sqrt(s);
}

double theta_linf(const GpeProblem& problem, const Field& u, double lambda,
                  double sigma) {
  require_mesh(problem, u);
  if (std::abs(lambda - sigma) < 1e-14) {
    throw Error(ErrorKind::ShiftEqualsLambda, "shift-equals-lambda");
  }
  const double c = 2.0 * problem.beta() / (lambda - sigma);
  // Boundary nodes contribute |1 - 0| = 1.
  double m = 1.0;
  for (double v : u.values) m = std::max(m, std::abs(1.0 - c * v * v));
  return m;
}

void align_positive(Field& u) {
  double s = 0.0;
  for (double v : u.values) s += v;
  if (s < 0.0) {
    for (double& v : u.values) v = -v;
  }
}

Field normalized(Field u) {
  const double n = l2_norm(u);
  for (double& v : u.values) v /= n;
  return u;
}

GroundState make_ground_state(const GpeProblem& problem, Field u) {
  align_positive(u);
  GroundState gs;
  gs.lambda = rayleigh_lambda(problem, u);
  gs.energy = energy(problem, u);
  gs.residual = eigen_residual(problem, u, gs.lambda);
  gs.u = std::move(u);
  return gs;
}

}  // namespace gpe
