#pragma once

// Uniform 1D P1 finite elements with homogeneous Dirichlet boundary.
//
// Unknowns live on the interior nodes 1..n_cells-1; dof k corresponds to
// node k+1. All matrices are symmetric tridiagonal over these dofs.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gpe {

struct Mesh1D {
  double a = 0.0;
  double b = 1.0;
  int n_cells = 2;
  double h = 0.5;

  std::size_t dofs() const { return static_cast<std::size_t>(n_cells - 1); }
  double node(int i) const { return a + i * h; }
  // Coordinate of interior dof k.
  double dof_x(std::size_t k) const { return node(static_cast<int>(k) + 1); }

  bool operator==(const Mesh1D&) const = default;
};

Mesh1D build_mesh(double a, double b, int n_cells);

// Symmetric tridiagonal matrix; offdiag[i] couples rows i and i+1.
struct BandedSymMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;

  BandedSymMatrix() = default;
  explicit BandedSymMatrix(std::size_t dim)
      : diag(dim, 0.0), offdiag(dim > 0 ? dim - 1 : 0, 0.0) {}

  std::size_t dim() const { return diag.size(); }

  std::vector<double> multiply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  double bilinear_form(std::span<const double> x,
                       std::span<const double> y) const;
};

// Returns alpha*lhs + beta*rhs.
BandedSymMatrix combine(double alpha, const BandedSymMatrix& lhs, double beta,
                        const BandedSymMatrix& rhs);

// P1 function on a mesh, stored by its interior nodal values.
struct Field {
  Mesh1D mesh;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Mesh1D& m) : mesh(m), values(m.dofs(), 0.0) {}
  Field(const Mesh1D& m, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }

  // Nodal value at mesh node i (0 on the boundary).
  double at_node(int i) const;
};

Field interpolate(const Mesh1D& mesh, const std::function<double(double)>& f);

// Three-point Gauss-Legendre rule on the reference cell [0, 1].
struct CellQuadrature {
  static constexpr int kPoints = 3;
  static const std::array<double, kPoints>& points();
  static const std::array<double, kPoints>& weights();
};

BandedSymMatrix assemble_stiffness(const Mesh1D& mesh);
BandedSymMatrix assemble_mass(const Mesh1D& mesh);

// Entries integral(w phi_i phi_j) with w evaluated at the Gauss points of
// each cell. The callback receives (cell index, x).
using QuadWeight = std::function<double(int cell, double x)>;
BandedSymMatrix assemble_weighted_mass(const Mesh1D& mesh, const QuadWeight& w);
// Weight given as a P1 field, interpolated at the Gauss points.
BandedSymMatrix assemble_weighted_mass(const Field& w);

// Integral of g(x, u_h(x)) over the domain using the cell quadrature.
double integrate(const Field& u,
                 const std::function<double(double x, double u)>& g);

// LDL^T factorization without pivoting of a symmetric tridiagonal matrix.
class TridiagLDLT {
 public:
  // Throws NearSingular when |pivot| < 1e-14 * max|diag|.
  explicit TridiagLDLT(const BandedSymMatrix& matrix);

  std::vector<double> solve(std::span<const double> rhs) const;
  // Number of negative pivots = number of negative eigenvalues.
  std::size_t negative_pivots() const;

 private:
  std::vector<double> d_;
  std::vector<double> l_;
};

std::vector<double> solve_banded(const BandedSymMatrix& matrix,
                                 std::span<const double> rhs);

// Sturm count: number of eigenvalues of the pencil (a, m) strictly below
// sigma. Never throws on (near) zero pivots.
std::size_t count_eigenvalues_below(const BandedSymMatrix& a,
                                    const BandedSymMatrix& m, double sigma);

double l2_inner(const Field& u, const Field& v);
double l2_norm(const Field& u);
double h1_norm(const Field& u);
double linf_nodal(const Field& u);

// Euclidean helpers on coefficient vectors.
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

}  // namespace gpe
