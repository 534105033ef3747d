#include "gpe/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpe/error.hpp"

namespace gpe {

Mesh1D build_mesh(double a, double b, int n_cells) {
  if (!(a < b) || n_cells < 2) {
    throw Error(ErrorKind::InvalidDomain,
                "invalid-domain: need a < b and n_cells >= 2");
  }
  return Mesh1D{a, b, n_cells, (b - a) / n_cells};
}

std::vector<double> BandedSymMatrix::multiply(std::span<const double> x) const {
  const std::size_t n = dim();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += offdiag[i - 1] * x[i - 1];
    if (i + 1 < n) s += offdiag[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double BandedSymMatrix::bilinear_form(std::span<const double> x,
                                      std::span<const double> y) const {
  const std::size_t n = dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += diag[i] * x[i] * y[i];
    if (i + 1 < n) s += offdiag[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
  }
  return s;
}

double BandedSymMatrix::quadratic_form(std::span<const double> x) const {
  return bilinear_form(x, x);
}

BandedSymMatrix combine(double alpha, const BandedSymMatrix& lhs, double beta,
                        const BandedSymMatrix& rhs) {
  if (lhs.dim() != rhs.dim()) {
    throw Error(ErrorKind::MeshMismatch, "mesh-mismatch: matrix dimensions");
  }
  BandedSymMatrix out(lhs.dim());
  for (std::size_t i = 0; i < lhs.dim(); ++i) {
    out.diag[i] = alpha * lhs.diag[i] + beta * rhs.diag[i];
  }
  for (std::size_t i = 0; i < lhs.offdiag.size(); ++i) {
    out.offdiag[i] = alpha * lhs.offdiag[i] + beta * rhs.offdiag[i];
  }
  return out;
}

Field::Field(const Mesh1D& m, std::vector<double> v)
    : mesh(m), values(std::move(v)) {
  if (values.size() != mesh.dofs()) {
    throw Error(ErrorKind::MeshMismatch,
                "mesh-mismatch: field length " + std::to_string(values.size()) +
                    " vs " + std::to_string(mesh.dofs()) + " interior nodes");
  }
}

double Field::at_node(int i) const {
  if (i <= 0 || i >= mesh.n_cells) return 0.0;
  return values[static_cast<std::size_t>(i - 1)];
}

Field interpolate(const Mesh1D& mesh, const std::function<double(double)>& f) {
  Field out(mesh);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = f(mesh.dof_x(k));
  return out;
}

const std::array<double, 3>& CellQuadrature::points() {
  static const std::array<double, 3> p = {
      0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  return p;
}

const std::array<double, 3>& CellQuadrature::weights() {
  static const std::array<double, 3> w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  return w;
}

BandedSymMatrix assemble_stiffness(const Mesh1D& mesh) {
  BandedSymMatrix k(mesh.dofs());
  std::fill(k.diag.begin(), k.diag.end(), 2.0 / mesh.h);
  std::fill(k.offdiag.begin(), k.offdiag.end(), -1.0 / mesh.h);
  return k;
}

BandedSymMatrix assemble_mass(const Mesh1D& mesh) {
  BandedSymMatrix m(mesh.dofs());
  std::fill(m.diag.begin(), m.diag.end(), 2.0 * mesh.h / 3.0);
  std::fill(m.offdiag.begin(), m.offdiag.end(), mesh.h / 6.0);
  return m;
}

BandedSymMatrix assemble_weighted_mass(const Mesh1D& mesh, const QuadWeight& w) {
  BandedSymMatrix m(mesh.dofs());
  const auto& qp = CellQuadrature::points();
  const auto& qw = CellQuadrature::weights();
  for (int c = 0; c < mesh.n_cells; ++c) {
    // Local matrix for the two hat functions of cell c.
    double m00 = 0.0, m01 = 0.0, m11 = 0.0;
    for (int q = 0; q < CellQuadrature::kPoints; ++q) {
      const double t = qp[q];
      const double wq = qw[q] * mesh.h * w(c, mesh.a + (c + t) * mesh.h);
      m00 += wq * (1.0 - t) * (1.0 - t);
      m01 += wq * (1.0 - t) * t;
      m11 += wq * t * t;
    }
    const int left = c - 1;  // dof index of node c
    const int right = c;     // dof index of node c+1
    const int ndof = static_cast<int>(mesh.dofs());
    if (left >= 0) m.diag[left] += m00;
    if (right < ndof) m.diag[right] += m11;
    if (left >= 0 && right < ndof) m.offdiag[left] += m01;
  }
  return m;
}

BandedSymMatrix assemble_weighted_mass(const Field& w) {
  const Mesh1D& mesh = w.mesh;
  return assemble_weighted_mass(mesh, [&](int c, double x) {
    const double t = (x - mesh.node(c)) / mesh.h;
    return (1.0 - t) * w.at_node(c) + t * w.at_node(c + 1);
  });
}

double integrate(const Field& u,
                 const std::function<double(double x, double u)>& g) {
  const Mesh1D& mesh = u.mesh;
  const auto& qp = CellQuadrature::points();
  const auto& qw = CellQuadrature::weights();
  double total = 0.0;
  for (int c = 0; c < mesh.n_cells; ++c) {
    const double ul = u.at_node(c);
    const double ur = u.at_node(c + 1);
    double cell = 0.0;
    for (int q = 0; q < CellQuadrature::kPoints; ++q) {
      const double t = qp[q];
      cell += qw[q] * g(mesh.a + (c + t) * mesh.h, (1.0 - t) * ul + t * ur);
    }
    total += cell * mesh.h;
  }
  return total;
}

TridiagLDLT::TridiagLDLT(const BandedSymMatrix& matrix)
    : d_(matrix.dim()), l_(matrix.offdiag.size()) {
  const std::size_t n = matrix.dim();
  double scale = 0.0;
  for (double v : matrix.diag) scale = std::max(scale, std::abs(v));
  const double threshold = 1e-14 * scale;
  for (std::size_t i = 0; i < n; ++i) {
    double pivot = matrix.diag[i];
    if (i > 0) pivot -= l_[i - 1] * l_[i - 1] * d_[i - 1];
    if (!(std::abs(pivot) >= threshold) || pivot == 0.0) {
      throw Error(ErrorKind::NearSingular,
                  "near-singular: pivot " + std::to_string(pivot) + " at row " +
                      std::to_string(i));
    }
    d_[i] = pivot;
    if (i + 1 < n) l_[i] = matrix.offdiag[i] / pivot;
  }
}

std::vector<double> TridiagLDLT::solve(std::span<const double> rhs) const {
  const std::size_t n = d_.size();
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 1; i < n; ++i) x[i] -= l_[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= l_[i] * x[i + 1];
  return x;
}

std::size_t TridiagLDLT::negative_pivots() const {
  return static_cast<std::size_t>(
      std::count_if(d_.begin(), d_.end(), [](double d) { return d < 0.0; }));
}

std::vector<double> solve_banded(const BandedSymMatrix& matrix,
                                 std::span<const double> rhs) {
  if (rhs.size() != matrix.dim()) {
    throw Error(ErrorKind::MeshMismatch, "mesh-mismatch: rhs length");
  }
  return TridiagLDLT(matrix).solve(rhs);
}

std::size_t count_eigenvalues_below(const BandedSymMatrix& a,
                                    const BandedSymMatrix& m, double sigma) {
  const std::size_t n = a.dim();
  std::size_t count = 0;
  double prev = 1.0;
  double prev_off = 0.0;
  const double tiny = 1e-300;
  for (std::size_t i = 0; i < n; ++i) {
    double pivot = a.diag[i] - sigma * m.diag[i];
    if (i > 0) pivot -= prev_off * prev_off / prev;
    if (pivot == 0.0) pivot = -tiny;
    if (pivot < 0.0) ++count;
    prev = pivot;
    if (i + 1 < n) prev_off = a.offdiag[i] - sigma * m.offdiag[i];
  }
  return count;
}

namespace {

void require_same_mesh(const Field& u, const Field& v) {
  if (!(u.mesh == v.mesh) || u.size() != v.size()) {
    throw Error(ErrorKind::MeshMismatch, "mesh-mismatch: fields differ");
  }
}

}  // namespace

double l2_inner(const Field& u, const Field& v) {
  require_same_mesh(u, v);
  return assemble_mass(u.mesh).bilinear_form(u.values, v.values);
}

double l2_norm(const Field& u) {
  return std::sqrt(std::max(0.0, assemble_mass(u.mesh).quadratic_form(u.values)));
}

double h1_norm(const Field& u) {
  const double m = assemble_mass(u.mesh).quadratic_form(u.values);
  const double k = assemble_stiffness(u.mesh).quadratic_form(u.values);
  return std::sqrt(std::max(0.0, m + k));
}

double linf_nodal(const Field& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace gpe
