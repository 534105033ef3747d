#pragma once

#include <numbers>

#include "gpe/error.hpp"
#include "gpe/harness.hpp"

namespace gpe::test {

// Lazily computed full-size references, shared within one test binary.
inline const GpeProblem& mp1() {
  static const GpeProblem p = model_problem_1();
  return p;
}
inline const GpeProblem& mp2() {
  static const GpeProblem p = model_problem_2();
  return p;
}
inline const GroundState& mp1_ref() {
  static const GroundState gs = reference_solve(mp1());
  return gs;
}
inline const GroundState& mp2_ref() {
  static const GroundState gs = reference_solve(mp2());
  return gs;
}

// Same potentials on a coarse mesh, for dense-oracle comparisons.
inline GpeProblem mp1_coarse(int n_cells) { return model_problem_1(n_cells); }
inline GpeProblem mp2_coarse(int n_cells) { return model_problem_2(n_cells); }

// -1/2 u'' = lambda u on (0, pi): eigenvalues k^2 / 2.
inline GpeProblem free_particle(int n_cells) {
  return GpeProblem(build_mesh(0.0, std::numbers::pi, n_cells), Potential{}, 0.0);
}

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return static_cast<ErrorKind>(-1);
}

inline double h1_distance(const Field& a, const Field& b) {
  Field d(a.mesh);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = a[k] - b[k];
  return h1_norm(d);
}

}  // namespace gpe::test
