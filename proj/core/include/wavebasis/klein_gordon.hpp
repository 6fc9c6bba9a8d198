#pragma once

// Klein–Gordon inner product on the t = t₀ slice,
//
//   ⟨f₁, f₂⟩ = i ∫_{ℝⁿ} (conj(∂t f₁) f₂ − conj(f₁) ∂t f₂) dx,
//
// and its compact-picture form on the φ = 0 sphere,
//
//   ⟨f₁, f₂⟩ = i 2^{1−n} ∫_{[0,π]×S^{n−1}} (conj(∂φF₁) F₂ − conj(F₁) ∂φF₂) sin^{n−1}θ dθ dx̂.
//
// The noncompact integral is mapped onto the same grid by |x| = tan(θ/2),
// which contributes dx = 2^{−n}(1+|x|²)ⁿ sin^{n−1}θ dθ dx̂.  A direct radial
// rule on [0, R] plus a mapped tail is kept as an independent route.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wavebasis/field.hpp"
#include "wavebasis/lie_action.hpp"
#include "wavebasis/modes.hpp"
#include "wavebasis/special_functions.hpp"

namespace wavebasis {

struct QuadratureGrid {
  int n = 0;
  std::vector<double> theta;          // nodes in (0, π)
  std::vector<double> theta_weights;  // Gauss–Gegenbauer weights, sin^{n−1}θ dθ included
  SphereGrid sphere;                  // on S^{n−1}

  std::size_t size() const { return theta.size() * sphere.points.size(); }
  /// Point number i is (theta[i / S], sphere.points[i % S]) with S = sphere size.
  double weight(std::size_t i) const;
};

/// `theta_nodes` Gauss nodes in cos θ and a sphere grid exact to `sphere_degree`.
QuadratureGrid quadrature_grid(int n, int theta_nodes, int sphere_degree);
/// Default grid for a mode list: 2·k_max + n + 8 θ nodes, sphere degree 2·l_max + 2.
QuadratureGrid grid_for_modes(int n, std::span<const ModeIndex> modes);

cplx kg_inner_compact(const Field& F1, const Field& F2, const QuadratureGrid& grid);
cplx kg_inner_noncompact(const Field& f1, const Field& f2, const QuadratureGrid& grid, double t0 = 0.0);

struct RadialInner {
  cplx value;  // total, core + tail
  cplx tail;   // contribution of |x| > R
};
/// Gauss–Legendre panels on [0, R] and the substitution |x| = R/s on the tail.
RadialInner kg_inner_radial(const Field& f1, const Field& f2, double R, int panels, int nodes_per_panel,
                            int sphere_degree, double t0 = 0.0);

/// Pairwise KG products of the listed modes (negative p allowed).
Eigen::MatrixXcd gram_matrix(std::span<const ModeIndex> modes, int n, Picture picture);
Eigen::MatrixXcd gram_matrix(std::span<const ModeIndex> modes, int n, Picture picture, const QuadratureGrid& grid);

/// |⟨g·f₁, g·f₂⟩ − ⟨f₁, f₂⟩| with both products on the t = 0 slice.
/// UnsupportedError unless c = 0 (otherwise δ vanishes on the slice).
double unitarity_check(const GroupElement& g, const Field& f1, const Field& f2, const QuadratureGrid& grid);

}  // namespace wavebasis
