#include "wavebasis/klein_gordon.hpp"

#include <algorithm>
#include <cmath>

#include "wavebasis/errors.hpp"
#include "wavebasis/parallel.hpp"

namespace wavebasis {

namespace {

constexpr cplx kI{0.0, 1.0};

// Values and first derivatives of a field along one coordinate, per grid point.
struct Samples {
  std::vector<cplx> value;
  std::vector<cplx> deriv;
};

Samples sample_compact(const Field& F, const QuadratureGrid& grid) {
  if (F.picture() != Picture::compact) throw ParameterError("kg_inner_compact: compact field expected");
  if (F.n() != grid.n) throw ParameterError("kg_inner_compact: dimension mismatch");
  const std::size_t S = grid.sphere.points.size();
  Samples out{std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size())};
  parallel_for(grid.theta.size(), [&](std::size_t a) {
    std::vector<Dual> c(grid.n + 2);
    for (std::size_t b = 0; b < S; ++b) {
      c[0] = Dual::variable(0.0);
      c[1] = Dual(grid.theta[a], 0.0);
      for (int i = 0; i < grid.n; ++i) c[2 + i] = Dual(grid.sphere.points[b][i], 0.0);
      const Dual v = F(std::span<const Dual>(c));
      out.value[a * S + b] = v.v;
      out.deriv[a * S + b] = v.d;
    }
  });
  return out;
}

// Samples f(t₀, x̂ tan(θ/2)) and ∂t f there.  The Jacobian 2^{−n}(1+ρ²)ⁿ is
// folded into `scale`.
Samples sample_noncompact(const Field& f, const QuadratureGrid& grid, double t0, std::vector<double>& scale) {
  if (f.picture() != Picture::noncompact) throw ParameterError("kg_inner_noncompact: noncompact field expected");
  if (f.n() != grid.n) throw ParameterError("kg_inner_noncompact: dimension mismatch");
  const std::size_t S = grid.sphere.points.size();
  Samples out{std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size())};
  scale.assign(grid.size(), 0.0);
  parallel_for(grid.theta.size(), [&](std::size_t a) {
    const double rho = std::tan(0.5 * grid.theta[a]);
    const double jac = std::pow(0.5 * (1.0 + rho * rho), grid.n);
    std::vector<Dual> c(grid.n + 1);
    for (std::size_t b = 0; b < S; ++b) {
      c[0] = Dual::variable(t0);
      for (int i = 0; i < grid.n; ++i) c[1 + i] = Dual(rho * grid.sphere.points[b][i], 0.0);
      const Dual v = f(std::span<const Dual>(c));
      out.value[a * S + b] = v.v;
      out.deriv[a * S + b] = v.d;
      scale[a * S + b] = jac;
    }
  });
  return out;
}

cplx combine(const Samples& s1, const Samples& s2, const QuadratureGrid& grid, const std::vector<double>* scale,
             double prefactor) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double w = grid.weight(i);
    if (scale) w *= (*scale)[i];
    acc += w * (std::conj(s1.deriv[i]) * s2.value[i] - std::conj(s1.value[i]) * s2.deriv[i]);
  }
  return kI * prefactor * acc;
}

}  // namespace

double QuadratureGrid::weight(std::size_t i) const {
  const std::size_t S = sphere.points.size();
  return theta_weights[i / S] * sphere.weights[i % S];
}

QuadratureGrid quadrature_grid(int n, int theta_nodes, int sphere_degree) {
  if (n < 2) throw UnsupportedError("quadrature_grid: need n >= 2");
  if (theta_nodes < 1 || sphere_degree < 0) throw ParameterError("quadrature_grid: invalid size");
  QuadratureGrid g;
  g.n = n;
  // sin^{n−1}θ dθ = (1−s²)^{(n−2)/2} ds with s = cos θ.
  const QuadratureRule rule = gauss_gegenbauer(theta_nodes, 0.5 * (n - 2));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    g.theta.push_back(std::acos(rule.nodes[i]));
    g.theta_weights.push_back(rule.weights[i]);
  }
  g.sphere = sphere_grid(n, sphere_degree);
  return g;
}

QuadratureGrid grid_for_modes(int n, std::span<const ModeIndex> modes) {
  int k_max = 0;
  int l_max = 0;
  for (const auto& m : modes) {
    k_max = std::max(k_max, (std::abs(m.p) - n + 1) / 2);
    l_max = std::max(l_max, m.l);
  }
  return quadrature_grid(n, 2 * k_max + n + 8, 2 * l_max + 2);
}

cplx kg_inner_compact(const Field& F1, const Field& F2, const QuadratureGrid& grid) {
  const Samples a = sample_compact(F1, grid);
  const Samples b = sample_compact(F2, grid);
  return combine(a, b, grid, nullptr, std::pow(2.0, 1 - grid.n));
}

cplx kg_inner_noncompact(const Field& f1, const Field& f2, const QuadratureGrid& grid, double t0) {
  std::vector<double> scale;
  const Samples a = sample_noncompact(f1, grid, t0, scale);
  const Samples b = sample_noncompact(f2, grid, t0, scale);
  return combine(a, b, grid, &scale, 1.0);
}

RadialInner kg_inner_radial(const Field& f1, const Field& f2, double R, int panels, int nodes_per_panel,
                            int sphere_degree, double t0) {
  if (f1.picture() != Picture::noncompact || f2.picture() != Picture::noncompact) {
    throw ParameterError("kg_inner_radial: noncompact fields expected");
  }
  if (f1.n() != f2.n()) throw ParameterError("kg_inner_radial: dimension mismatch");
  if (!(R > 0.0) || panels < 1 || nodes_per_panel < 1) throw ParameterError("kg_inner_radial: invalid grid");
  const int n = f1.n();
  const SphereGrid sphere = sphere_grid(n, sphere_degree);
  const QuadratureRule gl = gauss_legendre(nodes_per_panel);

  // Radial nodes with weights including ρ^{n−1} dρ.
  std::vector<double> rho, w;
  const double h = R / panels;
  for (int k = 0; k < panels; ++k) {
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double r = h * (k + 0.5 * (gl.nodes[i] + 1.0));
      rho.push_back(r);
      w.push_back(0.5 * h * gl.weights[i] * std::pow(r, n - 1));
    }
  }
  const std::size_t core = rho.size();
  // ρ = R/s, dρ = R/s² ds on s ∈ (0, 1).
  for (int k = 0; k < panels; ++k) {
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double s = (k + 0.5 * (gl.nodes[i] + 1.0)) / panels;
      const double r = R / s;
      rho.push_back(r);
      w.push_back(0.5 / panels * gl.weights[i] * R / (s * s) * std::pow(r, n - 1));
    }
  }

  std::vector<cplx> partial(rho.size());
  parallel_for(rho.size(), [&](std::size_t a) {
    std::vector<Dual> c(n + 1);
    cplx acc = 0.0;
    for (std::size_t b = 0; b < sphere.points.size(); ++b) {
      c[0] = Dual::variable(t0);
      for (int i = 0; i < n; ++i) c[1 + i] = Dual(rho[a] * sphere.points[b][i], 0.0);
      const Dual u = f1(std::span<const Dual>(c));
      const Dual v = f2(std::span<const Dual>(c));
      acc += sphere.weights[b] * (std::conj(u.d) * v.v - std::conj(u.v) * v.d);
    }
    partial[a] = kI * w[a] * acc;
  });
  RadialInner out{0.0, 0.0};
  for (std::size_t a = 0; a < rho.size(); ++a) {
    out.value += partial[a];
    if (a >= core) out.tail += partial[a];
  }
  return out;
}

Eigen::MatrixXcd gram_matrix(std::span<const ModeIndex> modes, int n, Picture picture) {
  return gram_matrix(modes, n, picture, grid_for_modes(n, modes));
}

Eigen::MatrixXcd gram_matrix(std::span<const ModeIndex> modes, int n, Picture picture, const QuadratureGrid& grid) {
  for (const auto& m : modes) validate_index(n, m);
  const std::size_t M = modes.size();
  const std::size_t G = grid.size();
  Eigen::MatrixXcd V(G, M), D(G, M);
  std::vector<double> scale;
  for (std::size_t k = 0; k < M; ++k) {
    const ModeFunction mf(n, modes[k]);
    const Samples s = picture == Picture::compact ? sample_compact(mf.compact_field(), grid)
                                                  : sample_noncompact(mf.field(), grid, 0.0, scale);
    for (std::size_t i = 0; i < G; ++i) {
      V(i, k) = s.value[i];
      D(i, k) = s.deriv[i];
    }
  }
  Eigen::VectorXd W(G);
  for (std::size_t i = 0; i < G; ++i) W(i) = grid.weight(i) * (picture == Picture::compact ? 1.0 : scale[i]);
  const double pre = picture == Picture::compact ? std::pow(2.0, 1 - n) : 1.0;
  const Eigen::MatrixXcd WV = W.asDiagonal() * V;
  const Eigen::MatrixXcd WD = W.asDiagonal() * D;
  return (kI * pre) * (D.adjoint() * WV - V.adjoint() * WD);
}

double unitarity_check(const GroupElement& g, const Field& f1, const Field& f2, const QuadratureGrid& grid) {
  if (g.sl2[2] != 0.0) throw UnsupportedError("unitarity_check: c != 0 makes delta vanish on the t = 0 slice");
  const cplx before = kg_inner_noncompact(f1, f2, grid);
  const cplx after = kg_inner_noncompact(group_act(g, f1), group_act(g, f2), grid);
  return std::abs(after - before);
}

}  // namespace wavebasis
