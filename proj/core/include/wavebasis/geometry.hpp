#pragma once

// Coordinates on Minkowski space ℝ^{1,n} and on the cylinder ℝ × S^n, the
// cone embedding, the ℤ₄ chart phase and the function transforms between
// the two pictures.

#include <vector>

#include "wavebasis/field.hpp"

namespace wavebasis {

struct SpacetimePoint {
  double t = 0.0;
  std::vector<double> x;
};

/// φ is a cover coordinate and is never reduced; θ ∈ [0, π]; |x̂| = 1.
struct CompactPoint {
  double phi = 0.0;
  double theta = 0.0;
  std::vector<double> xhat;
};

struct PhaseClass {
  int j = 0;  // in {0, 1, 2, 3}
};

/// Distance to a chart boundary below which maps and phases refuse to guess.
inline constexpr double kChartTolerance = 1e-12;

double q(const SpacetimePoint& pt);
double lambda(const SpacetimePoint& pt);
/// (2t, 1+q, −1+q, 2x) ∈ ℝ^{2+(n+1)}, a point of the null cone.
std::vector<double> iota(const SpacetimePoint& pt);

/// Chart cell index j(φ, b₀).  ChartError within kChartTolerance of a cell boundary.
PhaseClass phase_j(double phi, double b0);

/// ChartError for x = 0 (x̂ undefined).
CompactPoint to_compact(const SpacetimePoint& pt);
/// ChartError when cos φ + cos θ vanishes.
SpacetimePoint from_compact(const CompactPoint& cp);

/// F(φ,θ,x̂) = i^{−mj} |(cos φ + cos θ)/2|^r f(sin φ/(cos φ+cos θ), x̂ sin θ/(cos φ+cos θ))
/// with j = phase_j(φ, −cos θ).
Field pull_function_to_compact(const Field& f, int m, double r);

/// f(t,x) = λ^r F(φ(t,x), θ(t,x), x/|x|) on the principal cell.  At x = 0 the
/// complex path uses x̂ = e_n; the Dual/Jet paths raise ChartError there.
Field push_function_to_noncompact(const Field& F, double r);

}  // namespace wavebasis
