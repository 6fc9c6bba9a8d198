#pragma once

// Spectral solution of □u = 0 with u(0,·) = Φ, ∂t u(0,·) = Ψ (both real).
// The solution is u = Re Σ c_{p,l,j} f_{p,l,j} with c = 2⟨f_{p,l,j}, u⟩_KG, i.e.
//
//   c_{p,l,j} = 2i ∫_{ℝⁿ} (conj(∂t f_{p,l,j}(0,x)) Φ(x) − conj(f_{p,l,j}(0,x)) Ψ(x)) dx.
//
// The integrals are separable: data are projected onto the harmonics h_{l,j}
// on each sphere |x| = tan(θ/2) and then integrated against the radial or
// polar factor of the mode.  Two routes exist; `compact` pulls the data to the
// φ = 0 slice of the cylinder and uses the compact modes, `noncompact` uses
// the modes on ℝⁿ directly.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavebasis/field.hpp"
#include "wavebasis/modes.hpp"

namespace wavebasis {

using SpatialFunction = std::function<double(std::span<const double>)>;
using SpacetimeFunction = std::function<double(double, std::span<const double>)>;

struct CauchyData {
  int n = 0;
  SpatialFunction Phi;
  SpatialFunction Psi;
  std::string decay_class = "schwartz";
  /// Closed-form solution when known (used by evolve_compare).
  std::optional<SpacetimeFunction> exact;

  static CauchyData zero(int n);
  /// Φ = amplitude · exp(−|x|²/width²), Ψ = 0.
  static CauchyData gaussian(int n, double width = 1.0, double amplitude = 1.0);
  /// u = Re f_{p,l,j}; index must have p > 0.
  static CauchyData from_mode(const ModeIndex& index, int n);
  /// Samples keyed by coordinates (rounded to 1e−9); evaluation elsewhere throws ParameterError.
  static CauchyData from_samples(int n, const std::vector<std::vector<double>>& points,
                                 const std::vector<double>& phi, const std::vector<double>& psi);
};

struct ExpansionEntry {
  ModeIndex index;
  cplx c;
};

struct Expansion {
  int n = 0;
  int m = 0;
  int p_max = 0;
  int l_max = 0;
  std::vector<ExpansionEntry> entries;  // in enumerate_modes order
  double norm_sq = 0.0;                 // Σ|c|²
  double tail_estimate = 0.0;           // geometric extrapolation from the last two shells
  double uniform_bound = 0.0;           // Σ_p 2^{−r} p^{−1/2} (S_p dim H_k(ℝ^{n+1}) / Area(Sⁿ))^{1/2}
  std::vector<std::string> warnings;

  /// Σ_{l,j} |c_{p,l,j}|² for every p present, ascending.
  std::vector<std::pair<int, double>> shells() const;
  cplx coefficient(const ModeIndex& index) const;
  std::string to_json() const;
  static Expansion from_json(const std::string& text);
};

enum class ExpandRoute { compact, noncompact };

struct ExpandOptions {
  ExpandRoute route = ExpandRoute::compact;
  int theta_nodes = 0;    // 0: max(2·k_max + n + 8, 48)
  int sphere_degree = 0;  // 0: 2·l_max + 2
  double decay_tolerance = 1e-6;
};

/// The quadrature points (x ∈ ℝⁿ) at which `expand` samples the data.
std::vector<std::vector<double>> expansion_nodes(int n, int p_max, const ExpandOptions& options = {});

/// DecayError if the data's tail (probed at |x| = 10³, 2·10³) is not integrable
/// against the modes; a tail above options.decay_tolerance only adds a warning.
Expansion expand(const CauchyData& data, int n, int p_max, const ExpandOptions& options = {});

/// f = Σ c f_{p,l,j} as a noncompact field (complex; u = Re f).
Field expansion_field(const Expansion& e);
/// u(t,x) = Re Σ c f_{p,l,j}(t,x); points are (t, x₁..x_n).
std::vector<double> reconstruct(const Expansion& e, const std::vector<std::vector<double>>& points);

struct DecayReport {
  int N = 0;
  std::vector<double> partial_sums;  // Σ_{p≤P} p^N |c|² per shell P
  int block = 0;                     // shells per block
  std::vector<double> shell_ratios;  // ratios of consecutive block sums (shells above the noise floor)
  bool convergent = false;
};
/// Ratio test on p^N-weighted shells for N = 0..N_max.  Shell sums oscillate in
/// p, so the test compares sums over blocks of max(4, #shells/6) shells; the
/// geometric mean q of the last two block ratios must be < 1 and the geometric
/// tail estimate below 1% of the partial sum.
std::vector<DecayReport> decay_profile(const Expansion& e, int N_max);

struct FdGrid {
  double h = 0.1;     // spacing
  double cfl = 0.5;   // dt = cfl·h (rounded down so steps divide t_final)
  double R = 1.0;     // comparison region [−R, R]ⁿ
};

struct FdLevel {
  double h = 0.0;
  double dt = 0.0;
  double sup_vs_spectral = 0.0;
  double l2_vs_spectral = 0.0;
  double sup_vs_exact = -1.0;  // −1 when no closed form
};

struct EvolveReport {
  int n = 0;
  double t_final = 0.0;
  std::vector<double> times;
  std::vector<FdLevel> levels;        // coarse to fine (h, h/2, h/4)
  double spectral_vs_exact = -1.0;    // −1 when no closed form
  double self_convergence_order = 0.0;
  double fd_error_estimate = 0.0;     // Richardson estimate for the finest level
  bool fd_dominated = false;
  std::string to_json() const;
};

/// Leapfrog on [−R−t_f−1, R+t_f+1]ⁿ with zero Dirichlet data, at h, h/2 and h/4,
/// compared with the spectral reconstruction on [−R, R]ⁿ at t_final·{1/4, 1/2, 3/4, 1}.
/// n ≤ 3; ConfigError for CFL violations.
EvolveReport evolve_compare(const CauchyData& data, int n, double t_final, const FdGrid& grid, int p_max);

/// One leapfrog run on [−L, L]ⁿ with `cells` cells per side.  For each step in
/// `report_steps`, returns u at the lattice points whose indices are multiples
/// of `stride` and which lie in [−R, R]ⁿ (lexicographic, last coordinate fastest).
std::vector<std::vector<double>> leapfrog(const CauchyData& data, int n, double L, int cells, double dt, int steps,
                                          const std::vector<int>& report_steps, double R, int stride);
/// The points selected by `leapfrog` for the same (n, L, cells, R, stride).
std::vector<std::vector<double>> leapfrog_points(int n, double L, int cells, double R, int stride);

}  // namespace wavebasis
