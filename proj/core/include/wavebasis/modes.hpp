#pragma once

// The orthonormal basis solutions of □f = 0.
//
// With r = (1−n)/2, an index (p, l, j) is valid when d = p/2 − l + r is a
// nonnegative integer; then α = l − r and k = l + d = p/2 + r.
//
//   f_{p,l,j}(t,x) = N · g(t,x) h_{l,j}(x) / D^{p/2},   D = (1−it)² + |x|²,
//   g = λ^d C^α_d((1−q)/λ),   N = 2^{l−r} p^{−1/2} h_d(α)^{−1/2},
//
// where h_d(α) is the Gegenbauer norm and h_{l,j} the L²(S^{n−1})-orthonormal
// harmonic.  In the compact picture
//
//   G_{p,l,j} = e^{ipφ/2} C^α_d(cos θ) sin^l θ h_{l,j}(x̂) / √h_d(α)
//   F_{p,l,j} = 2^{−r} p^{−1/2} G_{p,l,j},   f = λ^r F.
//
// Negative p denotes the conjugate (negative-energy) mode: F_{−p} = conj F_p.

#include <memory>
#include <string>
#include <vector>

#include "wavebasis/field.hpp"
#include "wavebasis/polynomial.hpp"
#include "wavebasis/special_functions.hpp"

namespace wavebasis {

struct ModeIndex {
  int p = 0;
  int l = 0;
  int j = 0;
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

inline double weight_r(int n) { return 0.5 * (1 - n); }

/// Gegenbauer degree d for (|p|, l); ParameterError if the pair is invalid.
int mode_degree(int n, int p, int l);
bool is_valid_index(int n, const ModeIndex& idx);
void validate_index(int n, const ModeIndex& idx);

/// All positive-energy indices with p ≤ p_max, ordered by p, then l, then j.
std::vector<ModeIndex> enumerate_modes(int n, int p_max);

/// Orthonormal harmonics on S^{n−1}, shared between modes (cached, thread-safe).
std::shared_ptr<const HarmonicBasis> shared_harmonics(int n, int L);

/// λ^d C^α_d((1−q)/λ) as an exact polynomial in (t, x₁..x_n), α = l − r.
RationalPolynomial g_poly(int p, int l, int n);

class ModeFunction {
 public:
  ModeFunction(int n, ModeIndex index);

  int n() const { return n_; }
  const ModeIndex& index() const { return idx_; }
  int d() const { return d_; }
  int k() const { return idx_.l + d_; }
  double alpha() const { return alpha_; }
  /// N in the formula above (excludes the harmonic's own normalization).
  double norm_constant() const { return norm_; }
  const HarmonicBasis& harmonics() const { return *harm_; }

  /// N·g/D^{p/2} as a function of (t, |x|²), so f = radial · h_{l,j}(x).
  template <class T>
  T radial(const T& t, const T& rho2) const;

  /// f(t, x); c = (t, x₁..x_n).
  template <class T>
  T evaluate(std::span<const T> c) const;
  cplx operator()(double t, std::span<const double> x) const;

  /// F(φ, θ, x̂); c = (φ, θ, x̂₁..x̂_n).
  template <class T>
  T evaluate_compact(std::span<const T> c) const;

  /// Angular part of G: C^α_d(cos θ) sin^l θ h(x̂)/√h_d (φ-independent, real).
  double sphere_part(double theta, std::span<const double> xhat) const;

  Field field() const;
  Field compact_field() const;
  /// G = 2^r p^{1/2} F.
  Field g_field() const;

 private:
  int n_;
  ModeIndex idx_;
  int d_;
  double alpha_;
  double norm_;
  double compact_norm_;  // 2^{−r} p^{−1/2} h_d^{−1/2}
  std::shared_ptr<const HarmonicBasis> harm_;
};

ModeFunction mode(const ModeIndex& index, int n);
Field mode_compact(const ModeIndex& index, int n);
Field mode_G(const ModeIndex& index, int n);

/// Unnormalized mode numerator / D^{half_power} with exact Gaussian-rational
/// coefficients (n odd only).  f = norm_constant · numerator / D^{half_power}.
struct RationalMode {
  int n = 0;
  ModeIndex index;
  GaussianPolynomial numerator;
  int half_power = 0;
  double norm_constant = 1.0;

  cplx evaluate(double t, std::span<const double> x) const;
  /// D^{k+1} · □(numerator/D^k), exactly.  Zero iff the mode solves □f = 0.
  GaussianPolynomial kernel_residual() const;
  std::string to_json() const;
};

/// UnsupportedError for even n.
RationalMode rational_mode(const ModeIndex& index, int n);
/// D = (1−it)² + |x|² in variables (t, x₁..x_n).
GaussianPolynomial d_polynomial(int n);

enum class Sector { PLUS, MINUS, BOTH, ZERO };
Sector sector(int n, int m);
std::string to_string(Sector s);

// ---------------------------------------------------------------------------

template <class T>
T ModeFunction::radial(const T& t, const T& rho2) const {
  const T qq = rho2 - t * t;
  const T u = 1.0 - qq;
  const T w = u * u + 4.0 * rho2;
  const T g = gegenbauer_homogeneous(alpha_, d_, u, w);
  const T one_minus_it = 1.0 - t * cplx(0.0, 1.0);
  const T D = one_minus_it * one_minus_it + rho2;
  const int P = std::abs(idx_.p);
  const T denom = (P % 2 == 0) ? pow_int(D, P / 2) : pow_int(sqrt(D), P);
  T value = g / denom * norm_;
  if (idx_.p < 0) {
    using std::conj;
    value = conj(value);
  }
  return value;
}

template <class T>
T ModeFunction::evaluate(std::span<const T> c) const {
  T rho2 = c[0] * 0.0;
  for (int i = 0; i < n_; ++i) rho2 = rho2 + c[1 + i] * c[1 + i];
  return radial(c[0], rho2) * harm_->evaluate<T>(idx_.l, idx_.j, c.subspan(1, n_));
}

template <class T>
T ModeFunction::evaluate_compact(std::span<const T> c) const {
  const T& phi = c[0];
  const T& theta = c[1];
  T value = exp(phi * cplx(0.0, 0.5 * idx_.p));
  value = value * gegenbauer_eval(alpha_, d_, cos(theta)) * pow_int(sin(theta), idx_.l);
  value = value * harm_->evaluate<T>(idx_.l, idx_.j, c.subspan(2, n_));
  // conj(e^{i|p|φ/2}) = e^{ipφ/2} for p < 0; the remaining factors are real.
  return value * compact_norm_;
}

}  // namespace wavebasis
