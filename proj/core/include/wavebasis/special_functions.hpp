#pragma once

// Gegenbauer polynomials, real spherical harmonics on S^{n-1}, harmonic
// space dimensions and Gauss quadrature.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wavebasis/jet.hpp"
#include "wavebasis/polynomial.hpp"

namespace wavebasis {

/// Classical C^α_d with exact coefficients in the monomial basis of s.
struct GegenbauerPoly {
  Rational alpha;
  int degree = 0;
  std::vector<Rational> coeffs;  // coeffs[k] multiplies s^k

  double evaluate(double s) const;
  RationalPolynomial as_polynomial() const;
};

/// C^α_d by the three-term recurrence.  Throws ParameterError for α ≤ −1/2 or d < 0.
GegenbauerPoly gegenbauer(const Rational& alpha, int d);
/// Same with α given in floating point (converted exactly to a rational).
GegenbauerPoly gegenbauer(double alpha, int d);

/// ∫_{-1}^{1} (C^α_d)² (1−s²)^{α−1/2} ds.
double gegenbauer_norm_sq(double alpha, int d);

/// C^α_d(s) by recurrence; T may be double, cplx, Dual or Jet.
template <class T>
T gegenbauer_eval(double alpha, int d, const T& s) {
  T prev = s * 0.0 + 1.0;
  if (d == 0) return prev;
  T cur = s * (2.0 * alpha);
  for (int k = 2; k <= d; ++k) {
    T next = (s * cur * (2.0 * (k + alpha - 1)) - prev * (k + 2.0 * alpha - 2)) / double(k);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// λ^d C^α_d(u/λ) with w = λ²; a polynomial in (u, w), so no square root is taken.
template <class T>
T gegenbauer_homogeneous(double alpha, int d, const T& u, const T& w) {
  T prev = u * 0.0 + 1.0;
  if (d == 0) return prev;
  T cur = u * (2.0 * alpha);
  for (int k = 2; k <= d; ++k) {
    T next = (u * cur * (2.0 * (k + alpha - 1)) - w * prev * (k + 2.0 * alpha - 2)) / double(k);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// dim H_k(ℝ^n): homogeneous harmonic polynomials of degree k.
std::int64_t dim_harmonic(int n_ambient, int k);

/// Area of the unit sphere S^{n-1} ⊂ ℝ^n.
double sphere_area(int n_ambient);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// N-point Gauss–Legendre rule on [−1, 1].
QuadratureRule gauss_legendre(int N);
/// N-point Gauss rule on [−1, 1] for the weight (1−s²)^a, a > −1.
QuadratureRule gauss_gegenbauer(int N, double a);

/// Product rule on S^{n-1} ⊂ ℝ^n, exact for polynomials of degree ≤ `degree`.
struct SphereGrid {
  int n_ambient = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};
SphereGrid sphere_grid(int n_ambient, int degree);

/// Orthonormal real spherical harmonics on S^{n-1} up to degree L.
///
/// Built recursively in dimension: on ℝ^k,
///   h(x) = |x|^d C^α_d(x_k/|x|) h'(x_1..x_{k-1}),  α = l' + (k−2)/2,
/// starting from Re/Im (x₁ + i x₂)^l on ℝ².  Within a degree the index j
/// enumerates the recursion tuples (base kind, l₂, l₃, ...) lexicographically,
/// outermost level first.
class HarmonicBasis {
 public:
  struct Level {
    int d;         // Gegenbauer degree at this level
    double alpha;  // Gegenbauer parameter
  };
  struct Descriptor {
    int l = 0;
    int base_degree = 0;  // degree of the ℝ² factor
    int base_kind = 0;    // 0 constant, 1 Re (x₁+ix₂)^l, 2 Im (x₁+ix₂)^l
    std::vector<Level> levels;  // levels[i] acts on variables 0..i+2
    double scale = 1.0;   // L²(S^{n-1}) normalization of the rational polynomial
  };

  HarmonicBasis(int n_ambient, int max_degree);

  int n_ambient() const { return n_; }
  int max_degree() const { return L_; }
  int count(int l) const { return static_cast<int>(by_degree_.at(l).size()); }
  const Descriptor& descriptor(int l, int j) const { return by_degree_.at(l).at(j); }

  /// Rational polynomial P with h_{l,j} = scale · P exactly.
  RationalPolynomial exact(int l, int j) const;
  double scale(int l, int j) const { return descriptor(l, j).scale; }

  /// h_{l,j}(x) for any x ∈ ℝⁿ (homogeneous extension).
  template <class T>
  T evaluate(int l, int j, std::span<const T> x) const;
  double evaluate(int l, int j, std::span<const double> x) const { return evaluate<double>(l, j, x); }

  /// All h_{l,j}(x) for l ≤ L in (l, j) order; faster than repeated evaluate.
  std::vector<double> evaluate_all(std::span<const double> x) const;
  /// Offset of degree l in the evaluate_all output.
  int offset(int l) const { return offsets_.at(l); }
  int total() const { return offsets_.back(); }

  /// JSON table (degree, index, scale, monomial exponents, coefficient numerator/denominator).
  std::string to_json() const;

 private:
  int n_;
  int L_;
  std::vector<std::vector<Descriptor>> by_degree_;
  std::vector<int> offsets_;
};

template <class T>
T HarmonicBasis::evaluate(int l, int j, std::span<const T> x) const {
  if (static_cast<int>(x.size()) != n_) throw ParameterError("harmonic: point dimension mismatch");
  const Descriptor& D = descriptor(l, j);
  T one = x[0] * 0.0 + 1.0;
  T value = one;
  if (D.base_kind != 0) {
    T re = one, im = x[0] * 0.0;
    for (int k = 0; k < D.base_degree; ++k) {
      T nre = re * x[0] - im * x[1];
      im = re * x[1] + im * x[0];
      re = std::move(nre);
    }
    value = D.base_kind == 1 ? re : im;
  }
  T w = x[0] * x[0] + x[1] * x[1];
  for (std::size_t i = 0; i < D.levels.size(); ++i) {
    const T& u = x[i + 2];
    w = w + u * u;
    if (D.levels[i].d > 0) value = value * gegenbauer_homogeneous(D.levels[i].alpha, D.levels[i].d, u, w);
  }
  return value * D.scale;
}

HarmonicBasis harmonic_basis(int n_ambient, int L);

}  // namespace wavebasis
