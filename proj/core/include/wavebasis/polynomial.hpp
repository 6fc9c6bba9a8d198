#pragma once

// Sparse multivariate polynomials with exact coefficients.
//
// Monomials in up to eight variables are packed into a single 64-bit key
// (8 bits per exponent).  Terms are kept sorted by key with no zero
// coefficients, so structural equality is polynomial equality.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wavebasis/errors.hpp"

namespace wavebasis {

using Rational = mpq_class;

/// Element of ℚ(i).
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT(implicit)
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long v) : re(v), im(0) {}  // NOLINT(implicit)

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussianRational conj() const { return {re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const GaussianRational& q) { return q.is_zero(); }
inline std::complex<double> to_complex(const Rational& q) { return {q.get_d(), 0.0}; }
inline std::complex<double> to_complex(const GaussianRational& q) { return q.to_complex(); }

/// Exponent vector of up to eight variables packed into 64 bits.
class Monomial {
 public:
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxExponent = 255;

  constexpr Monomial() = default;
  static Monomial from_exponents(std::span<const int> exps);
  static Monomial unit(int var, int power = 1);
  static constexpr Monomial from_key(std::uint64_t key) { return Monomial(key); }

  int exponent(int var) const { return static_cast<int>((key_ >> (8 * var)) & 0xffu); }
  int total_degree() const;
  std::uint64_t key() const { return key_; }
  std::vector<int> exponents(int nvars) const;

  /// Product of monomials; throws if any exponent would exceed kMaxExponent.
  Monomial operator*(const Monomial& o) const;
  /// Lowers the exponent of `var` by one (caller checks exponent > 0).
  Monomial lowered(int var) const { return Monomial(key_ - (std::uint64_t{1} << (8 * var))); }

  friend bool operator==(Monomial a, Monomial b) { return a.key_ == b.key_; }
  friend bool operator<(Monomial a, Monomial b) { return a.key_ < b.key_; }

 private:
  explicit constexpr Monomial(std::uint64_t k) : key_(k) {}
  std::uint64_t key_ = 0;
};

template <class Coeff>
class Polynomial {
 public:
  using Term = std::pair<Monomial, Coeff>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) { check_nvars(nvars); }

  static Polynomial constant(int nvars, Coeff c) {
    Polynomial p(nvars);
    if (!wavebasis::is_zero(c)) p.terms_.emplace_back(Monomial{}, std::move(c));
    return p;
  }
  static Polynomial variable(int nvars, int var) {
    Polynomial p(nvars);
    p.terms_.emplace_back(Monomial::unit(var), Coeff(1));
    return p;
  }
  static Polynomial monomial(int nvars, Monomial m, Coeff c) {
    Polynomial p(nvars);
    if (!wavebasis::is_zero(c)) p.terms_.emplace_back(m, std::move(c));
    return p;
  }
  /// Builds from arbitrary (possibly repeated, possibly zero) terms.
  static Polynomial from_terms(int nvars, std::vector<Term> terms);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  /// Degree in a single variable.
  int degree_in(int var) const;
  Coeff coefficient(Monomial m) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Coeff& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& t : a.terms_) t.second = -t.second;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const Coeff& c) { return a *= c; }
  friend Polynomial operator*(const Coeff& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) { return multiply(a, b); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Polynomial pow(int e) const;
  Polynomial derivative(int var) const;

  /// Evaluates at `x`; T must support T*T, T+T and T*std::complex<double>.
  template <class T>
  T evaluate(std::span<const T> x, const T& zero) const;

  std::string to_string() const;

 private:
  static void check_nvars(int nv) {
    if (nv < 0 || nv > Monomial::kMaxVars) throw ParameterError("polynomial: unsupported variable count");
  }
  static Polynomial multiply(const Polynomial& a, const Polynomial& b);
  void normalize();

  int nvars_ = 0;
  std::vector<Term> terms_;
};

using RationalPolynomial = Polynomial<Rational>;
using GaussianPolynomial = Polynomial<GaussianRational>;

extern template class Polynomial<Rational>;
extern template class Polynomial<GaussianRational>;

GaussianPolynomial to_gaussian(const RationalPolynomial& p);
/// Embeds a polynomial into a larger variable set: variable i ↦ variable i + offset.
RationalPolynomial shift_variables(const RationalPolynomial& p, int new_nvars, int offset);

/// −∂₀² + Σ_{i≥1} ∂ᵢ² with variable 0 as time.
template <class Coeff>
Polynomial<Coeff> wave_operator(const Polynomial<Coeff>& p);
/// Σᵢ ∂ᵢ² over variables [first, nvars).
template <class Coeff>
Polynomial<Coeff> laplacian(const Polynomial<Coeff>& p, int first = 0);
/// Minkowski pairing −∂₀a∂₀b + Σ_{i≥1} ∂ᵢa∂ᵢb.
template <class Coeff>
Polynomial<Coeff> minkowski_gradient_pairing(const Polynomial<Coeff>& a, const Polynomial<Coeff>& b);

/// Exact division a = q·b + rem by a polynomial whose leading term (in the
/// sorted term order) has an invertible coefficient.  Returns (q, rem).
std::pair<GaussianPolynomial, GaussianPolynomial> divide(const GaussianPolynomial& a,
                                                         const GaussianPolynomial& b);

// ---------------------------------------------------------------------------

template <class Coeff>
template <class T>
T Polynomial<Coeff>::evaluate(std::span<const T> x, const T& zero) const {
  if (static_cast<int>(x.size()) != nvars_) throw ParameterError("polynomial: evaluation arity mismatch");
  // Cache powers x_v^k up to the degree in each variable.
  std::vector<std::vector<T>> powers(nvars_);
  for (int v = 0; v < nvars_; ++v) {
    const int deg = degree_in(v);
    powers[v].reserve(deg + 1);
    powers[v].push_back(zero + 1.0);
    for (int k = 1; k <= deg; ++k) powers[v].push_back(powers[v].back() * x[v]);
  }
  T acc = zero;
  for (const auto& [m, c] : terms_) {
    T term = zero + to_complex(c);
    for (int v = 0; v < nvars_; ++v) {
      const int e = m.exponent(v);
      if (e) term = term * powers[v][e];
    }
    acc = acc + term;
  }
  return acc;
}

}  // namespace wavebasis
