#pragma once

// Forward-mode automatic differentiation over complex scalars.
//
// `Dual` carries a value and one directional derivative; it is the cheap
// scalar for quadrature loops that need ∂t or ∂φ on a slice.  `Jet` is a
// truncated multivariate Taylor polynomial of arbitrary order; differential
// operators act on jets directly, so compositions such as [z, n⁺] are
// evaluated without nested differentiation.
//
// All transcendental functions use the principal branch.  `atan2`, `acos`
// and `abs_real` assume real-valued arguments (imaginary parts are ignored
// in branch decisions and must be zero for the result to be meaningful).

#include <complex>
#include <span>
#include <vector>

namespace wavebasis {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Plain complex scalars: the same vocabulary the AD types provide.

inline double re_value(const cplx& z) { return z.real(); }
inline cplx atan2(const cplx& y, const cplx& x) { return std::atan2(y.real(), x.real()); }
inline cplx acos_real(const cplx& x) { return std::acos(x.real()); }
inline cplx abs_real(const cplx& x) { return std::abs(x.real()); }
inline cplx pow_int(const cplx& x, int e) {
  cplx r = 1.0;
  cplx b = x;
  bool neg = e < 0;
  unsigned u = neg ? static_cast<unsigned>(-e) : static_cast<unsigned>(e);
  while (u) {
    if (u & 1u) r *= b;
    u >>= 1u;
    if (u) b *= b;
  }
  return neg ? 1.0 / r : r;
}

// ---------------------------------------------------------------------------

/// Value plus one directional derivative.
struct Dual {
  cplx v{};
  cplx d{};

  Dual() = default;
  Dual(cplx value, cplx deriv = 0.0) : v(value), d(deriv) {}  // NOLINT(implicit)
  Dual(double value) : v(value), d(0.0) {}                     // NOLINT(implicit)

  static Dual variable(double value) { return {cplx(value), cplx(1.0)}; }

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    const cplx inv = 1.0 / o.v;
    d = (d - v * inv * o.d) * inv;
    v *= inv;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator+(Dual a, double b) { a.v += b; return a; }
  friend Dual operator+(double b, Dual a) { a.v += b; return a; }
  friend Dual operator-(Dual a, double b) { a.v -= b; return a; }
  friend Dual operator-(double b, const Dual& a) { return {b - a.v, -a.d}; }
  friend Dual operator*(Dual a, double b) { a.v *= b; a.d *= b; return a; }
  friend Dual operator*(double b, Dual a) { a.v *= b; a.d *= b; return a; }
  friend Dual operator*(Dual a, cplx b) { a.v *= b; a.d *= b; return a; }
  friend Dual operator*(cplx b, Dual a) { a.v *= b; a.d *= b; return a; }
  friend Dual operator+(Dual a, cplx b) { a.v += b; return a; }
  friend Dual operator/(Dual a, double b) { a.v /= b; a.d /= b; return a; }
  friend Dual operator/(double b, const Dual& a) { return Dual(b) / a; }
};

inline double re_value(const Dual& x) { return x.v.real(); }
inline Dual exp(const Dual& x) { const cplx e = std::exp(x.v); return {e, e * x.d}; }
inline Dual log(const Dual& x) { return {std::log(x.v), x.d / x.v}; }
inline Dual sqrt(const Dual& x) { const cplx s = std::sqrt(x.v); return {s, x.d / (2.0 * s)}; }
inline Dual pow(const Dual& x, double e) {
  const cplx p = std::pow(x.v, e);
  return {p, e * p / x.v * x.d};
}
inline Dual pow_int(const Dual& x, int e) {
  const cplx p = pow_int(x.v, e);
  const cplx pm = e == 0 ? cplx(0.0) : double(e) * pow_int(x.v, e - 1);
  return {p, pm * x.d};
}
inline Dual sin(const Dual& x) { return {std::sin(x.v), std::cos(x.v) * x.d}; }
inline Dual cos(const Dual& x) { return {std::cos(x.v), -std::sin(x.v) * x.d}; }
inline Dual atan2(const Dual& y, const Dual& x) {
  const double xv = x.v.real(), yv = y.v.real();
  const double r2 = xv * xv + yv * yv;
  return {std::atan2(yv, xv), (xv * y.d - yv * x.d) / r2};
}
inline Dual acos_real(const Dual& x) {
  const double xv = x.v.real();
  return {std::acos(xv), -x.d / std::sqrt(1.0 - xv * xv)};
}
inline Dual abs_real(const Dual& x) { return x.v.real() < 0 ? -x : x; }
/// Conjugate of a complex function of real variables.
inline Dual conj(const Dual& x) { return {std::conj(x.v), std::conj(x.d)}; }

// ---------------------------------------------------------------------------

/// Monomial bookkeeping shared by all jets with the same (nvars, order).
/// Monomials are listed by total degree first, so the monomials of degree
/// ≤ k form a prefix for every k; truncation is therefore a resize.
class JetLayout {
 public:
  static const JetLayout& get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(degree_.size()); }
  /// Number of monomials with total degree ≤ k.
  int prefix(int k) const { return prefix_[k]; }
  int degree(int i) const { return degree_[i]; }
  const std::vector<int>& exponents(int i) const { return monomials_[i]; }
  /// Index of monomial i + e_var, or −1 if that exceeds the order.
  int raised(int var, int i) const { return raise_[var][i]; }
  int index_of(std::span<const int> exps) const;

  struct Product {
    int a, b, out;
  };
  const std::vector<Product>& products() const { return products_; }

 private:
  JetLayout(int nvars, int order);

  int nvars_;
  int order_;
  std::vector<std::vector<int>> monomials_;
  std::vector<int> degree_;
  std::vector<int> prefix_;
  std::vector<std::vector<int>> raise_;
  std::vector<Product> products_;
};

class Jet {
 public:
  Jet() = default;
  Jet(const JetLayout& layout, cplx value);

  /// The coordinate function x_var expanded about `value`.
  static Jet variable(int nvars, int order, int var, double value);
  static Jet constant(int nvars, int order, cplx value);
  /// Jet seeds for a full point: x_i = point[i] + δ_i.
  static std::vector<Jet> seed(std::span<const double> point, int order);
  static Jet from_coefficients(const JetLayout& layout, std::vector<cplx> coeffs);

  const JetLayout& layout() const { return *layout_; }
  int nvars() const { return layout_->nvars(); }
  int order() const { return layout_->order(); }
  cplx value() const { return c_[0]; }
  /// Taylor coefficient of the monomial with exponents `exps`.
  cplx coefficient(std::span<const int> exps) const;
  /// Mixed partial derivative ∂^exps at the expansion point.
  cplx derivative(std::span<const int> exps) const;
  const std::vector<cplx>& coefficients() const { return c_; }

  /// ∂/∂x_var as a jet of one lower order.
  Jet partial(int var) const;
  /// Same jet truncated to `order` (≤ current order).
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(cplx s);
  Jet& operator+=(cplx s) { c_[0] += s; return *this; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator+(Jet a, cplx b) { return a += b; }
  friend Jet operator+(cplx b, Jet a) { return a += b; }
  friend Jet operator+(Jet a, double b) { return a += cplx(b); }
  friend Jet operator+(double b, Jet a) { return a += cplx(b); }
  friend Jet operator-(Jet a, cplx b) { return a += -b; }
  friend Jet operator-(Jet a, double b) { return a += cplx(-b); }
  friend Jet operator-(cplx b, const Jet& a) { return (-a) + b; }
  friend Jet operator-(double b, const Jet& a) { return (-a) + cplx(b); }
  friend Jet operator*(Jet a, cplx b) { return a *= b; }
  friend Jet operator*(cplx b, Jet a) { return a *= b; }
  friend Jet operator*(Jet a, double b) { return a *= cplx(b); }
  friend Jet operator*(double b, Jet a) { return a *= cplx(b); }
  friend Jet operator/(Jet a, cplx b) { return a *= 1.0 / b; }
  friend Jet operator/(Jet a, double b) { return a *= 1.0 / b; }
  friend Jet operator/(cplx b, const Jet& a);
  friend Jet operator/(double b, const Jet& a) { return cplx(b) / a; }

  /// Σ_k taylor[k]·(x − x₀)^k, where x₀ is this jet's value.
  Jet compose(std::span<const cplx> taylor) const;

 private:
  const JetLayout* layout_ = nullptr;
  std::vector<cplx> c_;
};

inline double re_value(const Jet& x) { return x.value().real(); }
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double e);
Jet pow_int(const Jet& x, int e);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet atan2(const Jet& y, const Jet& x);
Jet acos_real(const Jet& x);
inline Jet abs_real(const Jet& x) { return x.value().real() < 0 ? -x : x; }
/// Conjugate of a complex function of real variables (coefficient-wise).
inline Jet conj(const Jet& x) {
  std::vector<cplx> c = x.coefficients();
  for (auto& v : c) v = std::conj(v);
  return Jet::from_coefficients(x.layout(), std::move(c));
}

}  // namespace wavebasis
