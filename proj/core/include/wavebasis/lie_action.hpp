#pragma once

// Infinitesimal symmetries of □ and the SL(2,ℝ)×SO(n) action.
//
// Noncompact operators have polynomial coefficients and are held exactly as
// `PolyOperator`s, so commutators and the Casimir identity are checked as
// operator identities.  `DifferentialOperator` is the numeric counterpart
// with arbitrary smooth coefficients; it acts on `Field`s through jets, so
// operator products are simply nested applications.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "wavebasis/field.hpp"
#include "wavebasis/polynomial.hpp"

namespace wavebasis {

class DifferentialOperator;

/// Σ_α a_α(t,x) ∂^α with exact rational polynomial coefficients; variables (t, x₁..x_n).
class PolyOperator {
 public:
  explicit PolyOperator(int nvars = 1) : nvars_(nvars) {}

  static PolyOperator identity(int nvars);
  static PolyOperator multiplication(const RationalPolynomial& a);
  static PolyOperator partial(int nvars, int var);

  int nvars() const { return nvars_; }
  int order() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, RationalPolynomial>& terms() const { return terms_; }

  RationalPolynomial apply(const RationalPolynomial& f) const;

  PolyOperator& operator+=(const PolyOperator& o);
  PolyOperator& operator-=(const PolyOperator& o);
  PolyOperator& operator*=(const Rational& s);
  friend PolyOperator operator+(PolyOperator a, const PolyOperator& b) { return a += b; }
  friend PolyOperator operator-(PolyOperator a, const PolyOperator& b) { return a -= b; }
  friend PolyOperator operator*(PolyOperator a, const Rational& s) { return a *= s; }
  friend PolyOperator operator*(const Rational& s, PolyOperator a) { return a *= s; }
  /// Composition (a∘b)(f) = a(b(f)).
  friend PolyOperator operator*(const PolyOperator& a, const PolyOperator& b);
  friend bool operator==(const PolyOperator& a, const PolyOperator& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  DifferentialOperator numeric() const;
  std::string to_string() const;

 private:
  void add_term(Monomial alpha, const RationalPolynomial& coeff);
  int nvars_;
  std::map<Monomial, RationalPolynomial> terms_;
};

PolyOperator commutator(const PolyOperator& a, const PolyOperator& b);

/// Σ_terms c(·) ∂^α with smooth coefficient fields, evaluated with jets.
/// A term flagged `sphere` differentiates the degree-0 extension
/// F(φ, θ, y/|y|) in the x̂ slots (compact picture only), which turns
/// Euclidean derivatives into spherical ones.
class DifferentialOperator {
 public:
  struct Term {
    Field coeff;
    std::vector<int> alpha;
    bool sphere = false;
  };

  DifferentialOperator(Picture picture, int n) : picture_(picture), n_(n) {}

  Picture picture() const { return picture_; }
  int n() const { return n_; }
  int arity() const { return picture_ == Picture::noncompact ? n_ + 1 : n_ + 2; }
  int order() const;
  const std::vector<Term>& terms() const { return terms_; }

  void add(Field coeff, std::vector<int> alpha, bool sphere = false);
  /// Constant-coefficient convenience.
  void add(cplx coeff, std::vector<int> alpha, bool sphere = false);

  Field apply(const Field& f) const;
  cplx apply_at(const Field& f, std::span<const double> point) const;
  /// Taylor jet of (this f) about `point`, of order `k`.
  Jet apply_jet(const Field& f, std::span<const double> point, int k) const;

  DifferentialOperator& operator+=(const DifferentialOperator& o);
  friend DifferentialOperator operator+(DifferentialOperator a, const DifferentialOperator& b) { return a += b; }
  friend DifferentialOperator operator*(cplx s, const DifferentialOperator& a);
  friend DifferentialOperator operator-(const DifferentialOperator& a, const DifferentialOperator& b) {
    return a + cplx(-1.0) * b;
  }

 private:
  Picture picture_;
  int n_;
  std::vector<Term> terms_;
};

/// Field of the composition a∘b applied to f, and of the commutator [a, b] f.
Field compose_apply(const DifferentialOperator& a, const DifferentialOperator& b, const Field& f);
Field commutator_apply(const DifferentialOperator& a, const DifferentialOperator& b, const Field& f);

/// F(φ, θ, y/|y|): the degree-0 extension in the x̂ slots of a compact field.
Field degree_zero_extension(const Field& F);

// ---------------------------------------------------------------------------
// Noncompact operators (exact).

struct Sl2Triple {
  PolyOperator h, e_plus, e_minus;
};
/// h = 2(r − t∂t − x·∂), e⁺ = −∂t, e⁻ = −2t(r − t∂t − x·∂) + q∂t.
Sl2Triple sl2_triple(int n);
/// −x_j∂_i + x_i∂_j (i, j are 0-based spatial indices).
PolyOperator rotation_generator(int n, int i, int j);
PolyOperator casimir_sl2(int n);
PolyOperator casimir_so(int n);
PolyOperator wave_operator_poly(int n);
/// Ω_SL(2) − Ω_SO(n) − r(r+1) − |x|²□; the zero operator.
PolyOperator casimir_identity_operator(int n);

struct WaveResidual {
  double residual;  // |□f|
  double scale;     // |∂t²f| + Σ|∂ᵢ²f|, the size of the terms that cancel
};
/// □f at a point from a second-order jet of a noncompact field.
WaveResidual wave_residual(const Field& f, std::span<const double> point);

/// max over pts of |(Ω_SL(2) − Ω_SO(n) − r(r+1)) f − |x|² □ f|.
double casimir_identity_residual(const Field& f, const std::vector<std::vector<double>>& pts, int n);
/// Exact version on a polynomial: returns the residual polynomial.
RationalPolynomial casimir_identity_residual(const RationalPolynomial& f, int n);

// ---------------------------------------------------------------------------
// Compact operators (numeric).

struct EnergyLadder {
  DifferentialOperator z, n_plus, n_minus;
};
/// z = −2i∂φ, n± = e^{±iφ}(r cos θ ± i cos θ ∂φ − sin θ ∂θ).
EnergyLadder energy_ladder(int n);
/// −r sin φ cos θ − (1 + cos φ cos θ)∂φ + sin φ sin θ ∂θ.
DifferentialOperator e_plus_compact(int n);
/// r(1+r) − r² sin²θ − 2r cos θ sin θ ∂θ + sin²θ(−∂φ² + ∂θ²).
DifferentialOperator casimir_sl2_compact(int n);
/// −Δ_{S^{n−1}} in the x̂ slots.
DifferentialOperator casimir_so_n_compact(int n);
/// −Δ_{S^n} = −(∂θ² + (n−1) cot θ ∂θ + csc²θ Δ_{S^{n−1}}).
DifferentialOperator casimir_so_n1_compact(int n);
/// −∂φ².
DifferentialOperator casimir_so2_compact(int n);

/// max over pts of |(Ω_SL(2) − Ω_SO(n) − r(r+1)) F − sin²θ (Ω_SO(2) − Ω_SO(n+1) − r²) F|.
double omega_compact_residual(const Field& F, const std::vector<std::vector<double>>& pts, int n, int m);

// ---------------------------------------------------------------------------
// Group action.

struct GroupElement {
  std::array<double, 4> sl2{1.0, 0.0, 0.0, 1.0};  // a, b, c, d
  std::vector<double> rot;                         // n×n row-major, orthogonal
  int m = 0;
  double r = 0.0;

  static GroupElement identity(int n, int m);
  int n() const;
  /// Throws ParameterError unless det = 1 and rotᵀrot = I within 1e−12.
  void validate() const;
  friend GroupElement operator*(const GroupElement& g1, const GroupElement& g2);
};

/// (g·f)(t,x) = (√sgn δ)^m |δ|^r f(((−b+dt)(a−ct) + cd|x|²)/δ, xk/δ), δ = (a−ct)² − c²|x|².
/// ChartError where δ (or a − ct − c|x| when δ > 0) is within 1e−12 of zero.
Field group_act(const GroupElement& g, const Field& f);

/// True iff the mode (p, l, ·) lies in a K-type allowed for (n, m).
bool ktype_check(int n, int m, int p, int l);

}  // namespace wavebasis
