#include "wavebasis/lie_action.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "wavebasis/errors.hpp"
#include "wavebasis/geometry.hpp"
#include "wavebasis/modes.hpp"

namespace wavebasis {

namespace {

cplx i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Rational binomial(int a, int b) {
  Rational r(1);
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

RationalPolynomial derivative_multi(RationalPolynomial f, Monomial alpha, int nvars) {
  for (int v = 0; v < nvars; ++v) {
    for (int k = 0; k < alpha.exponent(v); ++k) f = f.derivative(v);
  }
  return f;
}

Field polynomial_field(Picture picture, int n, const RationalPolynomial& p) {
  auto poly = std::make_shared<const RationalPolynomial>(p);
  return Field::from_generic(picture, n, [poly](auto c) {
    using T = std::decay_t<decltype(c[0])>;
    return poly->template evaluate<T>(c, c[0] * 0.0);
  });
}

Field constant_field(Picture picture, int n, cplx v) {
  return Field::from_generic(picture, n, [v](auto c) { return c[0] * 0.0 + v; });
}

// True when every c[i] is exactly the coordinate seed x_i (so no chain rule is needed).
bool is_identity_seed(std::span<const Jet> c) {
  const int nv = static_cast<int>(c.size());
  for (int i = 0; i < nv; ++i) {
    if (c[i].nvars() != nv) return false;
    const auto& co = c[i].coefficients();
    for (std::size_t k = 1; k < co.size(); ++k) {
      const cplx expect = (static_cast<int>(k) == i + 1) ? cplx(1.0) : cplx(0.0);
      if (co[k] != expect) return false;
    }
  }
  return true;
}

// J(c − c₀): substitutes the nilpotent parts of `c` into the Taylor polynomial J.
Jet compose_jet(const Jet& J, std::span<const Jet> c) {
  const int nv = J.nvars();
  const int K = c[0].order();
  std::vector<std::vector<Jet>> powers(nv);
  for (int v = 0; v < nv; ++v) {
    Jet h = c[v] - c[v].value();
    powers[v].push_back(Jet::constant(c[v].nvars(), K, 1.0));
    for (int e = 1; e <= J.order(); ++e) powers[v].push_back(powers[v].back() * h);
  }
  Jet acc = Jet::constant(c[0].nvars(), K, 0.0);
  const auto& L = J.layout();
  for (int i = 0; i < L.size(); ++i) {
    const cplx a = J.coefficients()[i];
    if (a == cplx(0.0)) continue;
    Jet term = Jet::constant(c[0].nvars(), K, a);
    const auto& e = L.exponents(i);
    for (int v = 0; v < nv; ++v) {
      if (e[v]) term = term * powers[v][e[v]];
    }
    acc += term;
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// PolyOperator

PolyOperator PolyOperator::identity(int nvars) {
  PolyOperator op(nvars);
  op.add_term(Monomial{}, RationalPolynomial::constant(nvars, Rational(1)));
  return op;
}

PolyOperator PolyOperator::multiplication(const RationalPolynomial& a) {
  PolyOperator op(a.nvars());
  op.add_term(Monomial{}, a);
  return op;
}

PolyOperator PolyOperator::partial(int nvars, int var) {
  PolyOperator op(nvars);
  op.add_term(Monomial::unit(var), RationalPolynomial::constant(nvars, Rational(1)));
  return op;
}

void PolyOperator::add_term(Monomial alpha, const RationalPolynomial& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    terms_.emplace(alpha, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

int PolyOperator::order() const {
  int o = 0;
  for (const auto& [alpha, c] : terms_) o = std::max(o, alpha.total_degree());
  return o;
}

RationalPolynomial PolyOperator::apply(const RationalPolynomial& f) const {
  RationalPolynomial out(nvars_);
  for (const auto& [alpha, c] : terms_) out += c * derivative_multi(f, alpha, nvars_);
  return out;
}

PolyOperator& PolyOperator::operator+=(const PolyOperator& o) {
  for (const auto& [alpha, c] : o.terms_) add_term(alpha, c);
  return *this;
}

PolyOperator& PolyOperator::operator-=(const PolyOperator& o) {
  for (const auto& [alpha, c] : o.terms_) add_term(alpha, -c);
  return *this;
}

PolyOperator& PolyOperator::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, c] : terms_) c *= s;
  return *this;
}

PolyOperator operator*(const PolyOperator& a, const PolyOperator& b) {
  // (a ∂^α)(b ∂^β) = Σ_{γ≤α} C(α,γ) a (∂^γ b) ∂^{α−γ+β}
  const int nv = a.nvars_;
  PolyOperator out(nv);
  for (const auto& [alpha, ca] : a.terms_) {
    std::vector<int> ea = alpha.exponents(nv);
    std::vector<int> gamma(nv, 0);
    // Enumerate γ ≤ α.
    while (true) {
      Rational coeff(1);
      for (int v = 0; v < nv; ++v) coeff *= binomial(ea[v], gamma[v]);
      const Monomial g = Monomial::from_exponents(gamma);
      std::vector<int> rest(nv);
      for (int v = 0; v < nv; ++v) rest[v] = ea[v] - gamma[v];
      const Monomial rest_m = Monomial::from_exponents(rest);
      for (const auto& [beta, cb] : b.terms_) {
        RationalPolynomial db = derivative_multi(cb, g, nv);
        if (db.is_zero()) continue;
        out.add_term(rest_m * beta, ca * db * coeff);
      }
      int v = 0;
      while (v < nv && gamma[v] == ea[v]) gamma[v++] = 0;
      if (v == nv) break;
      ++gamma[v];
    }
  }
  return out;
}

PolyOperator commutator(const PolyOperator& a, const PolyOperator& b) { return a * b - b * a; }

DifferentialOperator PolyOperator::numeric() const {
  DifferentialOperator op(Picture::noncompact, nvars_ - 1);
  for (const auto& [alpha, c] : terms_) op.add(polynomial_field(Picture::noncompact, nvars_ - 1, c), alpha.exponents(nvars_));
  return op;
}

std::string PolyOperator::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    for (int v = 0; v < nvars_; ++v) {
      const int e = alpha.exponent(v);
      if (e == 1) os << "*d" << v;
      if (e > 1) os << "*d" << v << "^" << e;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// DifferentialOperator

int DifferentialOperator::order() const {
  int o = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.alpha) s += e;
    o = std::max(o, s);
  }
  return o;
}

void DifferentialOperator::add(Field coeff, std::vector<int> alpha, bool sphere) {
  if (static_cast<int>(alpha.size()) != arity()) throw ParameterError("operator: multi-index arity mismatch");
  if (sphere && picture_ != Picture::compact) throw ParameterError("operator: sphere terms need the compact picture");
  terms_.push_back({std::move(coeff), std::move(alpha), sphere});
}

void DifferentialOperator::add(cplx coeff, std::vector<int> alpha, bool sphere) {
  add(constant_field(picture_, n_, coeff), std::move(alpha), sphere);
}

DifferentialOperator& DifferentialOperator::operator+=(const DifferentialOperator& o) {
  if (o.picture_ != picture_ || o.n_ != n_) throw ParameterError("operator: incompatible operands");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

DifferentialOperator operator*(cplx s, const DifferentialOperator& a) {
  DifferentialOperator out(a.picture_, a.n_);
  for (const auto& t : a.terms_) {
    Field c = t.coeff;
    out.terms_.push_back({Field::from_generic(a.picture_, a.n_, [c, s](auto x) { return c(x) * s; }), t.alpha, t.sphere});
  }
  return out;
}

Field degree_zero_extension(const Field& F) {
  if (F.picture() != Picture::compact) throw ParameterError("degree_zero_extension: compact field expected");
  const int n = F.n();
  return Field::from_generic(Picture::compact, n, [F, n](auto c) {
    using T = std::decay_t<decltype(c[0])>;
    T rho2 = c[0] * 0.0;
    for (int i = 0; i < n; ++i) rho2 = rho2 + c[2 + i] * c[2 + i];
    const T rho = sqrt(rho2);
    std::vector<T> y(c.begin(), c.end());
    for (int i = 0; i < n; ++i) y[2 + i] = c[2 + i] / rho;
    return F(std::span<const T>(y));
  });
}

Jet DifferentialOperator::apply_jet(const Field& f, std::span<const double> point, int k) const {
  if (static_cast<int>(point.size()) != arity()) throw ParameterError("operator: point arity mismatch");
  const int ord = order();
  const std::vector<Jet> seeds = Jet::seed(point, k + ord);
  const Jet F = f(std::span<const Jet>(seeds));
  Jet Fext;
  bool have_ext = false;
  const std::vector<Jet> low = Jet::seed(point, k);
  Jet acc = Jet::constant(arity(), k, 0.0);
  for (const auto& term : terms_) {
    if (term.sphere && !have_ext) {
      Fext = degree_zero_extension(f)(std::span<const Jet>(seeds));
      have_ext = true;
    }
    Jet D = term.sphere ? Fext : F;
    for (int v = 0; v < arity(); ++v) {
      for (int e = 0; e < term.alpha[v]; ++e) D = D.partial(v);
    }
    acc += term.coeff(std::span<const Jet>(low)) * D.truncated(k);
  }
  return acc;
}

cplx DifferentialOperator::apply_at(const Field& f, std::span<const double> point) const {
  return apply_jet(f, point, 0).value();
}

Field DifferentialOperator::apply(const Field& f) const {
  auto op = std::make_shared<const DifferentialOperator>(*this);
  return Field::from_generic(picture_, n_, [op, f](auto c) {
    using T = std::decay_t<decltype(c[0])>;
    std::vector<double> point(c.size());
    if constexpr (std::is_same_v<T, cplx>) {
      for (std::size_t i = 0; i < c.size(); ++i) point[i] = c[i].real();
      return op->apply_jet(f, point, 0).value();
    } else if constexpr (std::is_same_v<T, Dual>) {
      for (std::size_t i = 0; i < c.size(); ++i) point[i] = c[i].v.real();
      const Jet J = op->apply_jet(f, point, 1);
      Dual out(J.value(), 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) out.d += c[i].d * J.coefficients()[i + 1];
      return out;
    } else {
      for (std::size_t i = 0; i < c.size(); ++i) point[i] = c[i].value().real();
      const Jet J = op->apply_jet(f, point, c[0].order());
      if (is_identity_seed(c)) return J;
      return compose_jet(J, c);
    }
  });
}

Field compose_apply(const DifferentialOperator& a, const DifferentialOperator& b, const Field& f) {
  return a.apply(b.apply(f));
}

Field commutator_apply(const DifferentialOperator& a, const DifferentialOperator& b, const Field& f) {
  const Field ab = a.apply(b.apply(f));
  const Field ba = b.apply(a.apply(f));
  return Field::from_generic(f.picture(), f.n(), [ab, ba](auto c) { return ab(c) - ba(c); });
}

// ---------------------------------------------------------------------------
// Noncompact operators

namespace {

PolyOperator euler(int n) {
  // t∂t + x·∂
  const int nv = n + 1;
  PolyOperator op(nv);
  for (int v = 0; v < nv; ++v) {
    op += PolyOperator::multiplication(RationalPolynomial::variable(nv, v)) * PolyOperator::partial(nv, v);
  }
  return op;
}

}  // namespace

Sl2Triple sl2_triple(int n) {
  if (n < 2) throw UnsupportedError("sl2_triple: need n >= 2");
  const int nv = n + 1;
  const Rational r(1 - n, 2);
  using P = RationalPolynomial;
  const PolyOperator base = PolyOperator::identity(nv) * r - euler(n);  // r − t∂t − x·∂
  P q = -(P::variable(nv, 0) * P::variable(nv, 0));
  for (int i = 1; i <= n; ++i) q += P::variable(nv, i) * P::variable(nv, i);
  Sl2Triple s{PolyOperator(nv), PolyOperator(nv), PolyOperator(nv)};
  s.h = base * Rational(2);
  s.e_plus = PolyOperator::partial(nv, 0) * Rational(-1);
  s.e_minus = PolyOperator::multiplication(P::variable(nv, 0) * Rational(-2)) * base +
              PolyOperator::multiplication(q) * PolyOperator::partial(nv, 0);
  return s;
}

PolyOperator rotation_generator(int n, int i, int j) {
  const int nv = n + 1;
  using P = RationalPolynomial;
  return PolyOperator::multiplication(-P::variable(nv, j + 1)) * PolyOperator::partial(nv, i + 1) +
         PolyOperator::multiplication(P::variable(nv, i + 1)) * PolyOperator::partial(nv, j + 1);
}

PolyOperator casimir_sl2(int n) {
  const Sl2Triple s = sl2_triple(n);
  return s.h * s.h * Rational(1, 4) + (s.e_plus * s.e_minus + s.e_minus * s.e_plus) * Rational(1, 2);
}

PolyOperator casimir_so(int n) {
  PolyOperator out(n + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const PolyOperator R = rotation_generator(n, i, j);
      out -= R * R;
    }
  }
  return out;
}

PolyOperator wave_operator_poly(int n) {
  const int nv = n + 1;
  PolyOperator out = PolyOperator::partial(nv, 0) * PolyOperator::partial(nv, 0) * Rational(-1);
  for (int i = 1; i <= n; ++i) out += PolyOperator::partial(nv, i) * PolyOperator::partial(nv, i);
  return out;
}

namespace {

PolyOperator casimir_lhs(int n) {
  const Rational r(1 - n, 2);
  return casimir_sl2(n) - casimir_so(n) - PolyOperator::identity(n + 1) * (r * (r + 1));
}

PolyOperator casimir_rhs(int n) {
  const int nv = n + 1;
  RationalPolynomial rho2(nv);
  for (int i = 1; i <= n; ++i) rho2 += RationalPolynomial::variable(nv, i) * RationalPolynomial::variable(nv, i);
  return PolyOperator::multiplication(rho2) * wave_operator_poly(n);
}

}  // namespace

WaveResidual wave_residual(const Field& f, std::span<const double> point) {
  if (f.picture() != Picture::noncompact) throw ParameterError("wave_residual: noncompact field expected");
  const std::vector<Jet> seeds = Jet::seed(point, 2);
  const Jet J = f(std::span<const Jet>(seeds));
  std::vector<int> e(f.arity(), 0);
  cplx box = 0.0;
  double scale = 0.0;
  for (int v = 0; v < f.arity(); ++v) {
    e[v] = 2;
    const cplx d2 = J.derivative(e);
    e[v] = 0;
    box += v == 0 ? -d2 : d2;
    scale += std::abs(d2);
  }
  return {std::abs(box), scale};
}

PolyOperator casimir_identity_operator(int n) { return casimir_lhs(n) - casimir_rhs(n); }

RationalPolynomial casimir_identity_residual(const RationalPolynomial& f, int n) {
  return casimir_lhs(n).apply(f) - casimir_rhs(n).apply(f);
}

double casimir_identity_residual(const Field& f, const std::vector<std::vector<double>>& pts, int n) {
  const DifferentialOperator lhs = casimir_lhs(n).numeric();
  const DifferentialOperator rhs = casimir_rhs(n).numeric();
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, std::abs(lhs.apply_at(f, p) - rhs.apply_at(f, p)));
  return worst;
}

// ---------------------------------------------------------------------------
// Compact operators

namespace {

std::vector<int> multi(int n, int dphi, int dtheta) {
  std::vector<int> a(n + 2, 0);
  a[0] = dphi;
  a[1] = dtheta;
  return a;
}

template <class G>
Field compact_coeff(int n, G g) {
  return Field::from_generic(Picture::compact, n, g);
}

}  // namespace

EnergyLadder energy_ladder(int n) {
  const double r = weight_r(n);
  EnergyLadder L{DifferentialOperator(Picture::compact, n), DifferentialOperator(Picture::compact, n),
                 DifferentialOperator(Picture::compact, n)};
  L.z.add(cplx(0.0, -2.0), multi(n, 1, 0));
  for (int s : {+1, -1}) {
    DifferentialOperator& op = s > 0 ? L.n_plus : L.n_minus;
    const cplx is(0.0, s);
    op.add(compact_coeff(n, [r, is](auto c) { return exp(c[0] * is) * cos(c[1]) * r; }), multi(n, 0, 0));
    op.add(compact_coeff(n, [is](auto c) { return exp(c[0] * is) * cos(c[1]) * is; }), multi(n, 1, 0));
    op.add(compact_coeff(n, [is](auto c) { return exp(c[0] * is) * sin(c[1]) * (-1.0); }), multi(n, 0, 1));
  }
  return L;
}

DifferentialOperator e_plus_compact(int n) {
  const double r = weight_r(n);
  DifferentialOperator op(Picture::compact, n);
  op.add(compact_coeff(n, [r](auto c) { return sin(c[0]) * cos(c[1]) * (-r); }), multi(n, 0, 0));
  op.add(compact_coeff(n, [](auto c) { return -(1.0 + cos(c[0]) * cos(c[1])); }), multi(n, 1, 0));
  op.add(compact_coeff(n, [](auto c) { return sin(c[0]) * sin(c[1]); }), multi(n, 0, 1));
  return op;
}

DifferentialOperator casimir_sl2_compact(int n) {
  const double r = weight_r(n);
  DifferentialOperator op(Picture::compact, n);
  op.add(compact_coeff(n, [r](auto c) { return r * (1.0 + r) - sin(c[1]) * sin(c[1]) * (r * r); }), multi(n, 0, 0));
  op.add(compact_coeff(n, [r](auto c) { return cos(c[1]) * sin(c[1]) * (-2.0 * r); }), multi(n, 0, 1));
  op.add(compact_coeff(n, [](auto c) { return -(sin(c[1]) * sin(c[1])); }), multi(n, 2, 0));
  op.add(compact_coeff(n, [](auto c) { return sin(c[1]) * sin(c[1]); }), multi(n, 0, 2));
  return op;
}

DifferentialOperator casimir_so_n_compact(int n) {
  DifferentialOperator op(Picture::compact, n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> a(n + 2, 0);
    a[2 + i] = 2;
    op.add(cplx(-1.0), a, true);
  }
  return op;
}

DifferentialOperator casimir_so_n1_compact(int n) {
  DifferentialOperator op(Picture::compact, n);
  op.add(cplx(-1.0), multi(n, 0, 2));
  op.add(compact_coeff(n, [n](auto c) { return cos(c[1]) / sin(c[1]) * double(1 - n); }), multi(n, 0, 1));
  for (int i = 0; i < n; ++i) {
    std::vector<int> a(n + 2, 0);
    a[2 + i] = 2;
    op.add(compact_coeff(n, [](auto c) { return -1.0 / (sin(c[1]) * sin(c[1])); }), a, true);
  }
  return op;
}

DifferentialOperator casimir_so2_compact(int n) {
  DifferentialOperator op(Picture::compact, n);
  op.add(cplx(-1.0), multi(n, 2, 0));
  return op;
}

double omega_compact_residual(const Field& F, const std::vector<std::vector<double>>& pts, int n, int /*m*/) {
  const double r = weight_r(n);
  const DifferentialOperator sl2 = casimir_sl2_compact(n);
  const DifferentialOperator son = casimir_so_n_compact(n);
  const DifferentialOperator so2 = casimir_so2_compact(n);
  const DifferentialOperator son1 = casimir_so_n1_compact(n);
  double worst = 0.0;
  for (const auto& p : pts) {
    const cplx f = F(p);
    const cplx lhs = sl2.apply_at(F, p) - son.apply_at(F, p) - r * (r + 1) * f;
    const double s2 = std::sin(p[1]) * std::sin(p[1]);
    const cplx rhs = s2 * (so2.apply_at(F, p) - son1.apply_at(F, p) - r * r * f);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Group action

GroupElement GroupElement::identity(int n, int m) {
  GroupElement g;
  g.rot.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) g.rot[i * n + i] = 1.0;
  g.m = m;
  g.r = weight_r(n);
  return g;
}

int GroupElement::n() const {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rot.size()))));
  if (n * n != static_cast<int>(rot.size())) throw ParameterError("group element: rotation is not square");
  return n;
}

void GroupElement::validate() const {
  const double det = sl2[0] * sl2[3] - sl2[1] * sl2[2];
  if (std::abs(det - 1.0) > 1e-12) throw ParameterError("group element: det(sl2) != 1");
  const int dim = n();
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += rot[k * dim + i] * rot[k * dim + j];
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12) throw ParameterError("group element: rotation is not orthogonal");
    }
  }
}

GroupElement operator*(const GroupElement& g1, const GroupElement& g2) {
  GroupElement g;
  const auto& A = g1.sl2;
  const auto& B = g2.sl2;
  g.sl2 = {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3], A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]};
  const int n = g1.n();
  g.rot.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += g1.rot[i * n + k] * g2.rot[k * n + j];
      g.rot[i * n + j] = s;
    }
  }
  g.m = g1.m;
  g.r = g1.r;
  return g;
}

Field group_act(const GroupElement& g, const Field& f) {
  if (f.picture() != Picture::noncompact) throw ParameterError("group_act: noncompact field expected");
  g.validate();
  const int n = f.n();
  if (g.n() != n) throw ParameterError("group_act: dimension mismatch");
  return Field::from_generic(Picture::noncompact, n, [g, f, n](auto c) {
    using T = std::decay_t<decltype(c[0])>;
    const double a = g.sl2[0], b = g.sl2[1], cc = g.sl2[2], d = g.sl2[3];
    const T& t = c[0];
    T rho2 = t * 0.0;
    for (int i = 0; i < n; ++i) rho2 = rho2 + c[1 + i] * c[1 + i];
    const T act = a - t * cc;
    const T delta = act * act - rho2 * (cc * cc);
    const double dv = re_value(delta);
    if (std::abs(dv) < kChartTolerance) throw ChartError("group_act: delta vanishes");
    int phase_exp;  // (√sgn δ) = i^phase_exp
    if (dv > 0) {
      const double lhs = re_value(act);
      const double rhs = cc * std::sqrt(re_value(rho2));
      if (std::abs(lhs - rhs) < kChartTolerance) throw ChartError("group_act: on the boundary a - ct = c|x|");
      phase_exp = lhs > rhs ? 0 : 2;
    } else {
      phase_exp = 1;
    }
    std::vector<T> y;
    y.reserve(n + 1);
    y.push_back(((d * t - b) * act + rho2 * (cc * d)) / delta);
    for (int j = 0; j < n; ++j) {
      T s = t * 0.0;
      for (int i = 0; i < n; ++i) s = s + c[1 + i] * g.rot[i * n + j];
      y.push_back(s / delta);
    }
    return f(std::span<const T>(y)) * pow(abs_real(delta), g.r) * i_power(phase_exp * g.m);
  });
}

bool ktype_check(int n, int m, int p, int l) {
  if (n < 2 || p == 0 || l < 0) return false;
  const int P = std::abs(p);
  if ((P - (n - 1)) < 0 || (P - (n - 1)) % 2 != 0) return false;
  const int k = (P - (n - 1)) / 2;
  if (k < l) return false;
  // The cover element acting as φ ↦ φ + 2π, b ↦ −b has eigenvalue i^p (−1)^k on
  // e^{ipφ/2} ⊗ H_k(S^n); the induced representation requires it to equal i^{−m}.
  return (((p + 2 * k + m) % 4) + 4) % 4 == 0;
}

}  // namespace wavebasis
