#include "wavebasis/modes.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "wavebasis/errors.hpp"

namespace wavebasis {

int mode_degree(int n, int p, int l) {
  if (n < 2) throw UnsupportedError("modes: need n >= 2");
  if (l < 0) throw ParameterError("modes: negative angular degree");
  const int twice_d = std::abs(p) - 2 * l - (n - 1);
  if (p == 0 || twice_d < 0 || twice_d % 2 != 0) throw ParameterError("modes: invalid (p, l) pair");
  return twice_d / 2;
}

bool is_valid_index(int n, const ModeIndex& idx) {
  if (n < 2 || idx.l < 0 || idx.j < 0 || idx.p == 0) return false;
  const int twice_d = std::abs(idx.p) - 2 * idx.l - (n - 1);
  if (twice_d < 0 || twice_d % 2 != 0) return false;
  return idx.j < dim_harmonic(n, idx.l);
}

void validate_index(int n, const ModeIndex& idx) {
  if (n < 2) throw UnsupportedError("modes: need n >= 2");
  if (!is_valid_index(n, idx)) {
    throw ParameterError("modes: invalid index (p=" + std::to_string(idx.p) + ", l=" + std::to_string(idx.l) +
                         ", j=" + std::to_string(idx.j) + ")");
  }
}

std::vector<ModeIndex> enumerate_modes(int n, int p_max) {
  if (n < 2) throw UnsupportedError("modes: need n >= 2");
  std::vector<ModeIndex> out;
  for (int p = n - 1; p <= p_max; p += 2) {
    for (int l = 0; 2 * l + n - 1 <= p; ++l) {
      const auto count = dim_harmonic(n, l);
      for (int j = 0; j < count; ++j) out.push_back({p, l, j});
    }
  }
  return out;
}

std::shared_ptr<const HarmonicBasis> shared_harmonics(int n, int L) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const HarmonicBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot || slot->max_degree() < L) slot = std::make_shared<const HarmonicBasis>(n, std::max(L, 8));
  return slot;
}

namespace {

Rational alpha_rational(int n, int l) { return Rational(2 * l + n - 1, 2); }

// λ^d C^α_d(u/λ) with u = 1 − q, w = λ², via the homogeneous recurrence.
RationalPolynomial g_homogeneous(int n, const Rational& alpha, int d) {
  using P = RationalPolynomial;
  const int nv = n + 1;
  P rho2(nv);
  for (int i = 1; i <= n; ++i) rho2 += P::variable(nv, i) * P::variable(nv, i);
  const P t = P::variable(nv, 0);
  const P u = P::constant(nv, Rational(1)) + t * t - rho2;
  const P w = u * u + rho2 * Rational(4);
  P prev = P::constant(nv, Rational(1));
  if (d == 0) return prev;
  P cur = u * Rational(2 * alpha);
  for (int k = 2; k <= d; ++k) {
    P next = u * cur * Rational(Rational(2) * (k + alpha - 1) / k) - w * prev * Rational((k + 2 * alpha - 2) / k);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

RationalPolynomial g_poly(int p, int l, int n) {
  const int d = mode_degree(n, p, l);
  return g_homogeneous(n, alpha_rational(n, l), d);
}

// ---------------------------------------------------------------------------

ModeFunction::ModeFunction(int n, ModeIndex index) : n_(n), idx_(index) {
  validate_index(n, index);
  d_ = mode_degree(n, index.p, index.l);
  const double r = weight_r(n);
  alpha_ = index.l - r;
  const double hd = gegenbauer_norm_sq(alpha_, d_);
  const double P = std::abs(index.p);
  norm_ = std::pow(2.0, index.l - r) / std::sqrt(P * hd);
  compact_norm_ = std::pow(2.0, -r) / std::sqrt(P * hd);
  harm_ = shared_harmonics(n, index.l);
}

cplx ModeFunction::operator()(double t, std::span<const double> x) const {
  std::vector<cplx> c{t};
  c.insert(c.end(), x.begin(), x.end());
  return evaluate<cplx>(c);
}

double ModeFunction::sphere_part(double theta, std::span<const double> xhat) const {
  return gegenbauer_eval(alpha_, d_, std::cos(theta)) * std::pow(std::sin(theta), idx_.l) *
         harm_->evaluate(idx_.l, idx_.j, xhat) / std::sqrt(gegenbauer_norm_sq(alpha_, d_));
}

Field ModeFunction::field() const {
  auto self = std::make_shared<const ModeFunction>(*this);
  return Field::from_generic(Picture::noncompact, n_, [self](auto c) { return self->evaluate(c); });
}

Field ModeFunction::compact_field() const {
  auto self = std::make_shared<const ModeFunction>(*this);
  return Field::from_generic(Picture::compact, n_, [self](auto c) { return self->evaluate_compact(c); });
}

Field ModeFunction::g_field() const {
  auto self = std::make_shared<const ModeFunction>(*this);
  const double s = std::pow(2.0, weight_r(n_)) * std::sqrt(std::abs(idx_.p));
  return Field::from_generic(Picture::compact, n_, [self, s](auto c) { return self->evaluate_compact(c) * s; });
}

ModeFunction mode(const ModeIndex& index, int n) { return ModeFunction(n, index); }
Field mode_compact(const ModeIndex& index, int n) { return ModeFunction(n, index).compact_field(); }
Field mode_G(const ModeIndex& index, int n) { return ModeFunction(n, index).g_field(); }

// ---------------------------------------------------------------------------

GaussianPolynomial d_polynomial(int n) {
  using G = GaussianPolynomial;
  const int nv = n + 1;
  std::vector<G::Term> terms;
  terms.emplace_back(Monomial{}, GaussianRational(1));
  terms.emplace_back(Monomial::unit(0), GaussianRational(Rational(0), Rational(-2)));
  terms.emplace_back(Monomial::unit(0, 2), GaussianRational(-1));
  for (int i = 1; i <= n; ++i) terms.emplace_back(Monomial::unit(i, 2), GaussianRational(1));
  return G::from_terms(nv, std::move(terms));
}

RationalMode rational_mode(const ModeIndex& index, int n) {
  if (n % 2 == 0) throw UnsupportedError("rational_mode: exact representation needs odd n");
  validate_index(n, index);
  if (index.p < 0) throw ParameterError("rational_mode: positive-energy index expected");
  const ModeFunction mf(n, index);
  const RationalPolynomial h = shift_variables(mf.harmonics().exact(index.l, index.j), n + 1, 1);
  RationalMode rm;
  rm.n = n;
  rm.index = index;
  rm.numerator = to_gaussian(g_poly(index.p, index.l, n) * h);
  rm.half_power = index.p / 2;
  rm.norm_constant = mf.norm_constant() * mf.harmonics().scale(index.l, index.j);
  return rm;
}

cplx RationalMode::evaluate(double t, std::span<const double> x) const {
  std::vector<cplx> c{t};
  c.insert(c.end(), x.begin(), x.end());
  const cplx num = numerator.evaluate<cplx>(c, cplx(0.0));
  double rho2 = 0.0;
  for (double v : x) rho2 += v * v;
  const cplx D = (1.0 - cplx(0.0, t)) * (1.0 - cplx(0.0, t)) + rho2;
  return norm_constant * num / std::pow(D, half_power);
}

GaussianPolynomial RationalMode::kernel_residual() const {
  // □(P/D^k) D^{k+1} = D□P − 2k⟨∇P,∇D⟩ + kP·Q/D with Q = (k+1)⟨∇D,∇D⟩ − D□D.
  // ⟨∇D,∇D⟩ and □D are computed, and Q is divided by D exactly.
  const GaussianPolynomial D = d_polynomial(n);
  const int k = half_power;
  const GaussianPolynomial Q =
      minkowski_gradient_pairing(D, D) * GaussianRational(k + 1) - D * wave_operator(D);
  auto [qd, rem] = divide(Q, D);
  if (!rem.is_zero()) throw Error("kernel_residual: Q is not divisible by D");
  return D * wave_operator(numerator) - minkowski_gradient_pairing(numerator, D) * GaussianRational(2 * k) +
         numerator * qd * GaussianRational(k);
}

std::string RationalMode::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"n\":" << n << ",\"p\":" << index.p << ",\"l\":" << index.l << ",\"j\":" << index.j
     << ",\"half_power\":" << half_power << ",\"norm_constant\":" << norm_constant << ",\"numerator\":[";
  bool first = true;
  for (const auto& [m, c] : numerator.terms()) {
    if (!first) os << ",";
    first = false;
    os << "{\"exponents\":[";
    for (int v = 0; v <= n; ++v) os << (v ? "," : "") << m.exponent(v);
    os << "],\"re\":\"" << c.re.get_str() << "\",\"im\":\"" << c.im.get_str() << "\"}";
  }
  os << "]}";
  return os.str();
}

// ---------------------------------------------------------------------------

Sector sector(int n, int m) {
  if (n < 2) throw UnsupportedError("sector: need n >= 2");
  const int mm = ((m % 4) + 4) % 4;
  const int plus = ((-(n - 1)) % 4 + 4) % 4;
  const int minus = (n - 1) % 4;
  if (n % 2 == 1) return mm == minus ? Sector::BOTH : Sector::ZERO;
  if (mm == plus) return Sector::PLUS;
  if (mm == minus) return Sector::MINUS;
  return Sector::ZERO;
}

std::string to_string(Sector s) {
  switch (s) {
    case Sector::PLUS: return "PLUS";
    case Sector::MINUS: return "MINUS";
    case Sector::BOTH: return "BOTH";
    default: return "ZERO";
  }
}

}  // namespace wavebasis
