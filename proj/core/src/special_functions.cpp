#include "wavebasis/special_functions.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wavebasis {

// ---------------------------------------------------------------------------
// Gegenbauer

GegenbauerPoly gegenbauer(const Rational& alpha, int d) {
  if (d < 0) throw ParameterError("gegenbauer: negative degree");
  if (!(alpha > Rational(-1, 2))) throw ParameterError("gegenbauer: alpha must exceed -1/2");
  std::vector<Rational> prev{Rational(1)};
  if (d == 0) return {alpha, 0, prev};
  std::vector<Rational> cur{Rational(0), Rational(2 * alpha)};
  for (int k = 2; k <= d; ++k) {
    std::vector<Rational> next(k + 1, Rational(0));
    const Rational a = Rational(2) * (k + alpha - 1) / k;
    const Rational b = (k + 2 * alpha - 2) / Rational(k);
    for (int i = 0; i < static_cast<int>(cur.size()); ++i) next[i + 1] += a * cur[i];
    for (int i = 0; i < static_cast<int>(prev.size()); ++i) next[i] -= b * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {alpha, d, cur};
}

GegenbauerPoly gegenbauer(double alpha, int d) {
  if (!std::isfinite(alpha)) throw ParameterError("gegenbauer: alpha must be finite");
  return gegenbauer(Rational(alpha), d);
}

double GegenbauerPoly::evaluate(double s) const { return gegenbauer_eval(alpha.get_d(), degree, s); }

RationalPolynomial GegenbauerPoly::as_polynomial() const {
  std::vector<RationalPolynomial::Term> terms;
  for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) terms.emplace_back(Monomial::unit(0, k), coeffs[k]);
  return RationalPolynomial::from_terms(1, std::move(terms));
}

double gegenbauer_norm_sq(double alpha, int d) {
  if (d < 0 || !(alpha > -0.5)) throw ParameterError("gegenbauer_norm_sq: invalid arguments");
  // h_0 = √π Γ(α+½)/Γ(α+1); h_d/h_0 = (2α)_d/d! · α/(d+α).
  double h = std::sqrt(std::numbers::pi) * std::exp(std::lgamma(alpha + 0.5) - std::lgamma(alpha + 1.0));
  if (d == 0) return h;
  for (int k = 0; k < d; ++k) h *= (2.0 * alpha + k) / (k + 1.0);
  return h * alpha / (d + alpha);
}

// ---------------------------------------------------------------------------
// Counting and areas

std::int64_t dim_harmonic(int n_ambient, int k) {
  if (n_ambient < 1 || k < 0) throw ParameterError("dim_harmonic: invalid arguments");
  auto binom = [](std::int64_t a, std::int64_t b) -> std::int64_t {
    if (b < 0 || a < b) return 0;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  return binom(k + n_ambient - 1, n_ambient - 1) - binom(k + n_ambient - 3, n_ambient - 1);
}

double sphere_area(int n_ambient) {
  if (n_ambient < 1) throw ParameterError("sphere_area: invalid dimension");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n_ambient) / std::tgamma(0.5 * n_ambient);
}

// ---------------------------------------------------------------------------
// Quadrature

QuadratureRule gauss_gegenbauer(int N, double a) {
  if (N < 1) throw ParameterError("gauss: need at least one node");
  if (!(a > -1.0)) throw ParameterError("gauss: weight exponent must exceed -1");
  // Orthonormal recurrence s p_k = β_{k+1} p_{k+1} + β_k p_{k−1} for weight (1−s²)^a.
  std::vector<double> beta(N + 1, 0.0);
  // k = 1 simplified so that a = −1/2 is not 0/0.
  if (N >= 1) beta[1] = std::sqrt(1.0 / (2.0 * a + 3.0));
  for (int k = 2; k <= N; ++k) {
    const double den = (2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0);
    beta[k] = std::sqrt(k * (k + 2.0 * a) / den);
  }
  const double mu0 = std::sqrt(std::numbers::pi) * std::exp(std::lgamma(a + 1.0) - std::lgamma(a + 1.5));

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  for (int k = 1; k < N; ++k) J(k, k - 1) = J(k - 1, k) = beta[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);

  // p_0..p_N and p_N' at s.
  auto eval = [&](double s, double& pn, double& dpn, double& sumsq) {
    double p0 = 1.0 / std::sqrt(mu0), p1 = 0.0, d0 = 0.0, d1 = 0.0;
    sumsq = 0.0;
    for (int k = 0; k < N; ++k) {
      sumsq += p0 * p0;
      const double p2 = (s * p0 - beta[k] * p1) / beta[k + 1];
      const double d2 = (p0 + s * d0 - beta[k] * d1) / beta[k + 1];
      p1 = p0;
      p0 = p2;
      d1 = d0;
      d0 = d2;
    }
    pn = p0;
    dpn = d0;
  };

  QuadratureRule rule;
  rule.nodes.resize(N);
  rule.weights.resize(N);
  for (int i = 0; i < N; ++i) {
    double s = es.eigenvalues()[i];
    double pn, dpn, sumsq;
    for (int it = 0; it < 3; ++it) {
      eval(s, pn, dpn, sumsq);
      if (dpn == 0.0) break;
      s -= pn / dpn;
    }
    eval(s, pn, dpn, sumsq);
    rule.nodes[i] = s;
    rule.weights[i] = 1.0 / sumsq;
  }
  // Exact symmetry of the weight.
  for (int i = 0; i < N / 2; ++i) {
    const double x = 0.5 * (rule.nodes[N - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[N - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[N - 1 - i] = x;
    rule.weights[i] = rule.weights[N - 1 - i] = w;
  }
  if (N % 2) rule.nodes[N / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int N) { return gauss_gegenbauer(N, 0.0); }

SphereGrid sphere_grid(int n_ambient, int degree) {
  if (n_ambient < 2) throw UnsupportedError("sphere_grid: need n >= 2");
  if (degree < 0) throw ParameterError("sphere_grid: negative degree");
  SphereGrid g;
  g.n_ambient = 2;
  const int M = degree + 1;
  for (int i = 0; i < M; ++i) {
    const double a = 2.0 * std::numbers::pi * i / M;
    g.points.push_back({std::cos(a), std::sin(a)});
    g.weights.push_back(2.0 * std::numbers::pi / M);
  }
  for (int m = 3; m <= n_ambient; ++m) {
    // S^{m-1}: last coordinate s with weight (1−s²)^{(m−3)/2}.
    const QuadratureRule r = gauss_gegenbauer(degree / 2 + 1, 0.5 * (m - 3));
    SphereGrid next;
    next.n_ambient = m;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      const double s = r.nodes[k];
      const double c = std::sqrt(1.0 - s * s);
      for (std::size_t i = 0; i < g.points.size(); ++i) {
        std::vector<double> p(m);
        for (int v = 0; v < m - 1; ++v) p[v] = c * g.points[i][v];
        p[m - 1] = s;
        next.points.push_back(std::move(p));
        next.weights.push_back(r.weights[k] * g.weights[i]);
      }
    }
    g = std::move(next);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Spherical harmonics

namespace {

void build_descriptors(int k, int l, std::vector<HarmonicBasis::Descriptor>& out) {
  using D = HarmonicBasis::Descriptor;
  if (k == 2) {
    D d;
    d.l = l;
    d.base_degree = l;
    if (l == 0) {
      d.base_kind = 0;
      d.scale = 1.0 / std::sqrt(2.0 * std::numbers::pi);
      out.push_back(d);
    } else {
      d.base_kind = 1;
      d.scale = 1.0 / std::sqrt(std::numbers::pi);
      out.push_back(d);
      d.base_kind = 2;
      out.push_back(d);
    }
    return;
  }
  for (int lp = 0; lp <= l; ++lp) {
    std::vector<D> sub;
    build_descriptors(k - 1, lp, sub);
    const int deg = l - lp;
    const double alpha = lp + 0.5 * (k - 2);
    const double s = 1.0 / std::sqrt(gegenbauer_norm_sq(alpha, deg));
    for (auto& d : sub) {
      d.l = l;
      d.levels.push_back({deg, alpha});
      d.scale *= s;
      out.push_back(std::move(d));
    }
  }
}

}  // namespace

HarmonicBasis::HarmonicBasis(int n_ambient, int max_degree) : n_(n_ambient), L_(max_degree) {
  if (n_ambient < 2) throw UnsupportedError("harmonic_basis: need n >= 2");
  if (max_degree < 0) throw ParameterError("harmonic_basis: negative degree");
  by_degree_.resize(L_ + 1);
  offsets_.push_back(0);
  for (int l = 0; l <= L_; ++l) {
    build_descriptors(n_, l, by_degree_[l]);
    offsets_.push_back(offsets_.back() + static_cast<int>(by_degree_[l].size()));
  }
}

HarmonicBasis harmonic_basis(int n_ambient, int L) { return HarmonicBasis(n_ambient, L); }

RationalPolynomial HarmonicBasis::exact(int l, int j) const {
  const Descriptor& D = descriptor(l, j);
  using P = RationalPolynomial;
  P value = P::constant(n_, Rational(1));
  if (D.base_kind != 0) {
    // (x₁ + i x₂)^l = Σ binom(l,k) x₁^{l−k} (i x₂)^k
    std::vector<P::Term> terms;
    Rational binom(1);
    for (int k = 0; k <= D.base_degree; ++k) {
      const bool real_part = k % 2 == 0;
      if (real_part == (D.base_kind == 1)) {
        // i^k = ±1 (k even) or ±i (k odd)
        const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
        std::vector<int> e(n_, 0);
        e[0] = D.base_degree - k;
        e[1] = k;
        terms.emplace_back(Monomial::from_exponents(e), binom * sign);
      }
      binom = binom * (D.base_degree - k) / (k + 1);
    }
    value = P::from_terms(n_, std::move(terms));
  }
  P w = P::variable(n_, 0) * P::variable(n_, 0) + P::variable(n_, 1) * P::variable(n_, 1);
  for (std::size_t i = 0; i < D.levels.size(); ++i) {
    const int var = static_cast<int>(i) + 2;
    const P u = P::variable(n_, var);
    w += u * u;
    const int d = D.levels[i].d;
    if (d == 0) continue;
    const Rational alpha(std::lround(2 * D.levels[i].alpha), 2);
    P prev = P::constant(n_, Rational(1));
    P cur = u * Rational(2 * alpha);
    for (int k = 2; k <= d; ++k) {
      P next = u * cur * Rational(Rational(2) * (k + alpha - 1) / k) - w * prev * Rational((k + 2 * alpha - 2) / k);
      prev = std::move(cur);
      cur = std::move(next);
    }
    value = value * cur;
  }
  return value;
}

std::vector<double> HarmonicBasis::evaluate_all(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw ParameterError("harmonic: point dimension mismatch");
  // Per-level Gegenbauer tables: G[i][lp][d] = |x_{0..i+2}|^d C^{lp+(k−2)/2}_d(x_{i+2}/·).
  const int nl = n_ - 2;
  std::vector<std::vector<std::vector<double>>> G(nl);
  double w = x[0] * x[0] + x[1] * x[1];
  for (int i = 0; i < nl; ++i) {
    const double u = x[i + 2];
    w += u * u;
    const int k = i + 3;
    G[i].resize(L_ + 1);
    for (int lp = 0; lp <= L_; ++lp) {
      const double alpha = lp + 0.5 * (k - 2);
      auto& row = G[i][lp];
      row.resize(L_ - lp + 1);
      row[0] = 1.0;
      if (L_ - lp >= 1) row[1] = 2.0 * alpha * u;
      for (int d = 2; d <= L_ - lp; ++d) {
        row[d] = (2.0 * u * (d + alpha - 1) * row[d - 1] - w * (d + 2.0 * alpha - 2) * row[d - 2]) / d;
      }
    }
  }
  // Re/Im (x₁ + i x₂)^l
  std::vector<double> re(L_ + 1), im(L_ + 1);
  re[0] = 1.0;
  im[0] = 0.0;
  for (int l = 1; l <= L_; ++l) {
    re[l] = re[l - 1] * x[0] - im[l - 1] * x[1];
    im[l] = re[l - 1] * x[1] + im[l - 1] * x[0];
  }
  std::vector<double> out(total());
  for (int l = 0; l <= L_; ++l) {
    for (int j = 0; j < count(l); ++j) {
      const Descriptor& D = by_degree_[l][j];
      double v = D.base_kind == 0 ? 1.0 : (D.base_kind == 1 ? re[D.base_degree] : im[D.base_degree]);
      int lp = D.base_degree;
      for (int i = 0; i < nl; ++i) {
        v *= G[i][lp][D.levels[i].d];
        lp += D.levels[i].d;
      }
      out[offsets_[l] + j] = v * D.scale;
    }
  }
  return out;
}

std::string HarmonicBasis::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"n\":" << n_ << ",\"max_degree\":" << L_ << ",\"harmonics\":[";
  bool first = true;
  for (int l = 0; l <= L_; ++l) {
    for (int j = 0; j < count(l); ++j) {
      if (!first) os << ",";
      first = false;
      os << "{\"degree\":" << l << ",\"index\":" << j << ",\"scale\":" << scale(l, j) << ",\"terms\":[";
      const RationalPolynomial P = exact(l, j);
      bool ft = true;
      for (const auto& [m, c] : P.terms()) {
        if (!ft) os << ",";
        ft = false;
        os << "{\"exponents\":[";
        for (int v = 0; v < n_; ++v) os << (v ? "," : "") << m.exponent(v);
        os << "],\"num\":\"" << c.get_num().get_str() << "\",\"den\":\"" << c.get_den().get_str() << "\"}";
      }
      os << "]}";
    }
  }
  os << "]}";
  return os.str();
}

}  // namespace wavebasis
