#include "wavebasis/jet.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "wavebasis/errors.hpp"

namespace wavebasis {

namespace {

void enumerate_degree(int nvars, int degree, int var, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (var == nvars - 1) {
    cur[var] = degree;
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[var] = e;
    enumerate_degree(nvars, degree - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || order < 0) throw ParameterError("jet: invalid layout");
  std::vector<int> cur(nvars, 0);
  prefix_.assign(order + 1, 0);
  for (int k = 0; k <= order; ++k) {
    enumerate_degree(nvars, k, 0, cur, monomials_);
    prefix_[k] = static_cast<int>(monomials_.size());
  }
  for (const auto& m : monomials_) {
    int d = 0;
    for (int e : m) d += e;
    degree_.push_back(d);
  }
  raise_.assign(nvars, std::vector<int>(monomials_.size(), -1));
  for (int v = 0; v < nvars; ++v) {
    for (int i = 0; i < size(); ++i) {
      if (degree_[i] == order) continue;
      auto e = monomials_[i];
      ++e[v];
      raise_[v][i] = index_of(e);
    }
  }
  for (int a = 0; a < size(); ++a) {
    for (int b = 0; b < size(); ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      std::vector<int> e(nvars);
      for (int v = 0; v < nvars; ++v) e[v] = monomials_[a][v] + monomials_[b][v];
      products_.push_back({a, b, index_of(e)});
    }
  }
}

int JetLayout::index_of(std::span<const int> exps) const {
  int d = 0;
  for (int e : exps) d += e;
  if (d > order_) return -1;
  const int lo = d == 0 ? 0 : prefix_[d - 1];
  for (int i = lo; i < prefix_[d]; ++i) {
    if (std::equal(exps.begin(), exps.end(), monomials_[i].begin())) return i;
  }
  return -1;
}

const JetLayout& JetLayout::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot.reset(new JetLayout(nvars, order));
  return *slot;
}

// ---------------------------------------------------------------------------

Jet::Jet(const JetLayout& layout, cplx value) : layout_(&layout), c_(layout.size(), cplx(0.0)) {
  c_[0] = value;
}

Jet Jet::variable(int nvars, int order, int var, double value) {
  Jet j(JetLayout::get(nvars, order), value);
  if (order >= 1) {
    std::vector<int> e(nvars, 0);
    e[var] = 1;
    j.c_[j.layout_->index_of(e)] = 1.0;
  }
  return j;
}

Jet Jet::constant(int nvars, int order, cplx value) { return Jet(JetLayout::get(nvars, order), value); }

std::vector<Jet> Jet::seed(std::span<const double> point, int order) {
  std::vector<Jet> out;
  const int nv = static_cast<int>(point.size());
  out.reserve(nv);
  for (int v = 0; v < nv; ++v) out.push_back(variable(nv, order, v, point[v]));
  return out;
}

cplx Jet::coefficient(std::span<const int> exps) const {
  const int i = layout_->index_of(exps);
  if (i < 0) throw ParameterError("jet: coefficient beyond truncation order");
  return c_[i];
}

cplx Jet::derivative(std::span<const int> exps) const {
  double fact = 1.0;
  for (int e : exps) {
    for (int k = 2; k <= e; ++k) fact *= k;
  }
  return coefficient(exps) * fact;
}

Jet Jet::truncated(int order) const {
  if (order >= this->order()) return *this;
  Jet out(JetLayout::get(nvars(), order), 0.0);
  std::copy_n(c_.begin(), out.c_.size(), out.c_.begin());
  return out;
}

Jet Jet::partial(int var) const {
  if (order() == 0) throw ParameterError("jet: cannot differentiate an order-0 jet");
  Jet out(JetLayout::get(nvars(), order() - 1), 0.0);
  for (int i = 0; i < out.layout_->size(); ++i) {
    const int up = layout_->raised(var, i);
    out.c_[i] = c_[up] * double(layout_->exponents(up)[var]);
  }
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order() < order()) *this = truncated(o.order());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order() < order()) *this = truncated(o.order());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetLayout& L = a.order() <= b.order() ? *a.layout_ : *b.layout_;
  Jet out(L, 0.0);
  for (const auto& p : L.products()) out.c_[p.out] += a.c_[p.a] * b.c_[p.b];
  return out;
}

Jet Jet::compose(std::span<const cplx> taylor) const {
  Jet h = *this;
  h.c_[0] = 0.0;
  const int K = std::min<int>(order(), static_cast<int>(taylor.size()) - 1);
  Jet acc(*layout_, taylor[K]);
  for (int k = K - 1; k >= 0; --k) {
    acc = acc * h;
    acc.c_[0] += taylor[k];
  }
  return acc;
}

namespace {

std::vector<cplx> pow_series(cplx a, cplx e, int order) {
  // (a + h)^e = a^e Σ binom(e, k) (h/a)^k
  std::vector<cplx> t(order + 1);
  cplx binom = 1.0;
  const cplx ae = std::pow(a, e);
  cplx ainv_k = 1.0;
  for (int k = 0; k <= order; ++k) {
    t[k] = ae * binom * ainv_k;
    binom *= (e - double(k)) / double(k + 1);
    ainv_k /= a;
  }
  return t;
}

}  // namespace

Jet operator/(cplx b, const Jet& a) {
  std::vector<cplx> t(a.order() + 1);
  cplx inv = 1.0 / a.value();
  cplx pw = inv;
  for (int k = 0; k <= a.order(); ++k) {
    t[k] = (k % 2 ? -pw : pw);
    pw *= inv;
  }
  return a.compose(t) * b;
}

Jet operator/(const Jet& a, const Jet& b) { return a * (1.0 / b); }

Jet exp(const Jet& x) {
  std::vector<cplx> t(x.order() + 1);
  cplx e = std::exp(x.value());
  double fact = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    if (k) fact *= k;
    t[k] = e / fact;
  }
  return x.compose(t);
}

Jet log(const Jet& x) {
  std::vector<cplx> t(x.order() + 1);
  const cplx a = x.value();
  t[0] = std::log(a);
  cplx pw = 1.0;
  for (int k = 1; k <= x.order(); ++k) {
    pw /= a;
    t[k] = (k % 2 ? 1.0 : -1.0) * pw / double(k);
  }
  return x.compose(t);
}

Jet sqrt(const Jet& x) { return x.compose(pow_series(x.value(), 0.5, x.order())); }

Jet pow(const Jet& x, double e) { return x.compose(pow_series(x.value(), e, x.order())); }

Jet pow_int(const Jet& x, int e) {
  if (e < 0) return 1.0 / pow_int(x, -e);
  Jet r = Jet::constant(x.nvars(), x.order(), 1.0);
  Jet b = x;
  unsigned u = static_cast<unsigned>(e);
  while (u) {
    if (u & 1u) r = r * b;
    u >>= 1u;
    if (u) b = b * b;
  }
  return r;
}

Jet sin(const Jet& x) {
  std::vector<cplx> t(x.order() + 1);
  const cplx s = std::sin(x.value()), c = std::cos(x.value());
  const cplx cyc[4] = {s, c, -s, -c};
  double fact = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    if (k) fact *= k;
    t[k] = cyc[k % 4] / fact;
  }
  return x.compose(t);
}

Jet cos(const Jet& x) {
  std::vector<cplx> t(x.order() + 1);
  const cplx s = std::sin(x.value()), c = std::cos(x.value());
  const cplx cyc[4] = {c, -s, -c, s};
  double fact = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    if (k) fact *= k;
    t[k] = cyc[k % 4] / fact;
  }
  return x.compose(t);
}

Jet atan2(const Jet& y, const Jet& x) {
  // arg(x + iy) for real jets: Im log(x + iy), with the principal constant term.
  std::vector<cplx> c = log(x + y * cplx(0.0, 1.0)).coefficients();
  for (auto& v : c) v = v.imag();
  c[0] = std::atan2(y.value().real(), x.value().real());
  return Jet::from_coefficients(JetLayout::get(x.nvars(), std::min(x.order(), y.order())), std::move(c));
}

Jet Jet::from_coefficients(const JetLayout& layout, std::vector<cplx> coeffs) {
  if (static_cast<int>(coeffs.size()) != layout.size()) throw ParameterError("jet: coefficient count mismatch");
  Jet j;
  j.layout_ = &layout;
  j.c_ = std::move(coeffs);
  return j;
}

Jet acos_real(const Jet& x) { return atan2(sqrt(1.0 - x * x), x); }

}  // namespace wavebasis
