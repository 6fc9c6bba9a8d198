#include "wavebasis/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace wavebasis {

Monomial Monomial::from_exponents(std::span<const int> exps) {
  if (static_cast<int>(exps.size()) > kMaxVars) throw ParameterError("monomial: too many variables");
  std::uint64_t key = 0;
  for (std::size_t v = 0; v < exps.size(); ++v) {
    if (exps[v] < 0 || exps[v] > kMaxExponent) throw ParameterError("monomial: exponent out of range");
    key |= static_cast<std::uint64_t>(exps[v]) << (8 * v);
  }
  return Monomial(key);
}

Monomial Monomial::unit(int var, int power) {
  if (var < 0 || var >= kMaxVars) throw ParameterError("monomial: variable out of range");
  if (power < 0 || power > kMaxExponent) throw ParameterError("monomial: exponent out of range");
  return Monomial(static_cast<std::uint64_t>(power) << (8 * var));
}

int Monomial::total_degree() const {
  int d = 0;
  for (int v = 0; v < kMaxVars; ++v) d += exponent(v);
  return d;
}

std::vector<int> Monomial::exponents(int nvars) const {
  std::vector<int> e(nvars);
  for (int v = 0; v < nvars; ++v) e[v] = exponent(v);
  return e;
}

Monomial Monomial::operator*(const Monomial& o) const {
  for (int v = 0; v < kMaxVars; ++v) {
    if (exponent(v) + o.exponent(v) > kMaxExponent) throw ParameterError("monomial: exponent overflow");
  }
  return Monomial(key_ + o.key_);
}

// ---------------------------------------------------------------------------

template <class Coeff>
Polynomial<Coeff> Polynomial<Coeff>::from_terms(int nvars, std::vector<Term> terms) {
  Polynomial p(nvars);
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

template <class Coeff>
void Polynomial<Coeff>::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return wavebasis::is_zero(t.second); });
  terms_ = std::move(out);
}

template <class Coeff>
int Polynomial<Coeff>::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.first.total_degree());
  return d;
}

template <class Coeff>
int Polynomial<Coeff>::degree_in(int var) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.exponent(var));
  return d;
}

template <class Coeff>
Coeff Polynomial<Coeff>::coefficient(Monomial m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, Monomial key) { return t.first < key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return Coeff(0);
}

template <class Coeff>
Polynomial<Coeff>& Polynomial<Coeff>::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw ParameterError("polynomial: variable count mismatch");
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      out.push_back(*b++);
    } else {
      Coeff c = a->second + b->second;
      if (!wavebasis::is_zero(c)) out.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

template <class Coeff>
Polynomial<Coeff>& Polynomial<Coeff>::operator-=(const Polynomial& o) {
  return *this += -o;
}

template <class Coeff>
Polynomial<Coeff>& Polynomial<Coeff>::operator*=(const Coeff& c) {
  if (wavebasis::is_zero(c)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second = t.second * c;
  return *this;
}

template <class Coeff>
Polynomial<Coeff> Polynomial<Coeff>::multiply(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw ParameterError("polynomial: variable count mismatch");
  Polynomial out(a.nvars_);
  if (a.is_zero() || b.is_zero()) return out;
  std::unordered_map<std::uint64_t, Coeff> acc;
  acc.reserve(a.size() * b.size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      const Monomial m = ma * mb;
      auto [it, fresh] = acc.try_emplace(m.key());
      if (fresh) {
        it->second = ca * cb;
      } else {
        it->second += ca * cb;
      }
    }
  }
  out.terms_.reserve(acc.size());
  for (auto& [key, c] : acc) {
    if (wavebasis::is_zero(c)) continue;
    out.terms_.emplace_back(Monomial::from_key(key), std::move(c));
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const Term& x, const Term& y) { return x.first < y.first; });
  return out;
}

template <class Coeff>
Polynomial<Coeff> Polynomial<Coeff>::pow(int e) const {
  if (e < 0) throw ParameterError("polynomial: negative power");
  Polynomial result = constant(nvars_, Coeff(1));
  Polynomial base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

template <class Coeff>
Polynomial<Coeff> Polynomial<Coeff>::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw ParameterError("polynomial: derivative variable out of range");
  Polynomial out(nvars_);
  out.terms_.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    const int e = m.exponent(var);
    if (e == 0) continue;
    out.terms_.emplace_back(m.lowered(var), c * Coeff(e));
  }
  // Lowering one exponent is order preserving for a fixed variable.
  return out;
}

template <class Coeff>
std::string Polynomial<Coeff>::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if constexpr (std::is_same_v<Coeff, Rational>) {
      os << c.get_str();
    } else {
      os << "(" << c.re.get_str() << (sgn(c.im) < 0 ? "" : "+") << c.im.get_str() << "i)";
    }
    for (int v = 0; v < nvars_; ++v) {
      const int e = m.exponent(v);
      if (e == 1) os << "*x" << v;
      if (e > 1) os << "*x" << v << "^" << e;
    }
  }
  return os.str();
}

template class Polynomial<Rational>;
template class Polynomial<GaussianRational>;

GaussianPolynomial to_gaussian(const RationalPolynomial& p) {
  std::vector<GaussianPolynomial::Term> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p.terms()) terms.emplace_back(m, GaussianRational(c));
  return GaussianPolynomial::from_terms(p.nvars(), std::move(terms));
}

RationalPolynomial shift_variables(const RationalPolynomial& p, int new_nvars, int offset) {
  if (offset < 0 || p.nvars() + offset > new_nvars) throw ParameterError("shift_variables: bad offset");
  std::vector<RationalPolynomial::Term> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e(new_nvars, 0);
    for (int v = 0; v < p.nvars(); ++v) e[v + offset] = m.exponent(v);
    terms.emplace_back(Monomial::from_exponents(e), c);
  }
  return RationalPolynomial::from_terms(new_nvars, std::move(terms));
}

template <class Coeff>
Polynomial<Coeff> laplacian(const Polynomial<Coeff>& p, int first) {
  Polynomial<Coeff> out(p.nvars());
  for (int v = first; v < p.nvars(); ++v) out += p.derivative(v).derivative(v);
  return out;
}

template <class Coeff>
Polynomial<Coeff> wave_operator(const Polynomial<Coeff>& p) {
  return laplacian(p, 1) - p.derivative(0).derivative(0);
}

template <class Coeff>
Polynomial<Coeff> minkowski_gradient_pairing(const Polynomial<Coeff>& a, const Polynomial<Coeff>& b) {
  Polynomial<Coeff> out = -(a.derivative(0) * b.derivative(0));
  for (int v = 1; v < a.nvars(); ++v) out += a.derivative(v) * b.derivative(v);
  return out;
}

template RationalPolynomial laplacian(const RationalPolynomial&, int);
template GaussianPolynomial laplacian(const GaussianPolynomial&, int);
template RationalPolynomial wave_operator(const RationalPolynomial&);
template GaussianPolynomial wave_operator(const GaussianPolynomial&);
template RationalPolynomial minkowski_gradient_pairing(const RationalPolynomial&, const RationalPolynomial&);
template GaussianPolynomial minkowski_gradient_pairing(const GaussianPolynomial&, const GaussianPolynomial&);

namespace {

GaussianRational inverse(const GaussianRational& z) {
  const Rational norm = z.re * z.re + z.im * z.im;
  if (sgn(norm) == 0) throw ParameterError("divide: zero leading coefficient");
  return {z.re / norm, -z.im / norm};
}

bool divides(Monomial a, Monomial b) {
  for (int v = 0; v < Monomial::kMaxVars; ++v) {
    if (a.exponent(v) > b.exponent(v)) return false;
  }
  return true;
}

Monomial quotient(Monomial b, Monomial a) {
  std::vector<int> e(Monomial::kMaxVars);
  for (int v = 0; v < Monomial::kMaxVars; ++v) e[v] = b.exponent(v) - a.exponent(v);
  return Monomial::from_exponents(e);
}

}  // namespace

std::pair<GaussianPolynomial, GaussianPolynomial> divide(const GaussianPolynomial& a,
                                                         const GaussianPolynomial& b) {
  if (b.is_zero()) throw ParameterError("divide: division by zero polynomial");
  // Key order is lexicographic with the highest variable most significant,
  // which is a monomial order, so the largest key is the leading term.
  const auto& [lead_m, lead_c] = b.terms().back();
  const GaussianRational lead_inv = inverse(lead_c);
  GaussianPolynomial q(a.nvars());
  GaussianPolynomial rem(a.nvars());
  GaussianPolynomial work = a;
  while (!work.is_zero()) {
    const auto [m, c] = work.terms().back();
    if (divides(lead_m, m)) {
      auto step = GaussianPolynomial::monomial(a.nvars(), quotient(m, lead_m), c * lead_inv);
      q += step;
      work -= step * b;
    } else {
      auto lt = GaussianPolynomial::monomial(a.nvars(), m, c);
      rem += lt;
      work -= lt;
    }
  }
  return {q, rem};
}

}  // namespace wavebasis
