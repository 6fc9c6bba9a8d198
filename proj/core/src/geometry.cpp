#include "wavebasis/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavebasis/errors.hpp"

namespace wavebasis {

namespace {

double norm_sq(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double clamp_unit(double v) {
  if (v > 1.0 + kChartTolerance || v < -1.0 - kChartTolerance) throw ChartError("to_compact: arccos argument out of range");
  return std::clamp(v, -1.0, 1.0);
}

cplx i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

double q(const SpacetimePoint& pt) { return -pt.t * pt.t + norm_sq(pt.x); }

double lambda(const SpacetimePoint& pt) {
  const double qq = q(pt);
  return std::hypot(1.0 - qq, 2.0 * std::sqrt(norm_sq(pt.x)));
}

std::vector<double> iota(const SpacetimePoint& pt) {
  const double qq = q(pt);
  std::vector<double> out{2.0 * pt.t, 1.0 + qq, -1.0 + qq};
  for (double v : pt.x) out.push_back(2.0 * v);
  return out;
}

PhaseClass phase_j(double phi, double b0) {
  constexpr double pi = std::numbers::pi;
  const double c = std::cos(phi) - b0;
  if (std::abs(c) < kChartTolerance) throw ChartError("phase_j: cos(phi) = b0");
  double u = std::fmod(0.5 * phi, 2.0 * pi);
  if (u < 0) u += 2.0 * pi;
  auto near = [&](double a) { return std::abs(u - a) < kChartTolerance; };
  if (c > 0) {
    if (near(0.5 * pi) || near(1.5 * pi)) throw ChartError("phase_j: phi/2 on a cell boundary");
    return {(u < 0.5 * pi || u > 1.5 * pi) ? 0 : 2};
  }
  if (near(0.0) || near(pi) || near(2.0 * pi)) throw ChartError("phase_j: phi/2 on a cell boundary");
  return {u < pi ? 1 : 3};
}

CompactPoint to_compact(const SpacetimePoint& pt) {
  const double r2 = norm_sq(pt.x);
  if (r2 == 0.0) throw ChartError("to_compact: x = 0 has no direction");
  const double qq = q(pt);
  const double lam = lambda(pt);
  CompactPoint cp;
  const double sgn = pt.t < 0 ? -1.0 : 1.0;
  cp.phi = sgn * std::acos(clamp_unit((1.0 + qq) / lam));
  cp.theta = std::acos(clamp_unit((1.0 - qq) / lam));
  const double r = std::sqrt(r2);
  cp.xhat.reserve(pt.x.size());
  for (double v : pt.x) cp.xhat.push_back(v / r);
  return cp;
}

SpacetimePoint from_compact(const CompactPoint& cp) {
  const double den = std::cos(cp.phi) + std::cos(cp.theta);
  if (std::abs(den) < kChartTolerance) throw ChartError("from_compact: point at infinity");
  SpacetimePoint pt;
  pt.t = std::sin(cp.phi) / den;
  const double s = std::sin(cp.theta) / den;
  pt.x.reserve(cp.xhat.size());
  for (double v : cp.xhat) pt.x.push_back(v * s);
  return pt;
}

Field pull_function_to_compact(const Field& f, int m, double r) {
  if (f.picture() != Picture::noncompact) throw ParameterError("pull: expected a noncompact field");
  const int n = f.n();
  return Field::from_generic(Picture::compact, n, [f, m, r, n](auto c) {
    using T = std::decay_t<decltype(c[0])>;
    const T& phi = c[0];
    const T& theta = c[1];
    const T den = cos(phi) + cos(theta);
    if (std::abs(re_value(den)) < kChartTolerance) throw ChartError("pull: point at infinity");
    const int j = phase_j(re_value(phi), -std::cos(re_value(theta))).j;
    const T s = sin(theta) / den;
    std::vector<T> y;
    y.reserve(n + 1);
    y.push_back(sin(phi) / den);
    for (int i = 0; i < n; ++i) y.push_back(c[2 + i] * s);
    const T scale = pow(abs_real(den * 0.5), r);
    return f(std::span<const T>(y)) * scale * i_power(-m * j);
  });
}

Field push_function_to_noncompact(const Field& F, double r) {
  if (F.picture() != Picture::compact) throw ParameterError("push: expected a compact field");
  const int n = F.n();
  return Field::from_generic(Picture::noncompact, n, [F, r, n](auto c) {
    using T = std::decay_t<decltype(c[0])>;
    const T& t = c[0];
    T r2 = t * 0.0;
    for (int i = 0; i < n; ++i) r2 = r2 + c[1 + i] * c[1 + i];
    const T qq = r2 - t * t;
    const T lam2 = (1.0 - qq) * (1.0 - qq) + 4.0 * r2;
    std::vector<T> y;
    y.reserve(n + 2);
    y.push_back(atan2(2.0 * t, 1.0 + qq));
    if (re_value(r2) == 0.0) {
      if constexpr (!std::is_same_v<T, cplx>) {
        throw ChartError("push: derivatives at x = 0 are not available");
      } else {
        y.push_back(atan2(t * 0.0, 1.0 - qq));
        for (int i = 0; i < n; ++i) y.push_back(T(i == n - 1 ? 1.0 : 0.0));
      }
    } else {
      const T rho = sqrt(r2);
      y.push_back(atan2(2.0 * rho, 1.0 - qq));
      for (int i = 0; i < n; ++i) y.push_back(c[1 + i] / rho);
    }
    return F(std::span<const T>(y)) * pow(lam2, 0.5 * r);
  });
}

}  // namespace wavebasis
