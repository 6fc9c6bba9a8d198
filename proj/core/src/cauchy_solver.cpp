#include "wavebasis/cauchy_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "wavebasis/errors.hpp"
#include "wavebasis/parallel.hpp"
#include "wavebasis/special_functions.hpp"

namespace wavebasis {

namespace {

using json = nlohmann::json;

constexpr cplx kI{0.0, 1.0};

int default_m(int n) { return ((1 - n) % 4 + 4) % 4; }

int k_of(int n, int p) { return (std::abs(p) - n + 1) / 2; }

std::string coord_key(std::span<const double> x) {
  std::ostringstream os;
  for (double v : x) os << std::llround(v * 1e9) << ",";
  return os.str();
}

struct ProjectionGrid {
  int n = 0;
  int l_max = 0;
  std::vector<double> theta, theta_w;
  SphereGrid sphere;
  int harmonics = 0;                // number of (l, j) pairs with l ≤ l_max
  std::vector<double> h_at_sphere;  // [s * harmonics + idx]
};

ProjectionGrid projection_grid(int n, int p_max, const ExpandOptions& o) {
  ProjectionGrid g;
  g.n = n;
  const int k_max = std::max(0, k_of(n, p_max));
  g.l_max = k_max;
  const int nodes = o.theta_nodes > 0 ? o.theta_nodes : std::max(2 * k_max + n + 8, 48);
  const int sdeg = o.sphere_degree > 0 ? o.sphere_degree : 2 * g.l_max + 2;
  const QuadratureRule rule = gauss_gegenbauer(nodes, 0.5 * (n - 2));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    g.theta.push_back(std::acos(rule.nodes[i]));
    g.theta_w.push_back(rule.weights[i]);
  }
  g.sphere = sphere_grid(n, sdeg);
  const auto H = shared_harmonics(n, g.l_max);
  g.harmonics = H->offset(g.l_max + 1);
  g.h_at_sphere.resize(g.sphere.points.size() * g.harmonics);
  for (std::size_t s = 0; s < g.sphere.points.size(); ++s) {
    const std::vector<double> all = H->evaluate_all(g.sphere.points[s]);
    std::copy_n(all.begin(), g.harmonics, g.h_at_sphere.begin() + s * g.harmonics);
  }
  return g;
}

// Sphere projections Σ_s w_s h_{l,j}(x̂_s) Φ(ρ x̂_s) for each θ node.
void project_data(const CauchyData& data, const ProjectionGrid& g, std::vector<double>& phi_hat,
                  std::vector<double>& psi_hat) {
  const std::size_t A = g.theta.size();
  const std::size_t S = g.sphere.points.size();
  phi_hat.assign(A * g.harmonics, 0.0);
  psi_hat.assign(A * g.harmonics, 0.0);
  parallel_for(A, [&](std::size_t a) {
    const double rho = std::tan(0.5 * g.theta[a]);
    std::vector<double> x(g.n);
    for (std::size_t s = 0; s < S; ++s) {
      for (int i = 0; i < g.n; ++i) x[i] = rho * g.sphere.points[s][i];
      const double w = g.sphere.weights[s];
      const double u0 = w * data.Phi(x);
      const double u1 = w * data.Psi(x);
      const double* h = &g.h_at_sphere[s * g.harmonics];
      for (int k = 0; k < g.harmonics; ++k) {
        phi_hat[a * g.harmonics + k] += u0 * h[k];
        psi_hat[a * g.harmonics + k] += u1 * h[k];
      }
    }
  });
}

// Throws DecayError for a non-integrable tail; returns a warning when the
// integrable tail beyond |x| = 1e3 still exceeds `tolerance`.
std::string probe_decay(const CauchyData& data, int n, double tolerance) {
  if (data.decay_class == "samples") return {};
  const SphereGrid dirs = sphere_grid(n, 4);
  auto g = [&](double rho) {
    double worst = 0.0;
    std::vector<double> x(n);
    for (const auto& d : dirs.points) {
      for (int i = 0; i < n; ++i) x[i] = rho * d[i];
      worst = std::max(worst, std::abs(data.Phi(x)) / rho + std::abs(data.Psi(x)));
    }
    return worst;
  };
  const double R = 1e3;
  const double g1 = g(R);
  const double g2 = g(2 * R);
  if (!std::isfinite(g1) || !std::isfinite(g2)) throw DecayError("expand: data not finite at |x| = 1e3");
  if (g1 < 1e-300) return {};
  const double s = std::log2(g1 / std::max(g2, 1e-300));
  if (s <= 1.0 + 1e-3) throw DecayError("expand: data tail is not integrable against the modes");
  const double tail = R * g1 / (s - 1.0);
  if (tail > tolerance) return "slow decay: tail beyond |x| = 1e3 estimated at " + std::to_string(tail);
  return {};
}

void finalize(Expansion& e) {
  e.norm_sq = 0.0;
  for (const auto& en : e.entries) e.norm_sq += std::norm(en.c);
  const auto sh = e.shells();
  e.tail_estimate = 0.0;
  if (!sh.empty()) {
    const double last = sh.back().second;
    e.tail_estimate = last;
    if (sh.size() >= 2 && sh[sh.size() - 2].second > 0.0) {
      const double q = last / sh[sh.size() - 2].second;
      if (q < 1.0) e.tail_estimate = last * q / (1.0 - q);
    }
  }
  const double r = weight_r(e.n);
  e.uniform_bound = 0.0;
  for (const auto& [p, s] : sh) {
    const double dim = static_cast<double>(dim_harmonic(e.n + 1, k_of(e.n, p)));
    e.uniform_bound += std::pow(2.0, -r) / std::sqrt(double(p)) * std::sqrt(s * dim / sphere_area(e.n + 1));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Data

CauchyData CauchyData::zero(int n) {
  CauchyData d;
  d.n = n;
  d.Phi = [](std::span<const double>) { return 0.0; };
  d.Psi = [](std::span<const double>) { return 0.0; };
  d.exact = [](double, std::span<const double>) { return 0.0; };
  return d;
}

CauchyData CauchyData::gaussian(int n, double width, double amplitude) {
  if (!(width > 0.0)) throw ParameterError("gaussian data: width must be positive");
  CauchyData d;
  d.n = n;
  d.Phi = [width, amplitude](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return amplitude * std::exp(-r2 / (width * width));
  };
  d.Psi = [](std::span<const double>) { return 0.0; };
  return d;
}

CauchyData CauchyData::from_mode(const ModeIndex& index, int n) {
  if (index.p <= 0) throw ParameterError("from_mode: positive-energy index expected");
  auto mf = std::make_shared<const ModeFunction>(n, index);
  const Field f = mf->field();
  CauchyData d;
  d.n = n;
  d.decay_class = "mode";
  d.Phi = [mf](std::span<const double> x) { return (*mf)(0.0, x).real(); };
  d.Psi = [f, n](std::span<const double> x) {
    std::vector<double> c{0.0};
    c.insert(c.end(), x.begin(), x.end());
    return f.directional(c, 0).d.real();
  };
  d.exact = [mf](double t, std::span<const double> x) { return (*mf)(t, x).real(); };
  return d;
}

CauchyData CauchyData::from_samples(int n, const std::vector<std::vector<double>>& points,
                                    const std::vector<double>& phi, const std::vector<double>& psi) {
  if (points.size() != phi.size() || points.size() != psi.size()) {
    throw ParameterError("from_samples: column length mismatch");
  }
  auto table = std::make_shared<std::unordered_map<std::string, std::pair<double, double>>>();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != n) throw ParameterError("from_samples: point dimension mismatch");
    (*table)[coord_key(points[i])] = {phi[i], psi[i]};
  }
  auto lookup = [table](std::span<const double> x) {
    auto it = table->find(coord_key(x));
    if (it == table->end()) throw ParameterError("data file does not cover quadrature node " + coord_key(x));
    return it->second;
  };
  CauchyData d;
  d.n = n;
  d.decay_class = "samples";
  d.Phi = [lookup](std::span<const double> x) { return lookup(x).first; };
  d.Psi = [lookup](std::span<const double> x) { return lookup(x).second; };
  return d;
}

// ---------------------------------------------------------------------------
// Expansion

std::vector<std::pair<int, double>> Expansion::shells() const {
  std::map<int, double> acc;
  for (const auto& e : entries) acc[std::abs(e.index.p)] += std::norm(e.c);
  return {acc.begin(), acc.end()};
}

cplx Expansion::coefficient(const ModeIndex& index) const {
  for (const auto& e : entries) {
    if (e.index == index) return e.c;
  }
  return 0.0;
}

std::string Expansion::to_json() const {
  json j;
  j["n"] = n;
  j["m"] = m;
  j["pmax"] = p_max;
  j["lmax"] = l_max;
  j["norm_sq"] = norm_sq;
  j["tail_estimate"] = tail_estimate;
  j["uniform_bound"] = uniform_bound;
  j["warnings"] = warnings;
  json modes = json::array();
  for (const auto& e : entries) {
    modes.push_back({{"p", e.index.p}, {"l", e.index.l}, {"j", e.index.j}, {"re", e.c.real()}, {"im", e.c.imag()}});
  }
  j["modes"] = modes;
  json shell = json::array();
  for (const auto& [p, s] : shells()) shell.push_back({{"p", p}, {"sum_abs_sq", s}});
  j["shells"] = shell;
  return j.dump(2);
}

Expansion Expansion::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("expansion json: ") + e.what());
  }
  Expansion e;
  try {
    e.n = j.at("n").get<int>();
    e.m = j.value("m", default_m(e.n));
    e.p_max = j.at("pmax").get<int>();
    e.l_max = j.value("lmax", std::max(0, k_of(e.n, e.p_max)));
    for (const auto& mm : j.at("modes")) {
      ModeIndex idx{mm.at("p").get<int>(), mm.at("l").get<int>(), mm.at("j").get<int>()};
      validate_index(e.n, idx);
      e.entries.push_back({idx, cplx(mm.at("re").get<double>(), mm.at("im").get<double>())});
    }
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("expansion json: ") + ex.what());
  }
  finalize(e);
  return e;
}

std::vector<std::vector<double>> expansion_nodes(int n, int p_max, const ExpandOptions& options) {
  const ProjectionGrid g = projection_grid(n, p_max, options);
  std::vector<std::vector<double>> out;
  out.reserve(g.theta.size() * g.sphere.points.size());
  for (double th : g.theta) {
    const double rho = std::tan(0.5 * th);
    for (const auto& xh : g.sphere.points) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i) x[i] = rho * xh[i];
      out.push_back(std::move(x));
    }
  }
  return out;
}

Expansion expand(const CauchyData& data, int n, int p_max, const ExpandOptions& options) {
  if (n < 2) throw UnsupportedError("expand: need n >= 2");
  if (data.n != n) throw ParameterError("expand: data dimension mismatch");
  if (!data.Phi || !data.Psi) throw ParameterError("expand: data functions missing");
  Expansion e;
  e.n = n;
  e.m = default_m(n);
  e.p_max = p_max;
  const auto modes = enumerate_modes(n, p_max);
  if (modes.empty()) {
    e.warnings.push_back("p_max below the lowest energy n-1; expansion is empty");
    return e;
  }
  if (auto w = probe_decay(data, n, options.decay_tolerance); !w.empty()) e.warnings.push_back(std::move(w));

  const ProjectionGrid g = projection_grid(n, p_max, options);
  e.l_max = g.l_max;
  std::vector<double> phi_hat, psi_hat;
  project_data(data, g, phi_hat, psi_hat);
  const auto H = shared_harmonics(n, g.l_max);
  const double r = weight_r(n);
  const std::size_t A = g.theta.size();

  // Group by (p, l); all j share the polar/radial factor.
  std::vector<std::pair<int, int>> pl;
  for (const auto& m : modes) {
    if (pl.empty() || pl.back() != std::make_pair(m.p, m.l)) pl.emplace_back(m.p, m.l);
  }
  std::vector<std::vector<cplx>> coeffs(pl.size());
  parallel_for(pl.size(), [&](std::size_t q) {
    const auto [p, l] = pl[q];
    const int count = H->count(l);
    const int base = H->offset(l);
    std::vector<cplx> c(count, 0.0);
    if (options.route == ExpandRoute::compact) {
      const int d = mode_degree(n, p, l);
      const double alpha = l - r;
      const double cn = std::pow(2.0, -r) / std::sqrt(p * gegenbauer_norm_sq(alpha, d));
      const double pre = std::pow(2.0, 1 - n);
      for (std::size_t a = 0; a < A; ++a) {
        const double th = g.theta[a];
        const double rho2 = std::pow(std::tan(0.5 * th), 2);
        const double F = cn * gegenbauer_eval(alpha, d, std::cos(th)) * std::pow(std::sin(th), l);
        const double s0 = std::pow(1.0 + rho2, -r);
        const double s1 = 0.5 * std::pow(1.0 + rho2, 1.0 - r);
        for (int j = 0; j < count; ++j) {
          const double u0 = s0 * phi_hat[a * g.harmonics + base + j];
          const double u1 = s1 * psi_hat[a * g.harmonics + base + j];
          c[j] += pre * g.theta_w[a] * F * (p * u0 - 2.0 * kI * u1);
        }
      }
    } else {
      const ModeFunction mf(n, {p, l, 0});
      for (std::size_t a = 0; a < A; ++a) {
        const double rho = std::tan(0.5 * g.theta[a]);
        const double rho2 = rho * rho;
        const Dual R = mf.radial(Dual::variable(0.0), Dual(rho2, 0.0));
        const double w = g.theta_w[a] * std::pow(0.5 * (1.0 + rho2), n) * std::pow(rho, l);
        for (int j = 0; j < count; ++j) {
          const double P = phi_hat[a * g.harmonics + base + j];
          const double Q = psi_hat[a * g.harmonics + base + j];
          c[j] += 2.0 * kI * w * (std::conj(R.d) * P - std::conj(R.v) * Q);
        }
      }
    }
    coeffs[q] = std::move(c);
  });
  std::size_t q = 0;
  for (const auto& m : modes) {
    while (pl[q] != std::make_pair(m.p, m.l)) ++q;
    e.entries.push_back({m, coeffs[q][m.j]});
  }
  finalize(e);
  return e;
}

// ---------------------------------------------------------------------------
// Reconstruction

namespace {

struct RadialGroup {
  std::shared_ptr<const ModeFunction> mode;  // j = 0; radial factor only
  int l;
  std::vector<std::pair<int, cplx>> coeffs;  // (j, c)
};

std::vector<RadialGroup> radial_groups(const Expansion& e) {
  std::vector<RadialGroup> out;
  for (const auto& en : e.entries) {
    if (out.empty() || out.back().mode->index().p != en.index.p || out.back().l != en.index.l) {
      out.push_back({std::make_shared<const ModeFunction>(e.n, ModeIndex{en.index.p, en.index.l, 0}), en.index.l, {}});
    }
    out.back().coeffs.emplace_back(en.index.j, en.c);
  }
  return out;
}

}  // namespace

Field expansion_field(const Expansion& e) {
  auto groups = std::make_shared<const std::vector<RadialGroup>>(radial_groups(e));
  const int n = e.n;
  return Field::from_generic(Picture::noncompact, n, [groups, n](auto c) {
    using T = std::decay_t<decltype(c[0])>;
    T rho2 = c[0] * 0.0;
    for (int i = 0; i < n; ++i) rho2 = rho2 + c[1 + i] * c[1 + i];
    T acc = c[0] * 0.0;
    for (const auto& g : *groups) {
      T ang = c[0] * 0.0;
      for (const auto& [j, cj] : g.coeffs) ang = ang + g.mode->harmonics().template evaluate<T>(g.l, j, c.subspan(1, n)) * cj;
      acc = acc + g.mode->radial(c[0], rho2) * ang;
    }
    return acc;
  });
}

std::vector<double> reconstruct(const Expansion& e, const std::vector<std::vector<double>>& points) {
  const auto groups = radial_groups(e);
  std::vector<double> out(points.size(), 0.0);
  if (groups.empty()) return out;
  const auto H = shared_harmonics(e.n, std::max(e.l_max, 1));
  parallel_for(points.size(), [&](std::size_t i) {
    const auto& pt = points[i];
    if (static_cast<int>(pt.size()) != e.n + 1) throw ParameterError("reconstruct: point dimension mismatch");
    const std::vector<double> h = H->evaluate_all(std::span<const double>(pt).subspan(1));
    double rho2 = 0.0;
    for (int k = 1; k <= e.n; ++k) rho2 += pt[k] * pt[k];
    cplx acc = 0.0;
    for (const auto& g : groups) {
      cplx ang = 0.0;
      for (const auto& [j, cj] : g.coeffs) ang += cj * h[H->offset(g.l) + j];
      acc += g.mode->radial(cplx(pt[0]), cplx(rho2)) * ang;
    }
    out[i] = acc.real();
  });
  return out;
}

std::vector<DecayReport> decay_profile(const Expansion& e, int N_max) {
  const auto sh = e.shells();
  double top = 0.0;
  for (const auto& s : sh) top = std::max(top, s.second);
  const double floor = 1e-26 * top;
  // Shell sums oscillate in p, so the ratio test runs on sums over blocks of
  // consecutive shells rather than on single shells.
  const std::size_t block = std::max<std::size_t>(4, sh.size() / 6);
  std::vector<DecayReport> out;
  for (int N = 0; N <= N_max; ++N) {
    DecayReport rep;
    rep.N = N;
    rep.block = static_cast<int>(block);
    double sum = 0.0;
    std::vector<double> w;
    for (const auto& [p, s] : sh) {
      const double v = std::pow(double(p), N) * s;
      sum += v;
      rep.partial_sums.push_back(sum);
      w.push_back(s > floor ? v : 0.0);
    }
    // Blocks aligned to the last shell; a short leading block is dropped.
    std::vector<double> b;
    for (std::size_t end = w.size(); end >= block; end -= block) {
      double s = 0.0;
      for (std::size_t i = end - block; i < end; ++i) s += w[i];
      b.insert(b.begin(), s);
    }
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[i - 1] > 0.0 && b[i] > 0.0) rep.shell_ratios.push_back(b[i] / b[i - 1]);
    }
    // Shells that dropped below the floor before p_max count as converged.
    const bool died = !w.empty() && w.back() == 0.0 && top > 0.0;
    if (top == 0.0 || died) {
      rep.convergent = true;
    } else if (rep.shell_ratios.size() >= 2) {
      const std::size_t k = 2;
      double lg = 0.0;
      for (std::size_t i = rep.shell_ratios.size() - k; i < rep.shell_ratios.size(); ++i) lg += std::log(rep.shell_ratios[i]);
      const double q = std::exp(lg / k);
      rep.convergent = q < 1.0 && b.back() * q / (1.0 - q) < 1e-2 * sum;
    }
    out.push_back(std::move(rep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite differences

std::vector<std::vector<double>> leapfrog_points(int n, double L, int cells, double R, int stride) {
  const double h = 2.0 * L / cells;
  std::vector<int> sel;
  for (int i = 0; i <= cells; i += stride) {
    if (std::abs(-L + i * h) <= R + 1e-12) sel.push_back(i);
  }
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(n, 0);
  if (sel.empty()) return out;
  while (true) {
    std::vector<double> x(n);
    for (int d = 0; d < n; ++d) x[d] = -L + sel[idx[d]] * h;
    out.push_back(std::move(x));
    int d = n - 1;
    while (d >= 0 && ++idx[d] == sel.size()) idx[d--] = 0;
    if (d < 0) break;
  }
  return out;
}

std::vector<std::vector<double>> leapfrog(const CauchyData& data, int n, double L, int cells, double dt, int steps,
                                          const std::vector<int>& report_steps, double R, int stride) {
  if (n < 2 || n > 3) throw UnsupportedError("leapfrog: n must be 2 or 3");
  if (cells < 2 || !(L > 0.0) || !(dt > 0.0)) throw ConfigError("leapfrog: invalid grid");
  const double h = 2.0 * L / cells;
  if (dt * std::sqrt(double(n)) > h * (1.0 + 1e-12)) throw ConfigError("leapfrog: CFL condition violated");
  const std::size_t side = cells + 1;
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= side;
  std::vector<std::size_t> stride_of(n);
  stride_of[n - 1] = 1;
  for (int d = n - 2; d >= 0; --d) stride_of[d] = stride_of[d + 1] * side;

  std::vector<double> prev(total, 0.0), cur(total, 0.0), next(total, 0.0), psi(total, 0.0);
  auto interior = [&](std::size_t id) {
    for (int d = 0; d < n; ++d) {
      const std::size_t i = (id / stride_of[d]) % side;
      if (i == 0 || i == side - 1) return false;
    }
    return true;
  };
  std::vector<std::size_t> inner;
  for (std::size_t id = 0; id < total; ++id) {
    if (interior(id)) inner.push_back(id);
  }
  {
    std::vector<double> x(n);
    for (std::size_t id : inner) {
      for (int d = 0; d < n; ++d) x[d] = -L + double((id / stride_of[d]) % side) * h;
      cur[id] = data.Phi(x);
      psi[id] = data.Psi(x);
    }
  }
  const double c2 = dt * dt / (h * h);
  auto lap = [&](const std::vector<double>& u, std::size_t id) {
    double s = -2.0 * n * u[id];
    for (int d = 0; d < n; ++d) s += u[id + stride_of[d]] + u[id - stride_of[d]];
    return s;
  };
  // Second-order start: u¹ = u⁰ + dt Ψ + dt²/2 Δu⁰.
  for (std::size_t id : inner) next[id] = cur[id] + dt * psi[id] + 0.5 * c2 * lap(cur, id);

  const auto pts = leapfrog_points(n, L, cells, R, stride);
  auto sample = [&](const std::vector<double>& u) {
    std::vector<double> vals;
    vals.reserve(pts.size());
    for (const auto& x : pts) {
      std::size_t id = 0;
      for (int d = 0; d < n; ++d) id += static_cast<std::size_t>(std::llround((x[d] + L) / h)) * stride_of[d];
      vals.push_back(u[id]);
    }
    return vals;
  };
  std::map<int, std::vector<double>> snaps;
  auto want = [&](int s) { return std::find(report_steps.begin(), report_steps.end(), s) != report_steps.end(); };
  if (want(0)) snaps[0] = sample(cur);
  prev.swap(cur);
  cur.swap(next);  // cur = u¹, prev = u⁰
  if (want(1)) snaps[1] = sample(cur);
  for (int s = 2; s <= steps; ++s) {
    for (std::size_t id : inner) next[id] = 2.0 * cur[id] - prev[id] + c2 * lap(cur, id);
    prev.swap(cur);
    cur.swap(next);
    if (want(s)) snaps[s] = sample(cur);
  }
  std::vector<std::vector<double>> out;
  for (int s : report_steps) out.push_back(snaps.at(s));
  return out;
}

std::string EvolveReport::to_json() const {
  json j;
  j["n"] = n;
  j["t_final"] = t_final;
  j["times"] = times;
  json lv = json::array();
  for (const auto& l : levels) {
    json o{{"h", l.h}, {"dt", l.dt}, {"sup_vs_spectral", l.sup_vs_spectral}, {"l2_vs_spectral", l.l2_vs_spectral}};
    if (l.sup_vs_exact >= 0.0) o["sup_vs_exact"] = l.sup_vs_exact;
    lv.push_back(o);
  }
  j["levels"] = lv;
  if (spectral_vs_exact >= 0.0) j["spectral_vs_exact"] = spectral_vs_exact;
  j["self_convergence_order"] = self_convergence_order;
  j["fd_error_estimate"] = fd_error_estimate;
  j["fd_dominated"] = fd_dominated;
  return j.dump(2);
}

EvolveReport evolve_compare(const CauchyData& data, int n, double t_final, const FdGrid& grid, int p_max) {
  if (n < 2 || n > 3) throw UnsupportedError("evolve_compare: finite-difference reference needs n <= 3");
  if (!(t_final > 0.0)) throw ConfigError("evolve_compare: t_final must be positive");
  if (!(grid.h > 0.0) || !(grid.R > 0.0)) throw ConfigError("evolve_compare: invalid grid");
  if (!(grid.cfl > 0.0) || grid.cfl * std::sqrt(double(n)) > 1.0) {
    throw ConfigError("evolve_compare: CFL violated (need cfl * sqrt(n) <= 1)");
  }
  EvolveReport rep;
  rep.n = n;
  rep.t_final = t_final;
  const double L = grid.R + t_final + 1.0;
  const int cells0 = static_cast<int>(std::ceil(2.0 * L / grid.h));
  const int steps0 = 4 * static_cast<int>(std::ceil(t_final / (4.0 * grid.cfl * 2.0 * L / cells0)));
  for (int q = 1; q <= 4; ++q) rep.times.push_back(t_final * q / 4.0);

  const auto pts = leapfrog_points(n, L, cells0, grid.R, 1);
  const Expansion e = expand(data, n, p_max);
  std::vector<std::vector<double>> spectral;
  std::vector<std::vector<double>> exact;
  for (double t : rep.times) {
    std::vector<std::vector<double>> st;
    for (const auto& x : pts) {
      std::vector<double> p{t};
      p.insert(p.end(), x.begin(), x.end());
      st.push_back(std::move(p));
    }
    spectral.push_back(reconstruct(e, st));
    if (data.exact) {
      std::vector<double> ex;
      for (const auto& x : pts) ex.push_back((*data.exact)(t, x));
      exact.push_back(std::move(ex));
    }
  }
  if (data.exact) {
    rep.spectral_vs_exact = 0.0;
    for (std::size_t a = 0; a < exact.size(); ++a) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        rep.spectral_vs_exact = std::max(rep.spectral_vs_exact, std::abs(spectral[a][i] - exact[a][i]));
      }
    }
  }

  std::vector<std::vector<std::vector<double>>> runs;
  for (int level = 0; level < 3; ++level) {
    const int s = 1 << level;
    const int cells = cells0 * s;
    const int steps = steps0 * s;
    const double dt = t_final / steps;
    std::vector<int> report;
    for (int q = 1; q <= 4; ++q) report.push_back(steps * q / 4);
    auto u = leapfrog(data, n, L, cells, dt, steps, report, grid.R, s);
    FdLevel lv;
    lv.h = 2.0 * L / cells;
    lv.dt = dt;
    double l2 = 0.0;
    std::size_t count = 0;
    double ex = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dv = u[a][i] - spectral[a][i];
        lv.sup_vs_spectral = std::max(lv.sup_vs_spectral, std::abs(dv));
        l2 += dv * dv;
        ++count;
        if (data.exact) ex = std::max(ex, std::abs(u[a][i] - exact[a][i]));
      }
    }
    lv.l2_vs_spectral = std::sqrt(l2 / std::max<std::size_t>(count, 1));
    if (data.exact) lv.sup_vs_exact = ex;
    rep.levels.push_back(lv);
    runs.push_back(std::move(u));
  }

  auto sup_diff = [&](int a, int b) {
    double m = 0.0;
    for (std::size_t k = 0; k < runs[a].size(); ++k) {
      for (std::size_t i = 0; i < pts.size(); ++i) m = std::max(m, std::abs(runs[a][k][i] - runs[b][k][i]));
    }
    return m;
  };
  const double e1 = sup_diff(0, 1);
  const double e2 = sup_diff(1, 2);
  if (e1 > 0.0 && e2 > 0.0) {
    rep.self_convergence_order = std::log2(e1 / e2);
    const double gain = std::pow(2.0, rep.self_convergence_order) - 1.0;
    rep.fd_error_estimate = gain > 0.0 ? e2 / gain : e2;
  }
  const double d0 = rep.levels[0].sup_vs_spectral;
  const double d1 = rep.levels[1].sup_vs_spectral;
  const double d2 = rep.levels[2].sup_vs_spectral;
  if (d2 == 0.0) {
    rep.fd_dominated = true;
  } else {
    // The discrepancy shrinks at the FD rate, so the spectral error sits below it.
    rep.fd_dominated = d1 > 0.0 && std::log2(d0 / d1) > 1.5 && std::log2(d1 / d2) > 1.5;
  }
  return rep;
}

}  // namespace wavebasis
