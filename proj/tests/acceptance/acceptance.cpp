// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wavebasis/cauchy_solver.hpp"
#include "wavebasis/errors.hpp"
#include "wavebasis/klein_gordon.hpp"
#include "wavebasis/lie_action.hpp"
#include "wavebasis/modes.hpp"
#include "wavebasis/parallel.hpp"

using namespace wavebasis;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int default_m(int n) { return ((1 - n) % 4 + 4) % 4; }

// 1. □ of every exact mode vanishes identically (n = 3, 5; p ≤ 16).
Outcome exact_kernel() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t total = 0;
  std::atomic<int> bad{0};
  for (int n : {3, 5}) {
    const auto modes = enumerate_modes(n, 16);
    total += modes.size();
    parallel_for(modes.size(), [&](std::size_t k) {
      if (!rational_mode(modes[k], n).kernel_residual().is_zero()) ++bad;
    });
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad == 0 && secs < 60.0, fmt("%zu modes, %d nonzero residuals, %.1f s (limit 60 s)", total, bad.load(), secs)};
}

// 2. |□f| / local scale at 10³ random points (n = 2, 4; p ≤ 15).
Outcome numeric_kernel() {
  double worst = 0.0;
  std::size_t evals = 0;
  for (int n : {2, 4}) {
    const auto modes = enumerate_modes(n, 15);
    std::vector<Field> fs;
    for (const auto& m : modes) fs.push_back(mode(m, n).field());
    oracle::Rng rng(1000 + n);
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 1000; ++k) pts.push_back(rng.spacetime(n, 2.0));
    std::vector<double> per(pts.size(), 0.0);
    parallel_for(pts.size(), [&](std::size_t k) {
      for (const auto& f : fs) {
        const auto w = wave_residual(f, pts[k]);
        per[k] = std::max(per[k], w.residual / std::max(w.scale, 1e-300));
      }
    });
    for (double v : per) worst = std::max(worst, v);
    evals += pts.size() * fs.size();
  }
  return {worst < 1e-7, fmt("%zu evaluations, max relative residual %.2e (limit 1e-7)", evals, worst)};
}

// 3. Gram matrices of all modes with p ≤ 12 (n = 2, 3) in both pictures.
Outcome orthonormality() {
  double diag = 0.0, off = 0.0;
  for (int n : {2, 3}) {
    const auto modes = enumerate_modes(n, 12);
    for (Picture pic : {Picture::compact, Picture::noncompact}) {
      const Eigen::MatrixXcd G = gram_matrix(modes, n, pic);
      for (Eigen::Index i = 0; i < G.rows(); ++i)
        for (Eigen::Index j = 0; j < G.cols(); ++j) {
          if (i == j) diag = std::max(diag, std::abs(G(i, j) - 1.0));
          else off = std::max(off, std::abs(G(i, j)));
        }
    }
  }
  return {diag < 1e-9 && off < 1e-10, fmt("max |G_ii - 1| = %.2e (limit 1e-9), max |G_ij| = %.2e (limit 1e-10)", diag, off)};
}

// Monomials of total degree ≤ deg in nv variables.
void monomials(int nv, int deg, std::vector<int>& cur, int var, std::vector<std::vector<int>>& out) {
  if (var == nv) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int i = 0; i < var; ++i) used += cur[i];
  for (int e = 0; e + used <= deg; ++e) {
    cur[var] = e;
    monomials(nv, deg, cur, var + 1, out);
  }
  cur[var] = 0;
}

// 4. Casimir identity and its compact factorization.
Outcome casimir() {
  // Exact: every monomial of degree ≤ 6 for n = 2, 3, and the operator identity for n = 2..5.
  std::size_t exact_checked = 0;
  std::atomic<int> exact_bad{0};
  for (int n = 2; n <= 5; ++n) {
    if (!casimir_identity_operator(n).is_zero()) ++exact_bad;
  }
  for (int n : {2, 3}) {
    std::vector<std::vector<int>> mons;
    std::vector<int> cur(n + 1, 0);
    monomials(n + 1, 6, cur, 0, mons);
    exact_checked += mons.size();
    parallel_for(mons.size(), [&](std::size_t k) {
      const auto P = RationalPolynomial::monomial(n + 1, Monomial::from_exponents(mons[k]), Rational(1));
      if (!casimir_identity_residual(P, n).is_zero()) ++exact_bad;
    });
  }

  // Compact factorization on the trigonometric basis e^{ikφ/2} cos^aθ sin^bθ x̂^β, a + b + |β| ≤ 6.
  double trig = 0.0;
  std::size_t trig_checked = 0;
  for (int n : {2, 3}) {
    oracle::Rng rng(4000 + n);
    std::vector<std::vector<double>> pts;
    for (int s = 0; s < 10; ++s) pts.push_back(rng.compact(n));
    std::vector<std::vector<int>> mons;
    std::vector<int> cur(n + 2, 0);
    monomials(n + 2, 6, cur, 0, mons);
    std::vector<double> per(mons.size(), 0.0);
    parallel_for(mons.size(), [&](std::size_t q) {
      const auto e = mons[q];
      for (int k : {-3, 0, 1, 4}) {
        const Field F = Field::from_generic(Picture::compact, n, [e, k, n](auto c) {
          auto v = exp(c[0] * cplx(0.0, 0.5 * k)) * pow_int(cos(c[1]), e[0]) * pow_int(sin(c[1]), e[1]);
          for (int i = 0; i < n; ++i) v = v * pow_int(c[2 + i], e[2 + i]);
          return v;
        });
        per[q] = std::max(per[q], omega_compact_residual(F, pts, n, 0));
      }
    });
    for (double v : per) trig = std::max(trig, v);
    trig_checked += 4 * mons.size();
  }

  // 10³ smooth random samples in each picture.
  double smooth = 0.0;
  for (int n : {2, 3}) {
    oracle::Rng rng(4100 + n);
    const Field g = Field::from_generic(Picture::noncompact, n, [n](auto c) {
      auto e = c[0] * c[0] * (-0.5);
      for (int i = 1; i <= n; ++i) e = e - c[i] * c[i] * (1.0 / 3.0);
      return exp(e) * (1.0 + c[0] * c[1]) + sin(c[0] - c[n] * 0.5);
    });
    const Field G = Field::from_generic(Picture::compact, n, [](auto c) {
      return exp(c[0] * cplx(0.0, 1.5)) * exp(cos(c[1]) * 0.7) * (c[2] * c[2] + sin(c[3]));
    });
    std::vector<std::vector<double>> nc, cp;
    for (int k = 0; k < 1000; ++k) {
      nc.push_back(rng.spacetime(n, 1.5));
      cp.push_back(rng.compact(n));
    }
    std::vector<double> per(20, 0.0);
    parallel_for(20, [&](std::size_t b) {
      const std::vector<std::vector<double>> a(nc.begin() + 50 * b, nc.begin() + 50 * (b + 1));
      const std::vector<std::vector<double>> c(cp.begin() + 50 * b, cp.begin() + 50 * (b + 1));
      per[b] = std::max(casimir_identity_residual(g, a, n), omega_compact_residual(G, c, n, 0));
    });
    for (double v : per) smooth = std::max(smooth, v);
  }
  const bool pass = exact_bad == 0 && trig < 1e-10 && smooth < 1e-10;
  return {pass, fmt("exact: %zu monomials + operator identity n=2..5, %d failures; trig basis: %zu functions, max %.2e; "
                    "smooth samples: max %.2e (limit 1e-10)",
                    exact_checked, exact_bad.load(), trig_checked, trig, smooth)};
}

// 5. Energy eigenvalue and ladder structure of the compact modes.
Outcome ladder() {
  double eig = 0.0, spread = 0.0, vanish = 0.0;
  std::size_t count = 0;
  for (int n : {2, 3, 4}) {
    const double r = weight_r(n);
    const EnergyLadder L = energy_ladder(n);
    const auto modes = enumerate_modes(n, n + 9);
    count += modes.size();
    oracle::Rng rng(5000 + n);
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 50; ++k) pts.push_back(rng.compact(n));
    std::vector<double> e(modes.size()), s(modes.size()), v(modes.size());
    parallel_for(modes.size(), [&](std::size_t q) {
      const ModeIndex& m = modes[q];
      const Field F = mode_compact(m, n);
      const bool lowest = std::lround(2 * (m.l - r)) == m.p;
      const Field Fu = mode_compact({m.p + 2, m.l, m.j}, n);
      const Field Fd = lowest ? Field() : mode_compact({m.p - 2, m.l, m.j}, n);
      std::vector<cplx> up, down;
      for (const auto& p : pts) {
        e[q] = std::max(e[q], std::abs(L.z.apply_at(F, p) - double(m.p) * F(p)));
        const cplx u = Fu(p);
        if (std::abs(u) > 1e-6) up.push_back(L.n_plus.apply_at(F, p) / u);
        const cplx dn = L.n_minus.apply_at(F, p);
        if (lowest) {
          v[q] = std::max(v[q], std::abs(dn));
        } else if (std::abs(Fd(p)) > 1e-6) {
          down.push_back(dn / Fd(p));
        }
      }
      for (const auto* list : {&up, &down}) {
        if (list->empty()) continue;
        cplx mean = 0.0;
        for (auto z : *list) mean += z;
        mean /= double(list->size());
        for (auto z : *list) s[q] = std::max(s[q], std::abs(z - mean) / std::max(std::abs(mean), 1e-300));
      }
    });
    for (std::size_t q = 0; q < modes.size(); ++q) {
      eig = std::max(eig, e[q]);
      spread = std::max(spread, s[q]);
      vanish = std::max(vanish, v[q]);
    }
  }
  return {eig < 1e-10 && spread < 1e-9 && vanish < 1e-10,
          fmt("%zu modes: |zF - pF| %.2e (1e-10), ladder ratio spread %.2e (1e-9), |n-F| at lowest p %.2e (1e-10)",
              count, eig, spread, vanish)};
}

// 6. Σ_{l,j} |G_{p,l,j}|² = dim H_k(ℝ^{n+1}) / Area(Sⁿ).
Outcome addition_theorem() {
  double worst = 0.0;
  for (int n : {2, 3}) {
    const auto modes = enumerate_modes(n, 12);
    std::vector<Field> G;
    for (const auto& m : modes) G.push_back(mode_G(m, n));
    oracle::Rng rng(6000 + n);
    for (int s = 0; s < 100; ++s) {
      std::vector<double> c{0.0, std::acos(rng.uniform(-1.0, 1.0))};
      const auto u = rng.unit(n);
      c.insert(c.end(), u.begin(), u.end());
      for (int p = n - 1; p <= 12; p += 2) {
        double sum = 0.0;
        for (std::size_t k = 0; k < modes.size(); ++k)
          if (modes[k].p == p) sum += std::norm(G[k](c));
        const int k = (p - n + 1) / 2;
        worst = std::max(worst, std::abs(sum - oracle::dim_harmonic(n + 1, k) / oracle::sphere_area(n + 1)));
      }
    }
  }
  return {worst < 1e-10, fmt("100 points, n = 2, 3, p <= 12: max deviation %.2e (limit 1e-10)", worst)};
}

// 7. KG product invariance under c = 0 elements and rotations.
Outcome unitarity() {
  const int n = 3, m = default_m(n);
  const auto modes = enumerate_modes(n, 8);
  const QuadratureGrid grid = quadrature_grid(n, 160, 2 * 3 + 2);
  oracle::Rng rng(7000);
  std::vector<GroupElement> els;
  for (int k = 0; k < 20; ++k) {
    GroupElement g = GroupElement::identity(n, m);
    const double a = rng.uniform(0.7, 1.4);
    g.sl2 = {a, rng.uniform(-0.5, 0.5), 0.0, 1.0 / a};
    els.push_back(g);
  }
  for (int k = 0; k < 20; ++k) {
    // Random orthogonal matrix with det 1 from Gram–Schmidt.
    std::vector<std::vector<double>> q;
    while (q.size() < static_cast<std::size_t>(n)) {
      auto v = rng.unit(n);
      for (const auto& w : q) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += v[i] * w[i];
        for (int i = 0; i < n; ++i) v[i] -= d * w[i];
      }
      double s = 0.0;
      for (double x : v) s += x * x;
      if (s < 1e-6) continue;
      for (double& x : v) x /= std::sqrt(s);
      q.push_back(v);
    }
    const double det = q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
                       q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
    if (det < 0)
      for (double& x : q[0]) x = -x;
    GroupElement g = GroupElement::identity(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g.rot[i * n + j] = q[i][j];
    els.push_back(g);
  }
  std::vector<double> res(els.size());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < els.size(); ++k)
    pairs.push_back({static_cast<std::size_t>(rng.uniform(0, modes.size() - 1e-9)),
                     static_cast<std::size_t>(rng.uniform(0, modes.size() - 1e-9))});
  for (std::size_t k = 0; k < els.size(); ++k) {
    res[k] = unitarity_check(els[k], mode(modes[pairs[k].first], n).field(), mode(modes[pairs[k].second], n).field(), grid);
  }
  double worst = 0.0;
  for (double v : res) worst = std::max(worst, v);
  return {worst < 1e-8, fmt("20 c = 0 elements + 20 rotations: max change %.2e (limit 1e-8)", worst)};
}

// 8. sector(n, m) against the K-type tables.
Outcome sectors() {
  // Rows n = 2..7, columns m = 0..3.
  const Sector Z = Sector::ZERO, P = Sector::PLUS, M = Sector::MINUS, B = Sector::BOTH;
  const Sector table[6][4] = {
      {Z, M, Z, P}, {Z, Z, B, Z}, {Z, P, Z, M}, {B, Z, Z, Z}, {Z, M, Z, P}, {Z, Z, B, Z},
  };
  int mismatches = 0, ktype = 0;
  for (int n = 2; n <= 7; ++n) {
    for (int m = 0; m < 4; ++m) {
      const Sector s = table[n - 2][m];
      if (sector(n, m) != s) ++mismatches;
      const bool plus = s == P || s == B, minus = s == M || s == B;
      for (int k = 0; k <= 4; ++k) {
        const int p = 2 * k + n - 1;
        if (ktype_check(n, m, p, 0) != plus) ++ktype;
        if (ktype_check(n, m, -p, 0) != minus) ++ktype;
      }
    }
  }
  return {mismatches == 0 && ktype == 0,
          fmt("24 (n, m) pairs: %d sector mismatches, %d K-type mismatches", mismatches, ktype)};
}

// 9. Mode data expand to a unit coefficient and reconstruct the mode.
Outcome round_trip() {
  double coeff = 0.0, recon = 0.0;
  std::size_t count = 0;
  for (int n : {2, 3}) {
    const auto modes = enumerate_modes(n, n + 5);
    count += modes.size();
    std::vector<double> c(modes.size()), r(modes.size());
    parallel_for(modes.size(), [&](std::size_t q) {
      const Expansion e = expand(CauchyData::from_mode(modes[q], n), n, n + 7);
      for (const auto& en : e.entries) c[q] = std::max(c[q], std::abs(en.c - (en.index == modes[q] ? 1.0 : 0.0)));
      oracle::Rng rng(9000 + 31 * n + q);
      std::vector<std::vector<double>> pts;
      for (int k = 0; k < 1000; ++k) pts.push_back(rng.spacetime(n, 2.0));
      const auto u = reconstruct(e, pts);
      const ModeFunction f = mode(modes[q], n);
      for (std::size_t k = 0; k < pts.size(); ++k)
        r[q] = std::max(r[q], std::abs(u[k] - f(pts[k][0], std::span<const double>(pts[k]).subspan(1)).real()));
    });
    for (std::size_t q = 0; q < modes.size(); ++q) {
      coeff = std::max(coeff, c[q]);
      recon = std::max(recon, r[q]);
    }
  }
  return {coeff < 1e-8 && recon < 1e-8,
          fmt("%zu modes: max coefficient error %.2e, max reconstruction error %.2e at 10^3 points (limit 1e-8)", count,
              coeff, recon)};
}

// 10. Spectral solution vs leapfrog for a Gaussian.
Outcome cross_solver() {
  const auto t0 = std::chrono::steady_clock::now();
  FdGrid g;
  g.h = 0.2;
  g.cfl = 0.5;
  g.R = 1.0;
  const EvolveReport rep = evolve_compare(CauchyData::gaussian(3), 3, 1.0, g, 60);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double sup = rep.levels.back().sup_vs_spectral;
  return {sup < 5e-3 && rep.fd_dominated && secs < 300.0,
          fmt("sup discrepancy by level %.2e, %.2e, %.2e (finest limit 5e-3); order %.2f, fd_dominated %s; %.1f s",
              rep.levels[0].sup_vs_spectral, rep.levels[1].sup_vs_spectral, sup, rep.self_convergence_order,
              rep.fd_dominated ? "yes" : "no", secs)};
}

// 11. Ratio test on p^N-weighted shells of Schwartz data.
Outcome decay() {
  CauchyData d;
  d.n = 2;
  d.Phi = [](std::span<const double> x) { return (x[0] - 0.3 * x[1] * x[1]) * std::exp(-(x[0] * x[0] + x[1] * x[1])); };
  d.Psi = [](std::span<const double> x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])); };
  int bad = 0;
  std::string sums;
  for (const auto& [data, n, pmax] : {std::tuple{CauchyData::gaussian(3), 3, 60}, std::tuple{d, 2, 61}}) {
    const auto prof = decay_profile(expand(data, n, pmax), 6);
    for (const auto& r : prof) {
      if (!r.convergent) ++bad;
    }
    sums += fmt("%sn=%d N=6 sum %.3e", sums.empty() ? "" : ", ", n, prof.back().partial_sums.back());
  }
  return {bad == 0, fmt("N = 0..6 on two Schwartz data sets, %d non-convergent (%s)", bad, sums.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact kernel certification", exact_kernel}, {"numerical kernel", numeric_kernel},
      {"orthonormality", orthonormality},           {"casimir identities", casimir},
      {"energy and ladder spectrum", ladder},       {"addition theorem", addition_theorem},
      {"unitarity", unitarity},                     {"sector classification", sectors},
      {"cauchy round trip", round_trip},            {"cross-solver validation", cross_solver},
      {"coefficient decay", decay},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%-4s %2zu %-28s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
