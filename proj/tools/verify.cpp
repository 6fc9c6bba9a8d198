#include <cmath>
#include <numbers>
#include <random>

#include "cli.hpp"
#include "wavebasis/klein_gordon.hpp"
#include "wavebasis/lie_action.hpp"
#include "wavebasis/modes.hpp"

namespace wavebasis::cli {

namespace {

using json = nlohmann::json;

struct Sampler {
  std::mt19937_64 rng;
  int n;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

  std::vector<double> unit(int dim) {
    std::normal_distribution<double> g;
    std::vector<double> v(dim);
    double s = 0.0;
    for (auto& x : v) {
      x = g(rng);
      s += x * x;
    }
    for (auto& x : v) x /= std::sqrt(s);
    return v;
  }

  std::vector<double> compact() {
    std::vector<double> p{uniform(-std::numbers::pi, std::numbers::pi), uniform(0.1, std::numbers::pi - 0.1)};
    const auto u = unit(n);
    p.insert(p.end(), u.begin(), u.end());
    return p;
  }

  std::vector<double> noncompact(double box = 1.5) {
    std::vector<double> p(n + 1);
    for (auto& v : p) v = uniform(-box, box);
    return p;
  }
};

json check(const std::string& name, double residual, double tol) {
  return {{"name", name}, {"residual", residual}, {"tolerance", tol}, {"pass", residual <= tol}};
}

// Variation of the ratio a/b across samples, relative to its mean.
double ratio_spread(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(b[i]) > 1e-8) r.push_back(a[i] / b[i]);
  }
  if (r.empty()) return 0.0;
  cplx mean = 0.0;
  for (auto v : r) mean += v;
  mean /= double(r.size());
  double worst = 0.0;
  for (auto v : r) worst = std::max(worst, std::abs(v - mean));
  return std::abs(mean) > 0.0 ? worst / std::abs(mean) : worst;
}

}  // namespace

json run_verify(const VerifyOptions& o) {
  const int n = o.n;
  const double r = weight_r(n);
  Sampler S{std::mt19937_64(o.seed), n};
  json checks = json::array();
  const auto modes = enumerate_modes(n, o.p_max);

  {
    const Sl2Triple s = sl2_triple(n);
    const bool ok = commutator(s.h, s.e_plus) == s.e_plus * Rational(2) &&
                    commutator(s.h, s.e_minus) == s.e_minus * Rational(-2) && commutator(s.e_plus, s.e_minus) == s.h;
    checks.push_back(check("sl2_relations_exact", ok ? 0.0 : 1.0, 0.0));
    checks.push_back(check("casimir_operator_exact", casimir_identity_operator(n).is_zero() ? 0.0 : 1.0, 0.0));
  }
  {
    const Field g = Field::from_generic(Picture::noncompact, n, [n](auto c) {
      auto e = c[0] * c[0] * (-0.5);
      for (int i = 1; i <= n; ++i) e = e - c[i] * c[i] * (1.0 / 3.0);
      return exp(e) * (1.0 + c[0] * c[1]);
    });
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < o.samples; ++k) pts.push_back(S.noncompact());
    checks.push_back(check("casimir_identity_numeric", casimir_identity_residual(g, pts, n), 1e-10));
  }

  if (n % 2 == 1) {
    double failures = 0.0;
    for (const auto& m : modes) {
      if (!rational_mode(m, n).kernel_residual().is_zero()) failures += 1.0;
    }
    checks.push_back(check("kernel_exact", failures, 0.0));
  }
  {
    double worst = 0.0;
    for (const auto& m : modes) {
      const Field f = mode(m, n).field();
      for (int k = 0; k < o.samples; ++k) {
        const auto w = wave_residual(f, S.noncompact());
        worst = std::max(worst, w.residual / std::max(w.scale, 1e-300));
      }
    }
    checks.push_back(check("kernel_numeric", worst, 1e-7));
  }

  {
    const EnergyLadder L = energy_ladder(n);
    double eig = 0.0, spread = 0.0, vanish = 0.0, comm = 0.0;
    for (const auto& m : modes) {
      const Field F = mode_compact(m, n);
      std::vector<std::vector<double>> pts;
      for (int k = 0; k < o.samples; ++k) pts.push_back(S.compact());
      std::vector<cplx> up, up_ref, down, down_ref;
      const bool lowest = std::lround(2 * (m.l - r)) == m.p;
      const Field Fu = mode_compact({m.p + 2, m.l, m.j}, n);
      const Field Fd = lowest ? Field() : mode_compact({m.p - 2, m.l, m.j}, n);
      const Field zn = commutator_apply(L.z, L.n_plus, F);
      const Field nn = commutator_apply(L.n_plus, L.n_minus, F);
      for (const auto& p : pts) {
        eig = std::max(eig, std::abs(L.z.apply_at(F, p) - double(m.p) * F(p)));
        up.push_back(L.n_plus.apply_at(F, p));
        up_ref.push_back(Fu(p));
        const cplx dn = L.n_minus.apply_at(F, p);
        if (lowest) {
          vanish = std::max(vanish, std::abs(dn));
        } else {
          down.push_back(dn);
          down_ref.push_back(Fd(p));
        }
        comm = std::max(comm, std::abs(zn(p) - 2.0 * L.n_plus.apply_at(F, p)));
        comm = std::max(comm, std::abs(nn(p) - L.z.apply_at(F, p)));
      }
      spread = std::max({spread, ratio_spread(up, up_ref), ratio_spread(down, down_ref)});
    }
    checks.push_back(check("energy_eigenvalue", eig, 1e-10));
    checks.push_back(check("ladder_proportionality", spread, 1e-9));
    checks.push_back(check("ladder_vanishing", vanish, 1e-10));
    checks.push_back(check("ladder_commutators", comm, 1e-9));
  }

  {
    double worst = 0.0;
    for (const auto& m : modes) {
      std::vector<std::vector<double>> pts;
      for (int k = 0; k < o.samples; ++k) pts.push_back(S.compact());
      worst = std::max(worst, omega_compact_residual(mode_compact(m, n), pts, n, 0));
    }
    checks.push_back(check("omega_factorization", worst, 1e-10));
  }

  for (Picture pic : {Picture::compact, Picture::noncompact}) {
    const Eigen::MatrixXcd G = gram_matrix(modes, n, pic);
    double diag = 0.0, off = 0.0;
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      for (Eigen::Index j = 0; j < G.cols(); ++j) {
        if (i == j) diag = std::max(diag, std::abs(G(i, j) - 1.0));
        else off = std::max(off, std::abs(G(i, j)));
      }
    }
    const std::string tag = pic == Picture::compact ? "compact" : "noncompact";
    checks.push_back(check("gram_diagonal_" + tag, diag, 1e-9));
    checks.push_back(check("gram_offdiagonal_" + tag, off, 1e-10));
  }

  {
    double worst = 0.0;
    for (int p = n - 1; p <= o.p_max; p += 2) {
      const int k = (p - n + 1) / 2;
      const double expect = double(dim_harmonic(n + 1, k)) / sphere_area(n + 1);
      for (int s = 0; s < o.samples; ++s) {
        const auto pt = S.compact();
        double sum = 0.0;
        for (int l = 0; l <= k; ++l) {
          for (int j = 0; j < dim_harmonic(n, l); ++j) {
            std::vector<double> c = pt;
            c[0] = 0.0;
            sum += std::norm(mode_G({p, l, j}, n)(c));
          }
        }
        worst = std::max(worst, std::abs(sum - expect));
      }
    }
    checks.push_back(check("addition_theorem", worst, 1e-10));
  }

  {
    const int m = ((1 - n) % 4 + 4) % 4;
    double worst = 0.0;
    const Field f = mode(modes.back(), n).field();
    auto random_element = [&] {
      GroupElement g = GroupElement::identity(n, m);
      const double a = S.uniform(0.7, 1.4), b = S.uniform(-0.5, 0.5), c = S.uniform(-0.2, 0.2);
      g.sl2 = {a, b, c, (1.0 + b * c) / a};
      // A rotation in a random coordinate plane.
      const int i = static_cast<int>(S.uniform(0, n - 1 - 1e-9));
      const double th = S.uniform(-3.0, 3.0);
      g.rot[i * n + i] = std::cos(th);
      g.rot[i * n + i + 1] = -std::sin(th);
      g.rot[(i + 1) * n + i] = std::sin(th);
      g.rot[(i + 1) * n + i + 1] = std::cos(th);
      return g;
    };
    for (int k = 0; k < o.samples; ++k) {
      const GroupElement g1 = random_element(), g2 = random_element();
      const auto p = S.noncompact(0.5);
      try {
        worst = std::max(worst, std::abs(group_act(g1 * g2, f)(p) - group_act(g1, group_act(g2, f))(p)));
      } catch (const ChartError&) {
        // Point on a boundary set of one of the actions; skip.
      }
    }
    checks.push_back(check("group_action_composition", worst, 1e-9));
  }

  {
    double mismatches = 0.0;
    for (int m = 0; m < 4; ++m) {
      const Sector s = sector(n, m);
      for (const auto& idx : modes) {
        const bool plus = s == Sector::PLUS || s == Sector::BOTH;
        const bool minus = s == Sector::MINUS || s == Sector::BOTH;
        if (ktype_check(n, m, idx.p, idx.l) != plus) mismatches += 1.0;
        if (ktype_check(n, m, -idx.p, idx.l) != minus) mismatches += 1.0;
      }
    }
    checks.push_back(check("sector_ktype_consistency", mismatches, 0.0));
  }

  bool pass = true;
  for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
  return {{"command", "verify"}, {"n", n}, {"pmax", o.p_max}, {"samples", o.samples},
          {"seed", o.seed},      {"modes", modes.size()},      {"checks", checks}, {"pass", pass}};
}

}  // namespace wavebasis::cli
