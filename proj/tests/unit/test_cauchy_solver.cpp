#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wavebasis/cauchy_solver.hpp"
#include "wavebasis/errors.hpp"
#include "wavebasis/klein_gordon.hpp"

using namespace wavebasis;

namespace {

double r2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// c_p for radial data Φ and Ψ = 0 and the l = 0 mode, straight from
// c = 2i ∫ conj(∂t f) Φ dx as a one-dimensional radial integral.
cplx radial_coefficient(int n, int p, const std::function<double(double)>& phi) {
  const ModeFunction f = mode({p, 0, 0}, n);
  const double h0 = 1.0 / std::sqrt(oracle::sphere_area(n));
  const double integral_re = oracle::simpson(
      [&](double rho) {
        const Dual v = f.radial(Dual::variable(0.0), Dual(rho * rho, 0.0));
        return (std::conj(v.d) * phi(rho)).real() * std::pow(rho, n - 1);
      },
      0.0, 12.0, 6000);
  const double integral_im = oracle::simpson(
      [&](double rho) {
        const Dual v = f.radial(Dual::variable(0.0), Dual(rho * rho, 0.0));
        return (std::conj(v.d) * phi(rho)).imag() * std::pow(rho, n - 1);
      },
      0.0, 12.0, 6000);
  return cplx(0.0, 2.0) * oracle::sphere_area(n) * h0 * cplx(integral_re, integral_im);
}

}  // namespace

TEST_SUITE("cauchy_solver") {
  TEST_CASE("zero data") {
    const Expansion e = expand(CauchyData::zero(3), 3, 10);
    CHECK_FALSE(e.entries.empty());
    for (const auto& en : e.entries) CHECK(std::abs(en.c) == 0.0);
    CHECK(e.norm_sq == 0.0);
  }

  TEST_CASE("mode round trip, both routes") {
    for (int n : {2, 3, 4}) {
      for (const ModeIndex& idx : enumerate_modes(n, n + 4)) {
        for (ExpandRoute route : {ExpandRoute::compact, ExpandRoute::noncompact}) {
          ExpandOptions o;
          o.route = route;
          const Expansion e = expand(CauchyData::from_mode(idx, n), n, n + 6, o);
          for (const auto& en : e.entries) {
            const cplx expect = en.index == idx ? 1.0 : 0.0;
            CHECK(std::abs(en.c - expect) < 1e-8);
          }
        }
      }
    }
  }

  TEST_CASE("gaussian coefficients against a radial quadrature") {
    const int n = 3;
    const Expansion e = expand(CauchyData::gaussian(n), n, 20);
    for (const auto& en : e.entries) {
      if (en.index.l > 0) {
        CHECK(std::abs(en.c) < 1e-10);
        continue;
      }
      const cplx ref = radial_coefficient(n, en.index.p, [](double rho) { return std::exp(-rho * rho); });
      CHECK(std::abs(en.c - ref) < 1e-8);
    }
  }

  TEST_CASE("routes agree on non-radial data") {
    const int n = 3;
    CauchyData d;
    d.n = n;
    d.Phi = [](std::span<const double> x) { return (1.0 + x[0] - 0.5 * x[1] * x[2]) * std::exp(-r2(x)); };
    d.Psi = [](std::span<const double> x) { return x[2] * std::exp(-0.7 * r2(x)); };
    ExpandOptions a, b;
    b.route = ExpandRoute::noncompact;
    const Expansion ea = expand(d, n, 16, a), eb = expand(d, n, 16, b);
    REQUIRE(ea.entries.size() == eb.entries.size());
    for (std::size_t k = 0; k < ea.entries.size(); ++k) CHECK(std::abs(ea.entries[k].c - eb.entries[k].c) < 1e-9);
  }

  TEST_CASE("parseval and projection idempotence") {
    const int n = 2;
    CauchyData d;
    d.n = n;
    d.Phi = [](std::span<const double> x) { return x[0] * std::exp(-r2(x)); };
    d.Psi = [](std::span<const double> x) { return std::exp(-0.5 * r2(x)); };
    const int pmax = 15;
    const Expansion e = expand(d, n, pmax);
    const Field f = expansion_field(e);
    const QuadratureGrid g = quadrature_grid(n, 60, 2 * pmax + 2);
    CHECK(std::abs(kg_inner_noncompact(f, f, g) - e.norm_sq) < 1e-8 * (1.0 + e.norm_sq));
    // Data of the truncated solution expand back to the same coefficients.
    CauchyData back;
    back.n = n;
    back.Phi = [f](std::span<const double> x) {
      std::vector<double> c{0.0};
      c.insert(c.end(), x.begin(), x.end());
      return f(c).real();
    };
    back.Psi = [f](std::span<const double> x) {
      std::vector<double> c{0.0};
      c.insert(c.end(), x.begin(), x.end());
      return f.directional(c, 0).d.real();
    };
    const Expansion e2 = expand(back, n, pmax);
    for (std::size_t k = 0; k < e.entries.size(); ++k) CHECK(std::abs(e.entries[k].c - e2.entries[k].c) < 1e-9);
  }

  TEST_CASE("reconstruction of modes") {
    oracle::Rng rng(300);
    for (int n : {2, 3}) {
      for (const ModeIndex& idx : enumerate_modes(n, n + 3)) {
        const Expansion e = expand(CauchyData::from_mode(idx, n), n, n + 5);
        const ModeFunction f = mode(idx, n);
        std::vector<std::vector<double>> pts;
        for (int k = 0; k < 30; ++k) pts.push_back(rng.spacetime(n, 2.0));
        const auto u = reconstruct(e, pts);
        for (std::size_t k = 0; k < pts.size(); ++k) {
          const cplx ref = f(pts[k][0], std::span<const double>(pts[k]).subspan(1));
          CHECK(std::abs(u[k] - ref.real()) < 1e-8);
        }
      }
      // Lowest mode at the origin.
      const ModeFunction low = mode({n - 1, 0, 0}, n);
      const Expansion e = expand(CauchyData::from_mode({n - 1, 0, 0}, n), n, n - 1);
      const auto u = reconstruct(e, {std::vector<double>(n + 1, 0.0)});
      CHECK(u[0] == doctest::Approx(low.norm_constant() / std::sqrt(oracle::sphere_area(n))).epsilon(1e-10));
    }
  }

  TEST_CASE("gaussian reconstruction at t = 0") {
    const int n = 3;
    const Expansion e = expand(CauchyData::gaussian(n), n, 60);
    oracle::Rng rng(310);
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 300; ++k) {
      const auto u = rng.unit(n);
      const double rho = 3.0 * std::cbrt(rng.uniform(0.0, 1.0));
      pts.push_back({0.0, rho * u[0], rho * u[1], rho * u[2]});
    }
    const auto u = reconstruct(e, pts);
    double worst = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      worst = std::max(worst, std::abs(u[k] - std::exp(-r2(std::span<const double>(pts[k]).subspan(1)))));
    }
    CHECK(worst < 1e-4);
  }

  TEST_CASE("decay profile of schwartz data") {
    const Expansion e = expand(CauchyData::gaussian(3), 3, 60);
    const auto prof = decay_profile(e, 6);
    REQUIRE(prof.size() == 7);
    for (const auto& d : prof) CHECK(d.convergent);
    // Partial sums grow with N but stay finite.
    for (std::size_t N = 1; N < prof.size(); ++N) CHECK(prof[N].partial_sums.back() >= prof[N - 1].partial_sums.back());
    const auto shells = e.shells();
    CHECK(shells.back().second < 1e-9 * shells.front().second);
    // Shells oscillate in p; a longer truncation must not flip the verdict.
    for (const auto& d : decay_profile(expand(CauchyData::gaussian(3), 3, 100), 6)) CHECK(d.convergent);
  }

  TEST_CASE("slowly decaying data are rejected") {
    CauchyData d;
    d.n = 3;
    d.Phi = [](std::span<const double>) { return 1.0; };
    d.Psi = [](std::span<const double>) { return 0.0; };
    CHECK_THROWS_AS(expand(d, 3, 8), DecayError);
    d.Phi = [](std::span<const double>) { return 0.0; };
    d.Psi = [](std::span<const double> x) { return std::pow(1.0 + r2(x), -0.25); };
    CHECK_THROWS_AS(expand(d, 3, 8), DecayError);
  }

  TEST_CASE("truncation below the lowest energy") {
    const Expansion e = expand(CauchyData::gaussian(4), 4, 2);
    CHECK(e.entries.empty());
    CHECK_FALSE(e.warnings.empty());
  }

  TEST_CASE("json round trip") {
    const Expansion e = expand(CauchyData::gaussian(2, 0.8, 1.5), 2, 9);
    const Expansion b = Expansion::from_json(e.to_json());
    CHECK(b.n == e.n);
    CHECK(b.m == e.m);
    CHECK(b.p_max == e.p_max);
    REQUIRE(b.entries.size() == e.entries.size());
    for (std::size_t k = 0; k < e.entries.size(); ++k) {
      CHECK(b.entries[k].index == e.entries[k].index);
      CHECK(b.entries[k].c == e.entries[k].c);
    }
    CHECK_THROWS_AS(Expansion::from_json("{not json"), ParameterError);
  }

  TEST_CASE("sampled data on the quadrature nodes") {
    const int n = 2, pmax = 9;
    const auto nodes = expansion_nodes(n, pmax);
    std::vector<double> phi, psi;
    for (const auto& x : nodes) {
      phi.push_back(std::exp(-r2(x)));
      psi.push_back(0.0);
    }
    const CauchyData s = CauchyData::from_samples(n, nodes, phi, psi);
    const Expansion a = expand(s, n, pmax), b = expand(CauchyData::gaussian(n), n, pmax);
    for (std::size_t k = 0; k < a.entries.size(); ++k) CHECK(std::abs(a.entries[k].c - b.entries[k].c) < 1e-12);
    CHECK_THROWS_AS(expand(s, n, pmax + 6), ParameterError);
  }

  TEST_CASE("evolve_compare: zero data") {
    FdGrid g;
    g.h = 0.25;
    g.R = 0.5;
    const EvolveReport rep = evolve_compare(CauchyData::zero(2), 2, 0.5, g, 8);
    for (const auto& l : rep.levels) {
      CHECK(l.sup_vs_spectral == 0.0);
      CHECK(l.sup_vs_exact == 0.0);
    }
  }

  TEST_CASE("evolve_compare: mode data converge at second order") {
    FdGrid g;
    g.h = 0.2;
    g.R = 0.5;
    const EvolveReport rep = evolve_compare(CauchyData::from_mode({3, 1, 0}, 2), 2, 0.5, g, 5);
    REQUIRE(rep.levels.size() == 3);
    CHECK(rep.spectral_vs_exact < 1e-8);
    const double o1 = std::log2(rep.levels[0].sup_vs_exact / rep.levels[1].sup_vs_exact);
    const double o2 = std::log2(rep.levels[1].sup_vs_exact / rep.levels[2].sup_vs_exact);
    CHECK(o1 > 1.7);
    CHECK(o2 > 1.7);
    CHECK(rep.self_convergence_order == doctest::Approx(2.0).epsilon(0.15));
    CHECK(rep.fd_dominated);
  }

  TEST_CASE("evolve_compare configuration errors") {
    FdGrid g;
    g.cfl = 0.9;
    CHECK_THROWS_AS(evolve_compare(CauchyData::gaussian(2), 2, 0.5, g, 8), ConfigError);
    g.cfl = 0.5;
    CHECK_THROWS_AS(evolve_compare(CauchyData::gaussian(4), 4, 0.5, g, 8), UnsupportedError);
    CHECK_THROWS_AS(evolve_compare(CauchyData::gaussian(2), 2, -1.0, g, 8), ConfigError);
  }
}
