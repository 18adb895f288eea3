#include <doctest.h>

#include <cmath>
#include <random>

#include "foldcore/errors.hpp"
#include "foldcore/folding.hpp"
#include "foldcore/rational.hpp"
#include "oracles.hpp"

using namespace foldcore;

namespace {

const MapExpr U = MapExpr::u();
const MapExpr V = MapExpr::v();

MapExpr num(double x) { return MapExpr::number(x); }

}  // namespace

TEST_CASE("separable semi-inversions") {
  // f = alpha u / v on the multiplicative group: f1 = alpha u, f2 = 1/v.
  const auto alpha = CoeffSeq::constant(2);
  const SemiInversion h =
      semi_invert_separable(MapExpr::coef(alpha, "alpha") * U, Bijection::reciprocal(), Group::Multiplicative);
  CHECK(h(0, 3, 6) == doctest::Approx(1.0));

  // f = u + 2v on the additive group.
  const SemiInversion h2 = semi_invert_separable(U, Bijection::affine(CoeffSeq::constant(2)), Group::Additive);
  CHECK(h2(0, 1, 5) == doctest::Approx(2.0));

  // f1(n,u) = 0 in the multiplicative case.
  CHECK_THROWS_AS(h(0, 0, 6), SingularError);

  // f2 that is not a bijection.
  CHECK_THROWS_AS(semi_invert_separable(U, Bijection::affine(CoeffSeq::constant(0)), Group::Additive),
                  InvalidParam);
  CHECK_THROWS_AS(semi_invert_separable(V, Bijection::reciprocal(), Group::Additive), InvalidParam);
}

TEST_CASE("linear-fractional semi-inversion") {
  const auto one = CoeffSeq::constant(1);
  const auto zero = CoeffSeq::constant(0);
  // alpha = 1, beta = 0, A = 0
  const SemiInversion h = semi_invert_linear_fractional(one, zero, zero, one);
  CHECK(h(0, 2, 4) == doctest::Approx(0.5));
}

TEST_CASE("semi-inversion identity on catalog atoms") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(0.3, 2.5);
  const auto p = CoeffSeq::periodic({1.5, -0.5});
  const auto q = CoeffSeq::constant(0.7);
  const auto r = CoeffSeq::periodic({0.2, 0.4, -0.3});
  const auto s = CoeffSeq::constant(1.1);
  const std::vector<MapExpr> maps = {
      MapExpr::ratio(p), MapExpr::affine(p, r, q), MapExpr::linear_fractional(p, q, r, s),
      MapExpr::ratio(r).call(0, V, U), MapExpr::affine(r, p, q).call(0, V, U),
      MapExpr::linear_fractional(q, p, s, r).call(0, V, U)};
  for (const MapExpr& f : maps) {
    const auto h = semi_invert_catalog(f);
    REQUIRE(h.has_value());
    for (int k = 0; k < 200; ++k) {
      const std::size_t n = static_cast<std::size_t>(k % 7);
      const double u = pick(rng);
      const double v = pick(rng);
      double w = 0.0, back = 0.0;
      try {
        w = f(n, u, v);
        back = (*h)(n, u, w);
      } catch (const SingularError&) {
        continue;
      }
      CHECK(std::abs(back - v) <= 1e-12 * std::max(1.0, std::abs(v)));
    }
  }
  CHECK_FALSE(semi_invert_catalog(U * V).has_value());
}

TEST_CASE("passive period follows the coefficients") {
  CHECK(SemiInversion(MapExpr::ratio(CoeffSeq::periodic({1, -1}))).period() == 2);
  CHECK(SemiInversion(MapExpr::ratio(CoeffSeq::constant(3))).period() == 1);
  const auto conv = CoeffSeq::convergent(CoeffSeq::periodic({1, 2, 3}), 0, 0.5);
  CHECK(SemiInversion(MapExpr::ratio(conv)).period() == 3);
}

TEST_CASE("fold: identity first map gives back the core") {
  const MapExpr phi0 = num(0.5) * U - V.pow(2) + MapExpr::coef(CoeffSeq::periodic({1, 2}), "c");
  const Folding fo = fold(V, phi0, SemiInversion(V));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pick(-2, 2);
  for (int k = 0; k < 50; ++k) {
    const double u = pick(rng), w = pick(rng);
    CHECK(fo.core.next(k, u, w) == doctest::Approx(phi0(k, u, w)).epsilon(1e-14));
  }
}

TEST_CASE("fold: system (rhsc) under the quadratic reduction") {
  const double a = -1, b = 3.5;
  CatalogSystem sys;
  sys.id = CatalogId::RHSC;
  sys.a = a;
  sys.b = b;
  sys.alpha = CoeffSeq::periodic({1, 2, -0.5});
  const auto [f, g] = catalog_maps(sys);
  const auto h = semi_invert_catalog(f);
  REQUIRE(h.has_value());
  const Folding fo = fold(f, g, *h);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pick(0.2, 3.0);
  double worst = 0.0;
  int evaluated = 0;
  while (evaluated < 50) {
    const std::size_t n = rng() % 12;
    const double u = pick(rng), w = pick(rng);
    double got = 0.0;
    try {
      got = fo.core.next(n, u, w);
    } catch (const SingularError&) {
      continue;
    }
    worst = std::max(worst, std::abs(got - oracle::quad(a, b, w)));
    ++evaluated;
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("fold_semilinear") {
  // f = u + v, g = u: core w + u
  const auto one = CoeffSeq::constant(1);
  const auto zero = CoeffSeq::constant(0);
  const Folding fo = fold_semilinear(one, one, zero, U);
  CHECK(fo.core.next(0, 2, 3) == doctest::Approx(5));

  // a=0, b=1, c=0, g=u+v: Fibonacci
  const Folding fib = fold_semilinear(zero, one, zero, U + V);
  const CoreRun run = iterate_core(fib.core, 1, 1.0, 4);
  REQUIRE(run.values.size() == 6);
  CHECK(run.values[5] == 8);

  // a=1, b=2, c=0, g=0: s_{n+2} = s_{n+1}
  const Folding flat = fold_semilinear(one, CoeffSeq::constant(2), zero, num(0));
  const CoreRun tail = iterate_core(flat.core, 0.3, 1.7, 5);
  for (std::size_t k = 1; k < tail.values.size(); ++k) CHECK(tail.values[k] == 1.7);

  // a=0, b=1, c=(0,1,0,1,...), g=-u: s_2 = c_1 - s_0
  const auto c = CoeffSeq::periodic({0, 1});
  const Folding forced = fold_semilinear(zero, one, c, -U);
  CHECK(forced.core.next(0, 0, 0) == 1);
  // Cross-check against the system's x-components.
  const SystemSpec sys = SystemSpec::from_maps(MapExpr::affine(zero, one, c), -U);
  const Orbit orbit = iterate_system(sys, {0.4, -0.2}, 20);
  const CoreRun core = solve_core(forced, {0.4, -0.2}, 19);
  for (std::size_t k = 0; k < orbit.points.size(); ++k) {
    CHECK(core.values[k] == doctest::Approx(orbit.points[k].x).epsilon(1e-14));
  }

  CHECK_THROWS_WITH_AS(fold_semilinear(one, CoeffSeq::with_prefix({1, 1, 0}, one), zero, U),
                       doctest::Contains("b_n must be a unit"), InvalidParam);
}

TEST_CASE("reconstruct_orbit") {
  const auto one = CoeffSeq::constant(1);
  const Folding fo{MapExpr::ratio(one), ScalarCore::first_order(U), SemiInversion(MapExpr::ratio(one))};
  const std::vector<double> s = {2, 4, 8};
  const Orbit o = reconstruct_orbit(fo, s);
  REQUIRE(o.points.size() == 2);
  CHECK(o.points[0] == Point{2, 0.5});
  CHECK(o.points[1] == Point{4, 0.5});
  CHECK(o.provenance == Provenance::Reconstructed);
  CHECK_THROWS_AS(reconstruct_orbit(fo, std::vector<double>{1}), InvalidParam);

  const std::vector<double> hits_zero = {2, 4, 0, 1};
  const Orbit cut = reconstruct_orbit(fo, hits_zero);
  CHECK(cut.status == OrbitStatus::Singular);
  CHECK(cut.points.size() == 1);
}

TEST_CASE("reconstructed y stays under the bound after transient") {
  const double a = -1, b = 3.5;
  CatalogSystem sys;
  sys.a = a;
  sys.b = b;
  const Folding fo = catalog_folding(sys);
  const CoreRun core = solve_core(fo, {0.7, 1.0}, 3000);
  const Orbit o = reconstruct_orbit(fo, core.values);
  const double bound = 16.0 / (b * b * (4 - b));
  for (std::size_t n = 1000; n < o.points.size(); ++n) CHECK(std::abs(o.points[n].y) <= bound);
}

TEST_CASE("unfold_general") {
  const MapExpr phi = num(0.3) * U.pow(2) - V + num(1);
  // f = v: g = phi
  const MapExpr g0 = unfold_general(V, SemiInversion(V), phi);
  CHECK(g0(2, 0.4, 1.3) == doctest::Approx(phi(2, 0.4, 1.3)));

  // f = alpha u/v, phi = a u + b w + c against system (lna)
  const auto two = CoeffSeq::constant(2);
  const MapExpr f = MapExpr::ratio(two);
  const SemiInversion h(MapExpr::ratio(two));
  const MapExpr g = unfold_general(f, h, U + V);
  CHECK(g(0, 1, 2) == doctest::Approx(1.0));

  // round trip on 100 points
  const auto alpha = CoeffSeq::periodic({1.2, -0.8});
  const MapExpr fa = MapExpr::ratio(alpha);
  const SemiInversion ha(MapExpr::ratio(alpha));
  const MapExpr target = num(0.4) * U + num(-0.7) * V * V + num(0.1);
  const Folding back = fold(fa, unfold_general(fa, ha, target), ha);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pick(0.3, 2.0);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const double u = pick(rng), w = pick(rng);
    try {
      const double want = target(k, u, w);
      worst = std::max(worst, std::abs(back.core.next(k, u, w) - want) / std::max(1.0, std::abs(want)));
    } catch (const SingularError&) {
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("unfold_order1") {
  const double a = -1, b = 3.5;
  const auto one = CoeffSeq::constant(1);
  const MapExpr f = MapExpr::ratio(one);
  const SemiInversion h(MapExpr::ratio(one));
  const MapExpr g = unfold_order1(f, h, num(a) * U.pow(2) + num(b) * U);
  CHECK(g(0, 1, 2) == doctest::Approx(1.0 / 3.0));

  CHECK(unfold_order1(V, SemiInversion(V), U)(0, 0.3, 0.9) == doctest::Approx(0.9));

  const auto alpha = CoeffSeq::periodic({1, 2, 0.5});
  const MapExpr fa = MapExpr::ratio(alpha);
  const SemiInversion ha(MapExpr::ratio(alpha));
  const MapExpr phi = num(-1) * U.pow(2) + num(3.2) * U;
  const Folding back = fold(fa, unfold_order1(fa, ha, phi), ha);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pick(0.3, 2.5);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const double u = pick(rng), w = pick(rng);
    try {
      worst = std::max(worst, std::abs(back.core.next(k, u, w) - phi(k, w, 0)));
    } catch (const SingularError&) {
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("unfold_skip") {
  const auto one = CoeffSeq::constant(1);
  const MapExpr f = MapExpr::ratio(one);
  const SemiInversion h(MapExpr::ratio(one));
  const MapExpr g = unfold_skip(f, h, num(-1) * U.pow(2) + num(3) * U);
  CHECK(g(0, 1, 2) == doctest::Approx(0.25));

  const MapExpr phi = num(-1) * U.pow(2) + num(3.2) * U;
  const Folding skip{f, ScalarCore::second_order(phi), h};
  const CoreRun run = iterate_core(skip.core, 0.3, 0.7, 2);
  CHECK(run.values[2] == oracle::quad(-1, 3.2, 0.3));
  CHECK(run.values[3] == oracle::quad(-1, 3.2, 0.7));

  const Folding back = fold(f, g, h);
  for (int k = 0; k < 100; ++k) {
    const double u = 0.3 + 0.02 * k, w = 2.0 - 0.015 * k;
    CHECK(back.core.next(k, u, w) == doctest::Approx(oracle::quad(-1, 3, u)).epsilon(1e-12));
  }
}

TEST_CASE("unfold_affine") {
  const double a = 0.7, b = -0.4, c = 0.9;
  const auto alpha = CoeffSeq::periodic({1.5, -1});
  const MapExpr f = MapExpr::ratio(alpha);
  const SemiInversion h(MapExpr::ratio(alpha));
  const MapExpr g = unfold_affine(f, h, a, b, c);
  for (int k = 0; k < 20; ++k) {
    const double x = 0.4 + 0.1 * k, y = 1.7 - 0.05 * k;
    const double an = alpha(k), an1 = alpha(k + 1);
    const double lna = an * an1 * x / (an * b * x + (a * x + c) * y);
    CHECK(g(k, x, y) == doctest::Approx(lna).epsilon(1e-12));
  }

  // a = 0 with constant alpha: beta x/(x + gamma y), beta = alpha/b, gamma = c/(alpha b)
  const double al = 2.0, bb = 0.5, cc = 1.0;
  const auto const_alpha = CoeffSeq::constant(al);
  const MapExpr g0 = unfold_affine(MapExpr::ratio(const_alpha), SemiInversion(MapExpr::ratio(const_alpha)), 0, bb, cc);
  const double beta = al / bb, gamma = cc / (al * bb);
  CHECK(g0(0, 1.3, 0.6) == doctest::Approx(beta * 1.3 / (1.3 + gamma * 0.6)).epsilon(1e-12));

  CHECK_THROWS_AS(unfold_affine(f, h, 0, 0, 1), InvalidParam);
}

TEST_CASE("check_fold_consistency") {
  CatalogSystem sys;
  sys.a = -1;
  sys.b = 2.5;
  const auto spec = catalog_spec(sys);
  const auto fo = catalog_folding(sys);
  const auto ok = check_fold_consistency(spec, fo, {1, 2}, 100, 1e-9);
  CHECK(ok.pass);
  CHECK(ok.max_diff < 1e-9);
  CHECK(ok.early_stop.empty());

  sys.b = 3.9;
  const auto chaotic = check_fold_consistency(catalog_spec(sys), catalog_folding(sys), {0.7, 1}, 30, 1e-6);
  CHECK(chaotic.pass);

  // x_1 = beta_0 makes the passive denominator vanish.
  CatalogSystem rh;
  rh.id = CatalogId::RH;
  rh.rh.beta = CoeffSeq::constant(0.5);
  const auto stop = check_fold_consistency(catalog_spec(rh), catalog_folding(rh), {0.0, 1.0}, 10, 1e-9);
  CHECK_FALSE(stop.pass);
  CHECK(stop.early_stop.find("reconstructed") != std::string::npos);
  CHECK(stop.reconstructed.status == OrbitStatus::Singular);
}
