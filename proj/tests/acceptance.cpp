// Acceptance runner: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "foldcore/dynamics.hpp"
#include "foldcore/errors.hpp"
#include "foldcore/folding.hpp"
#include "foldcore/orbit.hpp"
#include "foldcore/rational.hpp"
#include "oracles.hpp"

using namespace foldcore;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

CatalogSystem catalog(CatalogId id, double a, double b, double c = 0.0,
                      CoeffSeq alpha = CoeffSeq::constant(1.0)) {
  CatalogSystem s;
  s.id = id;
  s.a = a;
  s.b = b;
  s.c = c;
  s.alpha = std::move(alpha);
  return s;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

// 1. Fold consistency, 25 seeded inits, 100 steps, 1e-9.
Result fold_consistency() {
  struct Case {
    CatalogSystem sys;
    bool quadratic;
  };
  std::vector<Case> cases;
  for (double b : {2.5, 2.8, 3.2}) {
    cases.push_back({catalog(CatalogId::RHSC, -1, b), true});
    cases.push_back({catalog(CatalogId::RNH, -1, b), true});
  }
  cases.push_back({catalog(CatalogId::LNA, -0.5, 0.5, 1.0), false});
  cases.push_back({catalog(CatalogId::LAH, 0.0, 0.5, 1.0), false});

  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  int failures = 0;
  int runs = 0;
  for (const Case& c : cases) {
    const SystemSpec spec = catalog_spec(c.sys);
    const Folding fo = catalog_folding(c.sys);
    const double edge = -c.sys.b / c.sys.a;
    for (int k = 0; k < 25; ++k) {
      Point init;
      if (c.quadratic) {
        std::uniform_real_distribution<double> inside(0.05 * edge, 0.95 * edge);
        const double x0 = inside(rng);
        const double r0 = inside(rng);
        init = {x0, c.sys.alpha(0) * x0 / r0};
      } else {
        std::uniform_real_distribution<double> pick(0.5, 1.5);
        init = {pick(rng), pick(rng)};
      }
      const auto rep = check_fold_consistency(spec, fo, init, 100, 1e-9);
      ++runs;
      if (!rep.pass) ++failures;
      worst = std::max(worst, rep.max_diff);
    }
  }
  return {failures == 0, fmt::format("{} runs, {} failures, max diff {:.3g}", runs, failures, worst)};
}

// 2. Reduction identities at 1000 points each.
Result reduction_identity() {
  std::mt19937_64 rng(7);
  double worst_quad = 0.0;
  const QuadraticCoreParams q{-1.0, 3.5, CoeffSeq::periodic({1.0, -1.0, 2.0})};
  const RationalParams p = q.to_rational(64);
  std::uniform_real_distribution<double> window(0.0, 3.5);
  for (int k = 0; k < 1000; ++k) {
    const double s = window(rng);
    worst_quad = std::max(worst_quad, rel(core_rh(p, k % 12, s), oracle::quad(-1.0, 3.5, s)));
  }

  RationalParams af;
  af.alpha = CoeffSeq::periodic({2.0, -1.5, 0.7});
  af.A = CoeffSeq::constant(0.0);
  af.beta = CoeffSeq::constant(0.0);
  af.beta_p = CoeffSeq::constant(0.0);
  af.alpha_p = CoeffSeq::periodic({1.0, 0.4});
  af.B = CoeffSeq::periodic({0.3, -2.0, 1.1, 0.9});
  std::uniform_real_distribution<double> wide(-5.0, 5.0);
  double worst_affine = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = static_cast<std::size_t>(k % 24);
    const double s = wide(rng);
    const double al = af.alpha(n), al1 = af.alpha(n + 1), alp = af.alpha_p(n), B = af.B(n);
    const double want = (al1 / alp) * s + al1 * al * B / alp;
    worst_affine = std::max(worst_affine, rel(core_rh(af, n, s), want));
  }
  const bool ok = worst_quad < 1e-10 && worst_affine < 1e-10;
  return {ok, fmt::format("quadratic max rel err {:.3g}, affine max rel err {:.3g}", worst_quad, worst_affine)};
}

// 3. Confinement and y-bound over 10^4 steps.
Result confinement() {
  std::mt19937_64 rng(3);
  const std::vector<CoeffSeq> alphas = {CoeffSeq::constant(1.0), CoeffSeq::periodic({1.0, -1.0}),
                                        CoeffSeq::periodic({2.0, -0.5, 1.0})};
  std::size_t x_viol = 0, y_viol = 0, orbits = 0, stopped = 0;
  for (double b : {3.2, 3.5, 3.9}) {
    for (const CoeffSeq& alpha : alphas) {
      const QuadraticCoreParams q{-1.0, b, alpha};
      const double lo = q.mu_mu_max(), hi = q.mu_max();
      double sup_alpha = 0.0;
      for (std::size_t n = 0; n <= 10001; ++n) sup_alpha = std::max(sup_alpha, std::abs(alpha(n)));
      const double ybound = q.y_bound_factor() * sup_alpha;
      std::uniform_real_distribution<double> inv(lo, hi);
      for (int k = 0; k < 5; ++k) {
        const double x0 = inv(rng), r0 = inv(rng);
        const Orbit o = iterate_system(catalog_spec(catalog(CatalogId::RHSC, -1.0, b, 0.0, alpha)),
                                       {x0, alpha(0) * x0 / r0}, 10000);
        ++orbits;
        if (o.status != OrbitStatus::Completed) ++stopped;
        for (std::size_t n = 1; n < o.points.size(); ++n) {
          const Point p = o.points[n];
          if (n >= 2 && (p.x < lo * (1 - 1e-12) || p.x > hi * (1 + 1e-12))) ++x_viol;
          if (std::abs(p.y) > ybound * (1 + 1e-12)) ++y_viol;
        }
      }
    }
  }
  const bool ok = x_viol == 0 && y_viol == 0 && stopped == 0;
  return {ok, fmt::format("{} orbits, x violations {}, y violations {}, early stops {}", orbits, x_viol,
                          y_viol, stopped)};
}

// 4. Period-2 cycle values against the logistic 2-cycle.
Result two_cycle() {
  const double b = 3.2;
  const Orbit o = iterate_system(catalog_spec(catalog(CatalogId::RHSC, -1.0, b)), {0.7, 1.0}, 3000);
  if (o.status != OrbitStatus::Completed) return {false, "orbit stopped early"};
  std::vector<double> xs;
  for (std::size_t n = 2000; n < o.points.size(); ++n) xs.push_back(o.points[n].x);
  const auto cyc = detect_cycle(xs, kCycleTol, kMaxPeriod, 2000);
  if (!cyc) return {false, "no period detected"};
  const double root = std::sqrt((b - 3.0) * (b + 1.0));
  const double r_lo = b * (b + 1.0 - root) / (2.0 * b);
  const double r_hi = b * (b + 1.0 + root) / (2.0 * b);
  std::vector<double> v = cyc->cycle;
  std::sort(v.begin(), v.end());
  const double err = v.size() == 2 ? std::max(std::abs(v[0] - r_lo), std::abs(v[1] - r_hi)) : INFINITY;
  return {cyc->period == 2 && err < 1e-6,
          fmt::format("period {}, cycle {{{:.10f}, {:.10f}}}, max err {:.3g}", cyc->period, r_lo, r_hi, err)};
}

// 5. lcm law over the 9 combinations.
Result lcm_law() {
  const std::vector<CoeffSeq> alphas = {CoeffSeq::constant(1.0), CoeffSeq::periodic({1.0, -1.0}),
                                        CoeffSeq::periodic({1.0, 2.0, 0.5})};
  const std::vector<std::pair<double, std::size_t>> cores = {{2.5, 1}, {3.2, 2}, {3.5, 4}};
  std::string periods;
  int bad = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (const auto& [b, qc] : cores) {
      const std::size_t want = std::lcm(i + 1, qc);
      const Orbit o = iterate_system(catalog_spec(catalog(CatalogId::RHSC, -1.0, b, 0.0, alphas[i])),
                                     {0.7, 1.0}, 4000);
      std::size_t got = 0;
      if (o.status == OrbitStatus::Completed) {
        const auto cyc = detect_cycle(std::span<const Point>(o.points).subspan(2000));
        if (cyc) got = cyc->period;
      }
      if (got != want) ++bad;
      periods += fmt::format("{}(p={},q={}) ", got, i + 1, qc);
    }
  }
  return {bad == 0, fmt::format("observed {}", periods)};
}

// 6. alpha -> 0 geometrically: y -> 0, x chaotic in the window.
Result x_axis_limit() {
  const double b = 3.9;
  const auto alpha = CoeffSeq::convergent(CoeffSeq::constant(0.0), 1.0, 0.998);
  const Orbit o = iterate_system(catalog_spec(catalog(CatalogId::RHSC, -1.0, b, 0.0, alpha)), {0.7, 1.0}, 10000);
  if (o.status != OrbitStatus::Completed) return {false, "orbit stopped: " + o.detail};
  double ymax = 0.0;
  bool in_window = true;
  std::vector<double> xs;
  for (std::size_t n = o.points.size() - 1000; n < o.points.size(); ++n) ymax = std::max(ymax, std::abs(o.points[n].y));
  for (std::size_t n = 1; n < o.points.size(); ++n) in_window = in_window && o.points[n].x > 0 && o.points[n].x < b;
  for (std::size_t n = 1000; n < o.points.size(); ++n) xs.push_back(o.points[n].x);
  const bool periodic = detect_cycle(xs).has_value();
  return {ymax < 1e-3 && in_window && !periodic,
          fmt::format("max |y| over last 1000: {:.3g}, x in window: {}, period <= 64 found: {}", ymax, in_window, periodic)};
}

// 7. Chaos proxies at b = 3.9.
Result chaos() {
  const QuadraticCoreParams q{-1.0, 3.9, CoeffSeq::constant(1.0)};
  const double lyap = lyapunov_core(q, 0.7, 1000, 100000);
  std::vector<double> r{0.7};
  for (int k = 0; k < 2000; ++k) r.push_back(oracle::quad(-1.0, 3.9, r.back()));
  const bool periodic = detect_cycle(std::span<const double>(r).subspan(1000)).has_value();
  const ScalarCore core = ScalarCore::first_order(MapExpr::number(-1.0) * MapExpr::u().pow(2) +
                                                  MapExpr::number(3.9) * MapExpr::u());
  const auto pair = sensitive_pair_stat(core, 0.7, 1e-10, 1000);
  const bool ok = std::abs(lyap - 0.49) <= 0.05 && !periodic && pair.max_sep > 0.1;
  return {ok, fmt::format("lyapunov {:.4f}, period found: {}, max_sep {:.3g}", lyap, periodic, pair.max_sep)};
}

// 8. Off-window initial points overflow within 500 steps.
Result off_window() {
  std::mt19937_64 rng(11);
  const std::vector<double> bs = {3.2, 3.5, 3.9};
  int overflowed = 0;
  std::size_t latest = 0;
  for (int k = 0; k < 20; ++k) {
    const double b = bs[k % 3];
    const double edge = b;  // -b/a with a = -1
    std::uniform_real_distribution<double> side(0.0, 1.0), span(1e-3, 3.0);
    const double r0 = side(rng) < 0.5 ? -span(rng) : edge + span(rng);
    const Orbit o = iterate_system(catalog_spec(catalog(CatalogId::RHSC, -1.0, b)), {r0, 1.0}, 500);
    if (o.status == OrbitStatus::Overflow) {
      ++overflowed;
      latest = std::max(latest, o.stop_index);
    }
  }
  return {overflowed == 20, fmt::format("{}/20 overflowed, latest at step {}", overflowed, latest)};
}

// 9. The exceptional orbit (0, alpha_{n+1}/b).
Result exceptional_orbit() {
  const Orbit o = iterate_system(catalog_spec(catalog(CatalogId::RHSC, -1.0, 3.5)), {0.0, 0.6}, 1000);
  double err = 0.0;
  bool x_zero = o.status == OrbitStatus::Completed;
  for (std::size_t n = 1; n < o.points.size(); ++n) {
    x_zero = x_zero && o.points[n].x == 0.0;
    err = std::max(err, std::abs(o.points[n].y - 1.0 / 3.5));
  }

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> inside(0.05, 0.75);
  double tail = 0.0;
  bool completed = true;
  for (int k = 0; k < 10; ++k) {
    const double x0 = inside(rng), r0 = inside(rng);
    const Orbit a = iterate_system(catalog_spec(catalog(CatalogId::RHSC, -1.0, 0.8)), {x0, x0 / r0}, 10000);
    completed = completed && a.status == OrbitStatus::Completed;
    for (std::size_t n = a.points.size() - 1000; n < a.points.size(); ++n) {
      tail = std::max(tail, std::hypot(a.points[n].x, a.points[n].y - 1.0 / 0.8));
    }
  }
  const bool ok = x_zero && err <= 1e-15 && completed && tail < 1e-9;
  return {ok, fmt::format("b=3.5 max |y - 1/3.5| {:.3g}, x identically 0: {}; b=0.8 distance over last 1000 steps {:.3g}",
                          err, x_zero, tail)};
}

// 10. Unfold round trips and the displayed systems.
Result unfold_round_trips() {
  const auto alpha = CoeffSeq::periodic({1.3, -0.7, 2.0});
  const MapExpr f = MapExpr::ratio(alpha);
  const SemiInversion h(MapExpr::ratio(alpha));
  const MapExpr U = MapExpr::u(), W = MapExpr::v();
  const double a = -1.0, b = 3.3, c = 0.6;
  const MapExpr quad = MapExpr::number(a) * U.pow(2) + MapExpr::number(b) * U;

  struct Case {
    const char* name;
    MapExpr g;
    std::function<double(std::size_t, double, double)> phi;
    std::function<double(std::size_t, double, double)> displayed;
  };
  const auto al = [&](std::size_t n) { return alpha(n); };
  std::vector<Case> cases = {
      {"order-1/rhsc", unfold_order1(f, h, quad), [&](std::size_t, double, double w) { return oracle::quad(a, b, w); },
       [&](std::size_t n, double x, double y) { return oracle::rhsc(a, b, al, n, x, y).second; }},
      {"skip/rnh", unfold_skip(f, h, quad), [&](std::size_t, double u, double) { return oracle::quad(a, b, u); },
       [&](std::size_t n, double x, double y) { return al(n) * al(n + 1) / ((a * x + b) * y); }},
      {"affine/lna", unfold_affine(f, h, 0.4, -0.9, c),
       [&](std::size_t, double u, double w) { return 0.4 * u - 0.9 * w + c; },
       [&](std::size_t n, double x, double y) { return al(n) * al(n + 1) * x / (al(n) * -0.9 * x + (0.4 * x + c) * y); }},
  };
  const auto const_alpha = CoeffSeq::constant(1.6);
  const MapExpr fc = MapExpr::ratio(const_alpha);
  const SemiInversion hc(MapExpr::ratio(const_alpha));
  const double bl = 0.7, cl = 1.2;
  const GreekParams lah = greek_view(catalog(CatalogId::LAH, 0.0, bl, cl, const_alpha));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pick(0.3, 2.5);
  double worst_phi = 0.0, worst_g = 0.0;
  int evaluated = 0;
  auto record = [&](const MapExpr& fmap, const SemiInversion& hmap, const MapExpr& g,
                    const std::function<double(std::size_t, double, double)>& phi,
                    const std::function<double(std::size_t, double, double)>& shown) {
    const Folding back = fold(fmap, g, hmap);
    int done = 0;
    while (done < 100) {
      const std::size_t n = rng() % 9;
      const double u = pick(rng), w = pick(rng);
      try {
        worst_phi = std::max(worst_phi, rel(back.core.next(n, u, w), phi(n, u, w)));
        worst_g = std::max(worst_g, rel(g(n, u, w), shown(n, u, w)));
      } catch (const SingularError&) {
        continue;
      }
      ++done;
      ++evaluated;
    }
  };
  for (const Case& cs : cases) record(f, h, cs.g, cs.phi, cs.displayed);
  record(fc, hc, unfold_affine(fc, hc, 0.0, bl, cl), [&](std::size_t, double, double w) { return bl * w + cl; },
         [&](std::size_t, double x, double y) { return lah.beta * x / (x + lah.gamma * y); });

  const bool ok = worst_phi < 1e-12 && worst_g < 1e-12;
  return {ok, fmt::format("{} points, phi max rel err {:.3g}, g vs displayed systems {:.3g}", evaluated, worst_phi,
                          worst_g)};
}

// 11. Bifurcation sweep.
Result sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = bifurcation_sweep(SweepOptions{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double onset = NAN;
  for (const auto& r : rows) {
    if (r.lyapunov > 0.0) {
      onset = r.b;
      break;
    }
  }
  std::vector<double> p3;
  for (const auto& r : rows) {
    if (r.period == 3u && r.b > 3.83 && r.b < 3.86) p3.push_back(r.b);
  }
  const bool ok = rows.size() == 600 && std::abs(onset - 3.57) <= 0.02 && !p3.empty() && secs < 30.0;
  return {ok, fmt::format("{} rows, lyapunov onset b={:.3f}, period-3 rows in (3.83,3.86): {}{}, {:.2f} s", rows.size(),
                          onset, p3.size(), p3.empty() ? "" : fmt::format(" from b={:.3f}", p3.front()), secs)};
}

// 12. Affine systems are never chaotic; closed form vs iteration.
Result affine_no_chaos() {
  const std::vector<Point> inits = {{0.7, 1.0}, {1.3, 0.6}, {0.4, 2.0}, {2.0, 1.1}, {0.9, 0.3}};
  int chaotic = 0, classified = 0, errors = 0;
  auto classify = [&](const CatalogSystem& s) {
    for (const Point& p : inits) {
      try {
        const auto rep = classify_affine(s, p);
        ++classified;
        if (rep.predicted.kind == Outcome::Kind::Chaotic || rep.observed.kind == Outcome::Kind::Chaotic) ++chaotic;
      } catch (const Error&) {
        ++errors;
      }
    }
  };
  for (double b : {-1.2, -0.6, 0.4, 0.9, 1.1}) {
    for (double c : {0.5, 1.5}) classify(catalog(CatalogId::LAH, 0.0, b, c));
  }
  for (double a : {-1.2, -0.5, 0.3, 0.8, 1.1}) {
    for (double c : {0.5, 1.5}) classify(catalog(CatalogId::LNH, a, 0.0, c));
  }

  double worst = 0.0;
  for (double a : {-0.9, -0.25, 0.0, 0.5, 1.1}) {
    for (double b : {-0.7, 0.0, 0.5, 1.0, 2.0}) {
      if (a == 0.0 && b == 0.0) continue;
      for (double c : {0.0, 1.0}) {
        const auto ref = oracle::affine_iterate(a, b, c, 0.7, 1.3, 51);
        for (std::size_t n = 0; n < ref.size(); ++n) {
          worst = std::max(worst, rel(affine_core_closed_form(a, b, c, 0.7, 1.3, n), ref[n]));
        }
      }
    }
  }
  const bool ok = chaotic == 0 && classified + errors == 100 && worst < 1e-9;
  return {ok, fmt::format("{} classified ({} rejected), {} chaotic; closed form max rel err {:.3g}", classified, errors,
                          chaotic, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"fold consistency", fold_consistency},
      {"reduction identity", reduction_identity},
      {"window confinement and y-bound", confinement},
      {"period-2 cycle values", two_cycle},
      {"lcm(p,q) periods", lcm_law},
      {"x-axis limit", x_axis_limit},
      {"chaos proxies", chaos},
      {"off-window overflow", off_window},
      {"exceptional orbit", exceptional_orbit},
      {"unfold round trips", unfold_round_trips},
      {"bifurcation sweep", sweep},
      {"affine no-chaos", affine_no_chaos},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = (i != 0 || ms < 5000.0) && (i != 1 || ms < 1000.0);
    const bool pass = r.pass && in_time;
    if (!pass) ++failed;
    fmt::print("[{}] criterion {:2}: {} - {} ({:.0f} ms)\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               r.detail, ms);
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
