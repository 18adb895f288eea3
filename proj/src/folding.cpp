#include "foldcore/folding.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "foldcore/errors.hpp"

namespace foldcore {

namespace {

using Kind = MapExpr::Kind;

MapExpr named(const CoeffSeq& seq, const std::string& label, std::size_t shift = 0) {
  return MapExpr::coef(seq, label, shift);
}

// Coefficients scanned when checking that b_n is a unit.
constexpr std::size_t kUnitScan = 4096;

void spot_check_bijection(const Bijection& f2, Group group) {
  constexpr std::array<double, 4> probes{-2.5, -0.7, 0.3, 1.9};
  for (std::size_t n = 0; n < 8; ++n) {
    for (double v : probes) {
      double back = 0.0;
      try {
        const double w = f2.forward().eval(n, v, 0.0);
        back = f2.inverse().eval(n, w, 0.0);
      } catch (const SingularError&) {
        throw InvalidParam("f2 is not a bijection at n=" + std::to_string(n));
      }
      if (!(std::abs(back - v) <= 1e-9 * std::max(1.0, std::abs(v)))) {
        throw InvalidParam("f2 is not a bijection at n=" + std::to_string(n));
      }
      if (group == Group::Multiplicative && f2.forward().eval(n, v, 0.0) == 0.0) {
        throw InvalidParam("f2 leaves the multiplicative carrier");
      }
    }
  }
}

}  // namespace

Bijection Bijection::affine(CoeffSeq scale, CoeffSeq offset) {
  const MapExpr x = MapExpr::u();
  const MapExpr k = named(scale, "k");
  const MapExpr c = named(offset, "d");
  return Bijection(k * x + c, (x - c) / k);
}

Bijection Bijection::reciprocal(CoeffSeq scale) {
  const MapExpr e = named(scale, "k") / MapExpr::u();
  return Bijection(e, e);
}

SemiInversion::SemiInversion(MapExpr h) : h_(std::move(h)), period_(h_.coefficient_period()) {}

bool SemiInversion::valid_at(std::size_t n, double u, double w, double tol) const {
  try {
    return std::isfinite(h_.eval(n, u, w, tol));
  } catch (const SingularError&) {
    return false;
  }
}

MapExpr separable_map(const MapExpr& f1, const Bijection& f2, Group group) {
  const MapExpr second = f2.forward().call(0, MapExpr::v(), MapExpr::number(0.0));
  return group == Group::Additive ? f1 + second : f1 * second;
}

SemiInversion semi_invert_separable(const MapExpr& f1, const Bijection& f2, Group group) {
  if (f1.depends_on(1)) throw InvalidParam("f1 must depend on u only");
  spot_check_bijection(f2, group);
  const MapExpr w = MapExpr::v();
  const MapExpr inner = group == Group::Additive ? w - f1 : w / f1;
  return SemiInversion(f2.inverse().call(0, inner, MapExpr::number(0.0)));
}

SemiInversion semi_invert_linear_fractional(const CoeffSeq& p, const CoeffSeq& q,
                                            const CoeffSeq& r, const CoeffSeq& s) {
  const MapExpr u = MapExpr::u();
  const MapExpr w = MapExpr::v();
  return SemiInversion(u * (named(p, "p") - named(r, "r") * w) /
                       (named(s, "s") * w - named(q, "q")));
}

std::optional<SemiInversion> semi_invert_catalog(const MapExpr& f) {
  const MapExpr u = MapExpr::u();
  const MapExpr w = MapExpr::v();
  switch (f.kind()) {
    case Kind::Ratio:
      return SemiInversion(MapExpr::ratio(f.coefs()[0]));
    case Kind::Affine: {
      const auto& c = f.coefs();
      return SemiInversion((w - named(c[0], "a") * u - named(c[2], "c")) / named(c[1], "b"));
    }
    case Kind::LinFrac: {
      const auto& c = f.coefs();
      return semi_invert_linear_fractional(c[0], c[1], c[2], c[3]);
    }
    case Kind::Call:
      break;
    default:
      return std::nullopt;
  }

  // f(n,u,v) = atom(n, v, u): solve the atom for its first argument.
  const auto& ch = f.children();
  const bool swapped = f.shift() == 0 && ch[1].kind() == Kind::Arg && ch[1].arg_index() == 1 &&
                       ch[2].kind() == Kind::Arg && ch[2].arg_index() == 0;
  if (!swapped) return std::nullopt;
  const MapExpr& atom = ch[0];
  const auto& c = atom.coefs();
  switch (atom.kind()) {
    case Kind::Ratio:
      return SemiInversion(w * u / named(c[0], "alpha"));
    case Kind::Affine:
      return SemiInversion((w - named(c[1], "b") * u - named(c[2], "c")) / named(c[0], "a"));
    case Kind::LinFrac:
      return SemiInversion(u * (named(c[1], "q") - named(c[3], "s") * w) /
                           (named(c[2], "r") * w - named(c[0], "p")));
    default:
      return std::nullopt;
  }
}

Folding fold(const MapExpr& f, const MapExpr& g, const SemiInversion& h) {
  const MapExpr u = MapExpr::u();
  const MapExpr w = MapExpr::v();
  const MapExpr phi = f.call(1, w, g.call(0, u, h.expr()));
  return Folding{f, ScalarCore::second_order(phi), h};
}

Folding fold_semilinear(const CoeffSeq& a, const CoeffSeq& b, const CoeffSeq& c,
                        const MapExpr& g) {
  for (std::size_t n = 0; n < kUnitScan; ++n) {
    if (b.value_at(n) == 0.0) {
      throw InvalidParam("b_n must be a unit (b_" + std::to_string(n) + " = 0)");
    }
  }
  const MapExpr u = MapExpr::u();
  const MapExpr w = MapExpr::v();
  const SemiInversion h((w - named(a, "a") * u - named(c, "c")) / named(b, "b"));
  const MapExpr phi = named(c, "c", 1) + named(a, "a", 1) * w +
                      named(b, "b", 1) * g.call(0, u, h.expr());
  return Folding{MapExpr::affine(a, b, c), ScalarCore::second_order(phi), h};
}

CoreRun solve_core(const Folding& folding, Point init, std::size_t steps,
                   const NumericPolicy& policy) {
  double s1 = 0.0;
  try {
    s1 = folding.f.eval(0, init.x, init.y, policy.singular_rel_tol);
  } catch (const SingularError& e) {
    CoreRun run;
    run.values = {init.x};
    run.status = OrbitStatus::Singular;
    run.detail = e.denominator();
    return run;
  }
  if (folding.core.order() == 2) return iterate_core(folding.core, init.x, s1, steps, policy);

  CoreRun run = iterate_core(folding.core, s1, std::nullopt, steps, policy);
  run.values.insert(run.values.begin(), init.x);
  if (run.status != OrbitStatus::Completed) ++run.stop_index;
  return run;
}

Orbit reconstruct_orbit(const Folding& folding, std::span<const double> s,
                        const NumericPolicy& policy) {
  if (s.size() < 2) throw InvalidParam("core solution needs at least two values");
  Orbit orbit;
  orbit.provenance = Provenance::Reconstructed;
  orbit.points.reserve(s.size() - 1);
  for (std::size_t n = 0; n + 1 < s.size(); ++n) {
    Point p{s[n], 0.0};
    try {
      p.y = folding.passive(n, s[n], s[n + 1], policy.singular_rel_tol);
    } catch (const SingularError& e) {
      orbit.status = OrbitStatus::Singular;
      orbit.stop_index = n;
      orbit.detail = e.denominator();
      return orbit;
    }
    if (exceeds(p, policy.overflow)) {
      orbit.status = OrbitStatus::Overflow;
      orbit.stop_index = n;
      orbit.detail = "|x| or |y| exceeded " + format_real(policy.overflow);
      return orbit;
    }
    orbit.points.push_back(p);
  }
  return orbit;
}

MapExpr unfold_general(const MapExpr& f, const SemiInversion& h, const MapExpr& phi) {
  return h.expr().call(1, f, phi.call(0, MapExpr::u(), f));
}

MapExpr unfold_order1(const MapExpr& f, const SemiInversion& h, const MapExpr& phi) {
  return h.expr().call(1, f, phi.call(0, f, MapExpr::number(0.0)));
}

MapExpr unfold_skip(const MapExpr& f, const SemiInversion& h, const MapExpr& phi) {
  return h.expr().call(1, f, phi.call(0, MapExpr::u(), MapExpr::number(0.0)));
}

MapExpr unfold_affine(const MapExpr& f, const SemiInversion& h, double a, double b, double c) {
  if (a == 0.0 && b == 0.0) throw InvalidParam("affine core needs |a| + |b| > 0");
  const MapExpr phi = MapExpr::number(a) * MapExpr::u() + MapExpr::number(b) * MapExpr::v() +
                      MapExpr::number(c);
  return unfold_general(f, h, phi);
}

ConsistencyReport check_fold_consistency(const SystemSpec& system, const Folding& folding,
                                         Point init, std::size_t steps, double tol,
                                         const NumericPolicy& policy) {
  ConsistencyReport report;
  report.steps = steps;
  report.direct = iterate_system(system, init, steps, policy);
  const CoreRun core = solve_core(folding, init, steps, policy);
  if (core.values.size() >= 2) {
    report.reconstructed = reconstruct_orbit(folding, core.values, policy);
  } else {
    report.reconstructed.provenance = Provenance::Reconstructed;
    report.reconstructed.status = core.status;
    report.reconstructed.detail = core.detail;
  }
  if (report.reconstructed.status == OrbitStatus::Completed &&
      core.status != OrbitStatus::Completed) {
    report.reconstructed.status = core.status;
    report.reconstructed.stop_index = core.stop_index;
    report.reconstructed.detail = "core: " + core.detail;
  }

  const std::size_t expected = steps + 1;
  const std::size_t common = std::min(report.direct.points.size(),
                                      report.reconstructed.points.size());
  for (std::size_t k = 0; k < common; ++k) {
    const Point& d = report.direct.points[k];
    const Point& r = report.reconstructed.points[k];
    const double diff = std::max(std::abs(d.x - r.x), std::abs(d.y - r.y));
    report.max_diff = std::isnan(diff) ? INFINITY : std::max(report.max_diff, diff);
  }

  auto describe = [](const char* side, const Orbit& o) {
    return std::string(side) + " orbit stopped (" + to_string(o.status) + ") at index " +
           std::to_string(o.stop_index) + (o.detail.empty() ? "" : ": " + o.detail);
  };
  if (report.direct.points.size() < expected) {
    report.early_stop = describe("direct", report.direct);
  }
  if (report.reconstructed.points.size() < expected) {
    if (!report.early_stop.empty()) report.early_stop += "; ";
    report.early_stop += describe("reconstructed", report.reconstructed);
  }
  report.pass = report.early_stop.empty() && report.max_diff < tol;
  return report;
}

}  // namespace foldcore
