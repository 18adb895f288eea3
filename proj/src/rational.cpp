#include "foldcore/rational.hpp"

#include <cmath>
#include <variant>
#include <vector>

#include "foldcore/errors.hpp"

namespace foldcore {

namespace {

MapExpr coef(const CoeffSeq& seq, const char* label, std::size_t shift = 0) {
  return MapExpr::coef(seq, label, shift);
}

MapExpr num(double value) { return MapExpr::number(value); }

void require_nonzero_alpha(const CoeffSeq& alpha, std::size_t horizon) {
  for (std::size_t n = 0; n <= horizon; ++n) {
    if (alpha(n) == 0.0) throw InvalidParam("alpha_n must be nonzero (alpha_" + std::to_string(n) + " = 0)");
  }
}

void require_constant_alpha(const CatalogSystem& s) {
  if (!s.alpha.is_constant()) {
    throw InvalidParam(to_string(s.id) + " is autonomous: alpha must be constant");
  }
  if (s.alpha(0) == 0.0) throw InvalidParam("alpha must be nonzero");
}

bool is_periodic_like(const CoeffSeq& seq) {
  return std::holds_alternative<CoeffSeq::Constant>(seq.repr()) ||
         std::holds_alternative<CoeffSeq::Periodic>(seq.repr());
}

}  // namespace

void QuadraticCoreParams::validate(std::size_t horizon) const {
  if (a == 0.0) throw InvalidParam("quadratic core needs a != 0");
  require_nonzero_alpha(alpha, horizon);
}

RationalParams QuadraticCoreParams::to_rational(std::size_t horizon) const {
  RationalParams p;
  p.alpha = alpha;
  p.beta = CoeffSeq::constant(0.0);
  p.A = CoeffSeq::constant(0.0);
  p.alpha_p = CoeffSeq::constant(0.0);

  if (is_periodic_like(alpha)) {
    const std::size_t period = alpha.eventual_structure().period;
    std::vector<double> bp(period);
    std::vector<double> bb(period);
    for (std::size_t n = 0; n < period; ++n) {
      bp[n] = beta_p(n);
      bb[n] = B(n);
    }
    p.beta_p = CoeffSeq::periodic(std::move(bp));
    p.B = CoeffSeq::periodic(std::move(bb));
    return p;
  }

  // Non-periodic alpha: explicit prefix, then the values implied by the limit.
  const EventualStructure tail = alpha.eventual_structure();
  std::vector<double> bp(horizon);
  std::vector<double> bb(horizon);
  for (std::size_t n = 0; n < horizon; ++n) {
    bp[n] = beta_p(n);
    bb[n] = B(n);
  }
  const QuadraticCoreParams limit{a, b, CoeffSeq::periodic(tail.limit_values)};
  const RationalParams limit_params = limit.to_rational(horizon);
  p.beta_p = CoeffSeq::with_prefix(std::move(bp), limit_params.beta_p);
  p.B = CoeffSeq::with_prefix(std::move(bb), limit_params.B);
  return p;
}

std::pair<double, double> QuadraticCoreParams::window() const {
  const double edge = -b / a;
  return a < 0.0 ? std::make_pair(0.0, edge) : std::make_pair(edge, 0.0);
}

bool QuadraticCoreParams::in_window(double r0) const {
  const auto [lo, hi] = window();
  return r0 > lo && r0 < hi;
}

std::string to_string(CatalogId id) {
  switch (id) {
    case CatalogId::RH: return "rh";
    case CatalogId::RHSC: return "rhsc";
    case CatalogId::RNH: return "rnh";
    case CatalogId::MHS: return "mhs";
    case CatalogId::COCH: return "coch";
    case CatalogId::LNA: return "lna";
    case CatalogId::LAH: return "lah";
    case CatalogId::LNH: return "lnh";
  }
  return "unknown";
}

CatalogId parse_catalog_id(std::string_view name) {
  for (CatalogId id : {CatalogId::RH, CatalogId::RHSC, CatalogId::RNH, CatalogId::MHS,
                       CatalogId::COCH, CatalogId::LNA, CatalogId::LAH, CatalogId::LNH}) {
    if (to_string(id) == name) return id;
  }
  throw InvalidParam("unknown catalog system '" + std::string(name) + "'");
}

void CatalogSystem::validate() const {
  switch (id) {
    case CatalogId::RH:
      return;
    case CatalogId::RHSC:
    case CatalogId::RNH:
      if (a == 0.0) throw InvalidParam(to_string(id) + " needs a != 0");
      require_nonzero_alpha(alpha, 64);
      return;
    case CatalogId::LNA:
      require_nonzero_alpha(alpha, 64);
      return;
    case CatalogId::MHS:
    case CatalogId::COCH:
      require_constant_alpha(*this);
      if (a == 0.0) throw InvalidParam(to_string(id) + " needs a != 0");
      return;
    case CatalogId::LAH:
      require_constant_alpha(*this);
      if (a != 0.0) throw InvalidParam("lah is the a = 0 case of lna");
      if (b == 0.0) throw InvalidParam("lah needs b != 0");
      return;
    case CatalogId::LNH:
      require_constant_alpha(*this);
      if (b != 0.0) throw InvalidParam("lnh is the b = 0 case of lna");
      if (a == 0.0) throw InvalidParam("lnh needs a != 0");
      return;
  }
}

GreekParams greek_view(const CatalogSystem& s) {
  const double al = s.alpha(0);
  switch (s.id) {
    case CatalogId::MHS: return {al, 1.0 / s.a, s.b / (s.a * al)};
    case CatalogId::COCH: return {al, al * al / s.a, s.b / s.a};
    case CatalogId::LAH: return {al, al / s.b, s.c / (al * s.b)};
    case CatalogId::LNH: return {al, al * al / s.a, s.c / s.a};
    default: throw InvalidParam(to_string(s.id) + " has no (alpha, beta, gamma) form");
  }
}

CatalogSystem from_greek(CatalogId id, const GreekParams& g) {
  CatalogSystem s;
  s.id = id;
  s.alpha = CoeffSeq::constant(g.alpha);
  s.c = 0.0;
  switch (id) {
    case CatalogId::MHS:
      s.a = 1.0 / g.beta;
      s.b = g.gamma * s.a * g.alpha;
      break;
    case CatalogId::COCH:
      s.a = g.alpha * g.alpha / g.beta;
      s.b = g.gamma * s.a;
      break;
    case CatalogId::LAH:
      s.a = 0.0;
      s.b = g.alpha / g.beta;
      s.c = g.gamma * g.alpha * s.b;
      break;
    case CatalogId::LNH:
      s.a = g.alpha * g.alpha / g.beta;
      s.b = 0.0;
      s.c = g.gamma * s.a;
      break;
    default:
      throw InvalidParam(to_string(id) + " has no (alpha, beta, gamma) form");
  }
  return s;
}

Point step_rh(const RationalParams& p, std::size_t n, Point pt, double tol) {
  const double x = pt.x;
  const double y = pt.y;
  const double x_next =
      checked_divide(p.alpha(n) * x + p.beta(n) * y, p.A(n) * x + y, "A_n*x_n + y_n", tol);
  const double y_next =
      checked_divide(p.alpha_p(n) * x + p.beta_p(n) * y, x + p.B(n) * y, "x_n + B_n*y_n", tol);
  return {x_next, y_next};
}

double passive_rh(const RationalParams& p, std::size_t n, double x, double x_next, double tol) {
  return checked_divide(x * (p.alpha(n) - p.A(n) * x_next), x_next - p.beta(n),
                        "x_{n+1} - beta_n", tol);
}

double core_rh(const RationalParams& p, std::size_t n, double s, double tol) {
  const double al = p.alpha(n), al1 = p.alpha(n + 1);
  const double be = p.beta(n), be1 = p.beta(n + 1);
  const double A = p.A(n), A1 = p.A(n + 1);
  const double alp = p.alpha_p(n), bep = p.beta_p(n), B = p.B(n);

  const double lead = A * B - 1.0;
  const double mid = be - al * B;
  const double cross = A * bep - alp;
  const double det = alp * be - al * bep;

  const double numer = al1 * lead * s * s + (al1 * mid + be1 * cross) * s + be1 * det;
  const double denom = A1 * lead * s * s + (A1 * mid + cross) * s + det;
  return checked_divide(numer, denom, "core denominator", tol);
}

Point step_catalog(const CatalogSystem& s, std::size_t n, Point pt, double tol) {
  const double x = pt.x;
  const double y = pt.y;
  if (s.id == CatalogId::RH) return step_rh(s.rh, n, pt, tol);

  const double al = s.alpha(n);
  const double x_next = checked_divide(al * x, y, "y_n", tol);
  switch (s.id) {
    case CatalogId::RHSC: {
      const double al1 = s.alpha(n + 1);
      const double beta_p = al1 / (s.a * al);
      const double B = s.b / (s.a * al);
      return {x_next, checked_divide(beta_p * y, x + B * y, "x_n + B_n*y_n", tol)};
    }
    case CatalogId::RNH:
      return {x_next, checked_divide(al * s.alpha(n + 1), (s.a * x + s.b) * y,
                                     "(a*x_n + b)*y_n", tol)};
    case CatalogId::LNA: {
      const double al1 = s.alpha(n + 1);
      return {x_next, checked_divide(al * al1 * x, al * s.b * x + (s.a * x + s.c) * y,
                                     "alpha_n*b*x_n + (a*x_n + c)*y_n", tol)};
    }
    case CatalogId::MHS: {
      const GreekParams g = greek_view(s);
      return {x_next, checked_divide(g.beta * y, x + g.gamma * y, "x_n + gamma*y_n", tol)};
    }
    case CatalogId::COCH: {
      const GreekParams g = greek_view(s);
      return {x_next, checked_divide(g.beta, (x + g.gamma) * y, "(x_n + gamma)*y_n", tol)};
    }
    case CatalogId::LAH: {
      const GreekParams g = greek_view(s);
      return {x_next, checked_divide(g.beta * x, x + g.gamma * y, "x_n + gamma*y_n", tol)};
    }
    case CatalogId::LNH: {
      const GreekParams g = greek_view(s);
      return {x_next, checked_divide(g.beta * x, (x + g.gamma) * y, "(x_n + gamma)*y_n", tol)};
    }
    case CatalogId::RH:
      break;
  }
  return step_rh(s.rh, n, pt, tol);
}

double logistic_conjugate(const QuadraticCoreParams& q, double r) {
  if (q.b == 0.0) throw InvalidParam("logistic conjugacy needs b != 0");
  return -q.a * r / q.b;
}

SystemSpec catalog_spec(const CatalogSystem& system, double tol) {
  system.validate();
  return SystemSpec(to_string(system.id), [system, tol](std::size_t n, Point p) {
    return step_catalog(system, n, p, tol);
  });
}

std::pair<MapExpr, MapExpr> catalog_maps(const CatalogSystem& s) {
  const MapExpr u = MapExpr::u();
  const MapExpr v = MapExpr::v();
  if (s.id == CatalogId::RH) {
    const RationalParams& p = s.rh;
    const CoeffSeq one = CoeffSeq::constant(1.0);
    return {MapExpr::linear_fractional(p.alpha, p.beta, p.A, one),
            MapExpr::linear_fractional(p.alpha_p, p.beta_p, one, p.B)};
  }

  const MapExpr f = MapExpr::ratio(s.alpha);
  const MapExpr al = coef(s.alpha, "alpha");
  const MapExpr al1 = coef(s.alpha, "alpha", 1);
  switch (s.id) {
    case CatalogId::RHSC:
      return {f, (al1 / (num(s.a) * al)) * v / (u + (num(s.b) / (num(s.a) * al)) * v)};
    case CatalogId::RNH:
      return {f, al * al1 / ((num(s.a) * u + num(s.b)) * v)};
    case CatalogId::LNA:
      return {f, al * al1 * u / (al * num(s.b) * u + (num(s.a) * u + num(s.c)) * v)};
    default:
      break;
  }
  const GreekParams g = greek_view(s);
  const MapExpr beta = num(g.beta);
  const MapExpr gamma = num(g.gamma);
  switch (s.id) {
    case CatalogId::MHS: return {f, beta * v / (u + gamma * v)};
    case CatalogId::COCH: return {f, beta / ((u + gamma) * v)};
    case CatalogId::LAH: return {f, beta * u / (u + gamma * v)};
    case CatalogId::LNH: return {f, beta * u / ((u + gamma) * v)};
    default: break;
  }
  throw InvalidParam("no expression form for " + to_string(s.id));
}

Folding catalog_folding(const CatalogSystem& s) {
  s.validate();
  const MapExpr u = MapExpr::u();
  const MapExpr w = MapExpr::v();

  if (s.id == CatalogId::RH) {
    const RationalParams& p = s.rh;
    const MapExpr al = coef(p.alpha, "alpha"), al1 = coef(p.alpha, "alpha", 1);
    const MapExpr be = coef(p.beta, "beta"), be1 = coef(p.beta, "beta", 1);
    const MapExpr A = coef(p.A, "A"), A1 = coef(p.A, "A", 1);
    const MapExpr alp = coef(p.alpha_p, "alpha'"), bep = coef(p.beta_p, "beta'");
    const MapExpr B = coef(p.B, "B");
    const MapExpr lead = A * B - num(1.0);
    const MapExpr mid = be - al * B;
    const MapExpr cross = A * bep - alp;
    const MapExpr det = alp * be - al * bep;
    const MapExpr s2 = u.pow(2);
    const MapExpr phi = (al1 * lead * s2 + (al1 * mid + be1 * cross) * u + be1 * det) /
                        (A1 * lead * s2 + (A1 * mid + cross) * u + det);
    const SemiInversion h(u * (al - A * w) / (w - be));
    return Folding{catalog_maps(s).first, ScalarCore::first_order(phi), h};
  }

  const MapExpr f = MapExpr::ratio(s.alpha);
  const SemiInversion h(MapExpr::ratio(s.alpha));
  const MapExpr a = num(s.a), b = num(s.b), c = num(s.c);
  switch (s.id) {
    case CatalogId::RHSC:
    case CatalogId::MHS:
      return Folding{f, ScalarCore::first_order(a * u.pow(2) + b * u), h};
    case CatalogId::RNH:
    case CatalogId::COCH:
      return Folding{f, ScalarCore::second_order(a * u.pow(2) + b * u), h};
    case CatalogId::LNA:
      return Folding{f, ScalarCore::second_order(a * u + b * w + c), h};
    case CatalogId::LAH:
      return Folding{f, ScalarCore::first_order(b * u + c), h};
    case CatalogId::LNH:
      return Folding{f, ScalarCore::second_order(a * u + c), h};
    case CatalogId::RH:
      break;
  }
  throw InvalidParam("no folding for " + to_string(s.id));
}

bool has_quadratic_core(CatalogId id) {
  return id == CatalogId::RHSC || id == CatalogId::MHS || id == CatalogId::RNH ||
         id == CatalogId::COCH;
}

}  // namespace foldcore
