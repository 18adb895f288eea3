#include "foldcore/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "foldcore/errors.hpp"

namespace foldcore {

namespace {

double distance(double a, double b) { return std::abs(a - b); }
double distance(const Point& a, const Point& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

template <class T>
std::optional<CycleReport<T>> detect_cycle_impl(std::span<const T> tail, double abs_tol,
                                                std::size_t max_period,
                                                std::size_t transient_used) {
  if (max_period == 0) throw InvalidParam("max_period must be >= 1");
  if (tail.size() < 3 * max_period) {
    throw InvalidParam(fmt::format("cycle detection needs at least {} values, got {}",
                                   3 * max_period, tail.size()));
  }
  const std::size_t len = tail.size();
  for (std::size_t q = 1; q <= max_period; ++q) {
    double residual = 0.0;
    bool ok = true;
    for (std::size_t k = len - 3 * q; k < len - q; ++k) {
      const double d = distance(tail[k + q], tail[k]);
      if (!(d < abs_tol)) {
        ok = false;
        break;
      }
      residual = std::max(residual, d);
    }
    if (ok) {
      CycleReport<T> report;
      report.period = q;
      report.cycle.assign(tail.end() - static_cast<std::ptrdiff_t>(q), tail.end());
      report.residual = residual;
      report.transient_used = transient_used;
      return report;
    }
  }
  return std::nullopt;
}

void check_quadratic(const QuadraticCoreParams& q) {
  if (q.a == 0.0) throw InvalidParam("a must be nonzero");
  if (!(q.b > 0.0 && q.b < 4.0)) throw InvalidParam("b must lie in (0, 4)");
}

// Average of ln|2ar+b| with no window check; -inf on an exact critical hit.
double quadratic_lyapunov(double a, double b, double r, std::size_t transient,
                          std::size_t samples, bool throw_on_critical) {
  for (std::size_t k = 0; k < transient; ++k) {
    r = quadratic_core_step(a, b, r);
    if (!(std::abs(r) <= kOverflowThreshold)) throw OverflowError("core orbit escaped");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double d = 2.0 * a * r + b;
    if (d == 0.0) {
      if (throw_on_critical) {
        throw DegenerateOrbit(fmt::format("iterate {} hit the critical point", transient + k));
      }
      return -std::numeric_limits<double>::infinity();
    }
    sum += std::log(std::abs(d));
    r = quadratic_core_step(a, b, r);
    if (!(std::abs(r) <= kOverflowThreshold)) throw OverflowError("core orbit escaped");
  }
  return sum / static_cast<double>(samples);
}

double sup_abs_alpha(const CoeffSeq& alpha, std::size_t horizon) {
  double sup = 0.0;
  for (std::size_t n = 0; n <= horizon; ++n) sup = std::max(sup, std::abs(alpha(n)));
  return sup;
}

// Shorten the horizon where alpha underflows towards zero; the transient
// shrinks with it so the tail keeps 3 * max_period points.
std::size_t capped_horizon(const CoeffSeq& alpha, ClassifyOptions& o, ClassifyReport& report) {
  for (std::size_t n = 0; n <= o.budget + 1; ++n) {
    if (std::abs(alpha(n)) < 1e-150) {
      const std::size_t cap = std::min(o.budget, n > 1 ? n - 1 : std::size_t{1});
      report.notes.push_back(fmt::format("horizon capped at {}: |alpha_n| < 1e-150 from n={}", cap, n));
      if (cap + 1 < 3 * o.max_period) {
        throw InvalidParam(fmt::format("alpha underflows at n={}, before 3*max_period steps", n));
      }
      if (cap + 1 < o.transient + 3 * o.max_period) {
        o.transient = cap + 1 - 3 * o.max_period;
        report.notes.push_back(fmt::format("transient shortened to {}", o.transient));
      }
      return cap;
    }
  }
  return o.budget;
}

void check_options(const ClassifyOptions& o) {
  if (o.budget < o.transient + 3 * o.max_period) {
    throw InvalidParam(fmt::format("budget must be at least transient + 3*max_period = {}",
                                   o.transient + 3 * o.max_period));
  }
  if (!(o.cycle_tol > 0.0)) throw InvalidParam("cycle tolerance must be positive");
}

// Observed outcome of a directly iterated orbit.
void observe(const SystemSpec& spec, Point init,
             const ClassifyOptions& o, ClassifyReport& report) {
  const Orbit orbit = iterate_system(spec, init, report.horizon, o.policy);
  if (orbit.status == OrbitStatus::Overflow) {
    report.observed = {Outcome::Kind::Unbounded, 0};
    report.notes.push_back(fmt::format("overflow at n={}", orbit.stop_index));
    return;
  }
  if (orbit.status == OrbitStatus::Singular) {
    report.notes.push_back(
        fmt::format("singular at n={}: {}", orbit.stop_index, orbit.detail));
    // y_n shrinking below the singularity threshold is the x-axis limit
    // seen in finite precision.
    const auto& pts = orbit.points;
    if (orbit.detail == "y_n" && pts.size() >= 2 * o.max_period) {
      double y_recent = 0.0;
      for (std::size_t k = pts.size() / 2; k < pts.size(); ++k) {
        y_recent = std::max(y_recent, std::abs(pts[k].y));
      }
      if (y_recent < o.x_axis_tol) {
        report.observed = {Outcome::Kind::XAxisLimit, 0};
        report.notes.push_back(fmt::format(
            "|y| fell below the singularity threshold; max |y| over the last {} steps: {}",
            pts.size() - pts.size() / 2, format_real(y_recent)));
        return;
      }
    }
    report.observed = {Outcome::Kind::Singular, 0};
    return;
  }

  const std::size_t start = std::min(o.transient, orbit.points.size() - 1);
  const std::span<const Point> tail(orbit.points.data() + start, orbit.points.size() - start);

  // Bounds checks (only meaningful for the quadratic family).
  const double lo = std::min(report.mu_mu_max, report.mu_max);
  const double hi = std::max(report.mu_mu_max, report.mu_max);
  const double slack = 1e-12 * std::max(1.0, std::abs(hi) + std::abs(lo));
  report.x_confined = true;
  report.y_bounded = true;
  for (std::size_t k = 0; k < tail.size(); ++k) {
    const Point& p = tail[k];
    if (p.x < lo - slack || p.x > hi + slack) report.x_confined = false;
    if (std::abs(p.y) > report.y_bound * (1.0 + 1e-12) + slack) report.y_bounded = false;
  }

  const std::size_t window = std::min<std::size_t>(1000, tail.size());
  double y_recent = 0.0;
  for (std::size_t k = tail.size() - window; k < tail.size(); ++k) {
    y_recent = std::max(y_recent, std::abs(tail[k].y));
  }
  if (y_recent < o.x_axis_tol) {
    report.observed = {Outcome::Kind::XAxisLimit, 0};
    report.notes.push_back(fmt::format("max |y| over the last {} steps: {}", window,
                                       format_real(y_recent)));
    return;
  }

  if (tail.size() >= 3 * o.max_period) {
    if (auto cyc = detect_cycle(tail, o.cycle_tol, o.max_period, start)) {
      report.observed_period = cyc->period;
      report.observed = Outcome::of_period(cyc->period);
      return;
    }
  }

  try {
    report.observed_lyapunov =
        lyapunov_system(spec, tail.front(), 0, tail.size() - 1);
  } catch (const Error& e) {
    report.notes.push_back(std::string("observed lyapunov unavailable: ") + e.what());
  }
  if (report.observed_lyapunov && *report.observed_lyapunov > o.chaos_lyapunov) {
    report.observed = {Outcome::Kind::Chaotic, 0};
  } else {
    report.observed = {Outcome::Kind::Aperiodic, 0};
  }
}

enum class AlphaLimit { NonZero, Zero, ContainsZero };

AlphaLimit classify_alpha_limit(const EventualStructure& es) {
  const auto zeros = std::count(es.limit_values.begin(), es.limit_values.end(), 0.0);
  if (zeros == 0) return AlphaLimit::NonZero;
  if (static_cast<std::size_t>(zeros) == es.limit_values.size()) return AlphaLimit::Zero;
  return AlphaLimit::ContainsZero;
}

void finish(ClassifyReport& report, bool in_scope) {
  if (!in_scope) {
    report.verdict = Verdict::OutOfScope;
  } else {
    report.verdict = report.predicted == report.observed ? Verdict::Agree : Verdict::Disagree;
  }
  if (report.predicted.kind == Outcome::Kind::Chaotic ||
      report.observed.kind == Outcome::Kind::Chaotic) {
    report.notes.push_back(
        "chaotic (operational): bounded, no period <= max_period, lyapunov > threshold");
  }
}

}  // namespace

std::optional<CycleReport<double>> detect_cycle(std::span<const double> tail, double abs_tol,
                                                std::size_t max_period,
                                                std::size_t transient_used) {
  return detect_cycle_impl(tail, abs_tol, max_period, transient_used);
}

std::optional<CycleReport<Point>> detect_cycle(std::span<const Point> tail, double abs_tol,
                                               std::size_t max_period,
                                               std::size_t transient_used) {
  return detect_cycle_impl(tail, abs_tol, max_period, transient_used);
}

std::size_t lcm_period(std::size_t p, std::size_t q) {
  if (p == 0 || q == 0) throw InvalidParam("periods must be >= 1");
  return std::lcm(p, q);
}

double lyapunov_core(const QuadraticCoreParams& q, double r0, std::size_t transient,
                     std::size_t samples) {
  check_quadratic(q);
  if (!q.in_window(r0)) throw InvalidParam("r0 is outside the window");
  if (samples == 0) throw InvalidParam("samples must be >= 1");
  return quadratic_lyapunov(q.a, q.b, r0, transient, samples, true);
}

double lyapunov_core_generic(const ScalarCore& core, double r0, std::size_t transient,
                             std::size_t samples, double fd_step) {
  if (core.order() != 1) throw InvalidParam("lyapunov_core_generic needs an order-1 core");
  if (samples == 0) throw InvalidParam("samples must be >= 1");
  double r = r0;
  std::size_t k = 0;
  auto advance = [&] {
    r = core.step(k++, r);
    if (!(std::abs(r) <= kOverflowThreshold)) throw OverflowError("core orbit escaped");
  };
  for (std::size_t i = 0; i < transient; ++i) advance();
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double h = fd_step * std::max(1.0, std::abs(r));
    const double d = (core.step(k, r + h) - core.step(k, r - h)) / (2.0 * h);
    if (d == 0.0) {
      throw DegenerateOrbit(fmt::format("iterate {} has zero derivative", transient + i));
    }
    sum += std::log(std::abs(d));
    advance();
  }
  return sum / static_cast<double>(samples);
}

double lyapunov_system(const SystemSpec& system, Point init, std::size_t transient,
                       std::size_t samples, double fd_step) {
  if (samples == 0) throw InvalidParam("samples must be >= 1");
  Point p = init;
  std::size_t n = 0;
  auto advance = [&] {
    p = system.step(n++, p);
    if (exceeds(p, kOverflowThreshold)) throw OverflowError("orbit escaped");
  };
  for (std::size_t i = 0; i < transient; ++i) advance();

  double vx = 1.0 / std::sqrt(2.0);
  double vy = vx;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double h = fd_step * std::max({1.0, std::abs(p.x), std::abs(p.y)});
    const Point fwd = system.step(n, {p.x + h * vx, p.y + h * vy});
    const Point back = system.step(n, {p.x - h * vx, p.y - h * vy});
    const double wx = (fwd.x - back.x) / (2.0 * h);
    const double wy = (fwd.y - back.y) / (2.0 * h);
    const double norm = std::hypot(wx, wy);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DegenerateOrbit(fmt::format("tangent vector collapsed at n={}", n));
    }
    sum += std::log(norm);
    vx = wx / norm;
    vy = wy / norm;
    advance();
  }
  return sum / static_cast<double>(samples);
}

SensitivePairStat sensitive_pair_stat(const ScalarCore& core, double r0, double delta,
                                      std::size_t horizon, double spread) {
  if (core.order() != 1) throw InvalidParam("sensitive_pair_stat needs an order-1 core");
  if (!(delta > 0.0 && delta <= 1e-8)) throw InvalidParam("delta must lie in (0, 1e-8]");
  SensitivePairStat stat;
  double r = r0;
  double s = r0 + delta;
  stat.max_sep = std::abs(s - r);
  for (std::size_t k = 0; k < horizon; ++k) {
    r = core.step(k, r);
    s = core.step(k, s);
    if (!(std::abs(r) <= kOverflowThreshold && std::abs(s) <= kOverflowThreshold)) {
      throw OverflowError(fmt::format("pair escaped at step {}", k + 1));
    }
    const double sep = std::abs(s - r);
    stat.max_sep = std::max(stat.max_sep, sep);
    if (stat.spread_index) {
      stat.min_sep_after_spread = std::min(*stat.min_sep_after_spread, sep);
    } else if (sep > spread) {
      stat.spread_index = k + 1;
      stat.min_sep_after_spread = sep;
    }
  }
  return stat;
}

std::string to_string(const Outcome& outcome) {
  switch (outcome.kind) {
    case Outcome::Kind::FixedPoint: return "FixedPoint";
    case Outcome::Kind::Cycle: return fmt::format("Cycle({})", outcome.period);
    case Outcome::Kind::XAxisLimit: return "XAxisLimit";
    case Outcome::Kind::Chaotic: return "Chaotic";
    case Outcome::Kind::Aperiodic: return "Aperiodic";
    case Outcome::Kind::Unbounded: return "Unbounded";
    case Outcome::Kind::Singular: return "Singular";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Agree: return "agree";
    case Verdict::Disagree: return "disagree";
    case Verdict::OutOfScope: return "out of theorem scope";
  }
  return "unknown";
}

ClassifyReport classify_rhsc(const QuadraticCoreParams& q, Point init,
                             const ClassifyOptions& options) {
  ClassifyOptions o = options;
  check_quadratic(q);
  check_options(o);
  q.validate();
  if (init.y == 0.0) throw InvalidParam("y0 must be nonzero");

  ClassifyReport report;
  report.system = "rhsc";
  report.r0 = q.alpha(0) * init.x / init.y;
  report.window_ok = q.in_window(report.r0);
  report.mu_max = q.mu_max();
  report.mu_mu_max = q.mu_mu_max();
  report.horizon = capped_horizon(q.alpha, o, report);
  report.y_bound = q.y_bound_factor() * sup_abs_alpha(q.alpha, report.horizon);

  const EventualStructure es = q.alpha.eventual_structure();
  report.alpha_period = std::max<std::size_t>(1, es.period);
  bool in_scope = true;

  // Prediction.
  const double edge = -q.b / q.a;
  if (!report.window_ok) {
    if (report.r0 == 0.0 || report.r0 == edge) {
      in_scope = false;
      report.notes.push_back("r0 is an exceptional ratio (0 or -b/a)");
    }
    report.predicted = {Outcome::Kind::Unbounded, 0};
  } else {
    std::vector<double> r;
    r.reserve(report.horizon + 1);
    r.push_back(report.r0);
    for (std::size_t k = 1; k <= report.horizon; ++k) {
      r.push_back(quadratic_core_step(q.a, q.b, r.back()));
    }
    const std::span<const double> tail(r.data() + o.transient, r.size() - o.transient);
    const auto cyc = detect_cycle(tail, o.cycle_tol, o.max_period, o.transient);
    if (cyc) report.core_period = cyc->period;
    try {
      report.core_lyapunov = lyapunov_core(q, report.r0, o.transient, tail.size());
    } catch (const DegenerateOrbit&) {
      report.core_lyapunov = -std::numeric_limits<double>::infinity();
      report.notes.push_back("core orbit hits the critical point (superstable)");
    }

    switch (classify_alpha_limit(es)) {
      case AlphaLimit::Zero:
        report.predicted = {Outcome::Kind::XAxisLimit, 0};
        report.notes.push_back(
            "alpha -> 0: the orbit approaches the x-axis; the limit set is not itself an orbit "
            "(not asserted)");
        break;
      case AlphaLimit::ContainsZero:
        in_scope = false;
        report.predicted = {Outcome::Kind::Aperiodic, 0};
        report.notes.push_back("the limit cycle of alpha contains 0");
        break;
      case AlphaLimit::NonZero:
        if (cyc) {
          report.predicted = Outcome::of_period(lcm_period(report.alpha_period, cyc->period));
          if (q.b > 3.83) report.notes.push_back("periodic window inside (3.83, 4)");
        } else if (*report.core_lyapunov > o.chaos_lyapunov) {
          report.predicted = {Outcome::Kind::Chaotic, 0};
        } else {
          report.predicted = {Outcome::Kind::Aperiodic, 0};
        }
        break;
    }
  }

  CatalogSystem system;
  system.id = CatalogId::RHSC;
  system.a = q.a;
  system.b = q.b;
  system.alpha = q.alpha;
  observe(catalog_spec(system, o.policy.singular_rel_tol), init, o, report);
  finish(report, in_scope);
  return report;
}

ClassifyReport classify_affine(const CatalogSystem& system, Point init,
                               const ClassifyOptions& options) {
  ClassifyOptions o = options;
  if (system.id != CatalogId::LNA && system.id != CatalogId::LAH &&
      system.id != CatalogId::LNH) {
    throw InvalidParam("classify_affine handles lna, lah and lnh");
  }
  system.validate();
  check_options(o);
  if (init.y == 0.0) throw InvalidParam("y0 must be nonzero");

  ClassifyReport report;
  report.system = to_string(system.id);
  report.r0 = system.alpha(0) * init.x / init.y;
  report.window_ok = true;
  report.horizon = capped_horizon(system.alpha, o, report);
  report.mu_max = std::numeric_limits<double>::infinity();
  report.mu_mu_max = -std::numeric_limits<double>::infinity();
  report.y_bound = std::numeric_limits<double>::infinity();

  const EventualStructure es = system.alpha.eventual_structure();
  report.alpha_period = std::max<std::size_t>(1, es.period);
  bool in_scope = true;

  // Spectral radius of lambda^2 - b lambda - a.
  const std::complex<double> disc = std::sqrt(std::complex<double>(system.b * system.b + 4.0 * system.a));
  const double rho = std::max(std::abs((system.b + disc) / 2.0), std::abs((system.b - disc) / 2.0));
  report.core_lyapunov = std::log(rho);

  std::vector<double> s;
  s.reserve(report.horizon + 2);
  s.push_back(init.x);
  s.push_back(report.r0);
  bool escaped = false;
  for (std::size_t k = 0; k < report.horizon; ++k) {
    const std::size_t m = s.size();
    const double next = system.a * s[m - 2] + system.b * s[m - 1] + system.c;
    if (!(std::abs(next) <= o.policy.overflow)) {
      escaped = true;
      break;
    }
    s.push_back(next);
  }

  if (escaped) {
    report.predicted = {Outcome::Kind::Unbounded, 0};
  } else {
    const std::span<const double> tail(s.data() + o.transient, s.size() - o.transient);
    const auto cyc = detect_cycle(tail, o.cycle_tol, o.max_period, o.transient);
    const AlphaLimit lim = classify_alpha_limit(es);
    if (cyc) {
      report.core_period = cyc->period;
      const double biggest = std::abs(*std::max_element(
          cyc->cycle.begin(), cyc->cycle.end(),
          [](double l, double r) { return std::abs(l) < std::abs(r); }));
      if (biggest < 1e-9) {
        in_scope = false;
        report.notes.push_back("core tends to 0, where y = alpha_n x_n/x_{n+1} is undefined");
      }
    }
    if (lim == AlphaLimit::ContainsZero) {
      in_scope = false;
      report.notes.push_back("the limit cycle of alpha contains 0");
    }
    if (lim == AlphaLimit::Zero && cyc) {
      report.predicted = {Outcome::Kind::XAxisLimit, 0};
    } else if (cyc) {
      report.predicted = Outcome::of_period(lcm_period(report.alpha_period, cyc->period));
    } else {
      report.predicted = {Outcome::Kind::Aperiodic, 0};
      report.notes.push_back("affine core: bounded without a short period (quasi-periodic)");
    }
  }

  observe(catalog_spec(system, o.policy.singular_rel_tol), init, o, report);
  report.x_confined = false;
  report.y_bounded = false;
  finish(report, in_scope);
  return report;
}

double affine_core_closed_form(double a, double b, double c, double s0, double s1,
                               std::size_t n) {
  using C = std::complex<double>;
  auto ipow = [](C z, std::size_t k) {
    C out = 1.0;
    for (std::size_t i = 0; i < k; ++i) out *= z;
    return out;
  };

  // Particular solution p(n).
  const double denom = 1.0 - a - b;
  std::function<double(double)> particular;
  if (denom != 0.0) {
    const double fixed = c / denom;
    particular = [fixed](double) { return fixed; };
  } else if (b != 2.0) {
    const double k = c / (2.0 - b);
    particular = [k](double m) { return k * m; };
  } else {
    const double k = c / 2.0;
    particular = [k](double m) { return k * m * m; };
  }

  const double h0 = s0 - particular(0.0);
  const double h1 = s1 - particular(1.0);
  const C disc = std::sqrt(C(b * b + 4.0 * a));
  const C l1 = (b + disc) / 2.0;
  const C l2 = (b - disc) / 2.0;
  C homogeneous;
  if (std::abs(l1 - l2) > 1e-12 * std::max(1.0, std::abs(l1))) {
    // h_n = A l1^n + B l2^n
    const C B = (h1 - l1 * h0) / (l2 - l1);
    const C A = h0 - B;
    homogeneous = A * ipow(l1, n) + B * ipow(l2, n);
  } else {
    // h_n = (A + B n) l^n with l = b/2.
    const C l = b / 2.0;
    if (l == 0.0) {
      homogeneous = n == 0 ? C(h0) : (n == 1 ? C(h1) : C(0.0));
    } else {
      const C A = h0;
      const C B = h1 / l - h0;
      homogeneous = (A + B * static_cast<double>(n)) * ipow(l, n);
    }
  }
  return particular(static_cast<double>(n)) + homogeneous.real();
}

std::vector<double> sweep_parameters(const SweepOptions& o) {
  if (o.a == 0.0) throw InvalidParam("a must be nonzero");
  if (!(o.b_step > 0.0)) throw InvalidParam("b_step must be positive");
  if (!(o.b_from > 0.0 && o.b_to <= 4.0)) throw InvalidParam("b range must lie in (0, 4]");
  if (!(o.b_from < o.b_to)) throw InvalidParam("empty b range");
  std::vector<double> bs;
  for (std::size_t i = 0;; ++i) {
    const double b = o.b_from + static_cast<double>(i) * o.b_step;
    if (b >= o.b_to - 1e-9 * o.b_step) break;
    bs.push_back(b);
  }
  return bs;
}

std::vector<SweepRow> bifurcation_sweep(const SweepOptions& o) {
  const std::vector<double> bs = sweep_parameters(o);
  if (o.samples == 0) throw InvalidParam("samples must be >= 1");
  std::vector<SweepRow> rows(bs.size());

  auto compute = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.b = bs[i];
    double r = -row.b / (2.0 * o.a);
    for (std::size_t k = 0; k < o.transient && !row.escaped; ++k) {
      r = quadratic_core_step(o.a, row.b, r);
      row.escaped = !(std::abs(r) <= kOverflowThreshold);
    }
    row.samples.reserve(o.samples);
    double sum = 0.0;
    bool critical = false;
    for (std::size_t k = 0; k < o.samples && !row.escaped; ++k) {
      row.samples.push_back(r);
      const double d = 2.0 * o.a * r + row.b;
      if (d == 0.0) critical = true;
      else sum += std::log(std::abs(d));
      r = quadratic_core_step(o.a, row.b, r);
      row.escaped = !(std::abs(r) <= kOverflowThreshold);
    }
    if (row.escaped) {
      row.lyapunov = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    row.lyapunov = critical ? -std::numeric_limits<double>::infinity()
                            : sum / static_cast<double>(o.samples);
    const std::size_t max_period = std::min(o.max_period, row.samples.size() / 3);
    if (max_period > 0) {
      if (auto cyc = detect_cycle(std::span<const double>(row.samples), o.cycle_tol, max_period)) {
        row.period = cyc->period;
      }
    }
  };

  unsigned threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, bs.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < bs.size(); ++i) compute(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < bs.size(); i = next++) compute(i);
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace foldcore
