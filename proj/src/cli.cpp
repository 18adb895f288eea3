#include "foldcore/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "foldcore/config.hpp"
#include "foldcore/dynamics.hpp"
#include "foldcore/errors.hpp"
#include "foldcore/folding.hpp"
#include "foldcore/rational.hpp"

namespace foldcore {

namespace {

// Looser agreement used when the core is chaotic.
constexpr double kChaoticConsistencyTol = 1e-6;

/// Raw flag values; only flags that were given override the config.
struct Flags {
  std::string config;
  std::string system;
  double a = 0, b = 0, c = 0;
  std::string alpha;
  std::string f, g;
  std::string fold_on;
  std::vector<double> init;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::string out;
  double tol = 0, singular_tol = 0, cycle_tol = 0;
  std::size_t inits = 0;
  std::size_t chaotic_horizon = 0;
  std::size_t transient = 0;
  std::size_t samples = 0;
  std::size_t budget = 0;
  std::size_t max_period = 0;
  std::string b_range;
  unsigned threads = 0;
};

struct Options {
  std::map<std::string, CLI::Option*> by_name;
  bool given(const std::string& name) const {
    auto it = by_name.find(name);
    return it != by_name.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App* sub, Flags& fl, Options& opts) {
  auto add = [&](const std::string& name, auto& target, const std::string& help) {
    opts.by_name[name] = sub->add_option("--" + name, target, help);
  };
  add("config", fl.config, "JSON config file; flags override it");
  add("system", fl.system, "rh|rhsc|rnh|mhs|coch|lna|lah|lnh|generic|semilinear");
  add("a", fl.a, "parameter a");
  add("b", fl.b, "parameter b");
  add("c", fl.c, "parameter c");
  add("alpha", fl.alpha, "alpha_n: a number, a comma list (periodic) or a JSON object");
  add("f", fl.f, "first map as a JSON expression (generic systems)");
  add("g", fl.g, "second map as a JSON expression (generic systems)");
  add("fold-on", fl.fold_on, "fold on f (default) or g");
  opts.by_name["init"] = sub->add_option("--init", fl.init, "x0,y0")->delimiter(',')->expected(2);
  add("steps", fl.steps, "number of steps");
  add("seed", fl.seed, "seed for sampled initial points");
  add("out", fl.out, "output path, - for standard output");
  add("tol", fl.tol, "consistency tolerance");
  add("singular-tol", fl.singular_tol, "relative singularity threshold");
  add("cycle-tol", fl.cycle_tol, "cycle detection tolerance");
  add("inits", fl.inits, "number of sampled initial points (verify)");
  add("chaotic-horizon", fl.chaotic_horizon, "step cap for verify in chaotic regimes");
  add("transient", fl.transient, "discarded iterates");
  add("samples", fl.samples, "samples per parameter (sweep) or averaged iterates (lyapunov)");
  add("budget", fl.budget, "orbit length for classify");
  add("max-period", fl.max_period, "largest period searched");
  add("b-range", fl.b_range, "from:to:step for sweep");
  add("threads", fl.threads, "sweep worker threads, 0 = all cores");
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidParam("bad --b-range '" + text + "' (expected from:to:step)");
    }
  }
  if (parts.size() != 3) throw InvalidParam("bad --b-range '" + text + "' (expected from:to:step)");
  return parts;
}

MapExpr parse_expr_arg(const std::string& text) {
  try {
    return expr_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParam(std::string("bad expression: ") + e.what());
  }
}

RunConfig resolve(const std::string& command, const Flags& fl, const Options& o) {
  RunConfig c = o.given("config") ? load_config(fl.config) : RunConfig{};
  if (o.given("system")) {
    if (fl.system == "generic") {
      c.kind = SystemKind::Generic;
    } else if (fl.system == "semilinear") {
      c.kind = SystemKind::Semilinear;
    } else {
      c.kind = SystemKind::Catalog;
      c.catalog.id = parse_catalog_id(fl.system);
    }
  }
  if (o.given("a")) {
    c.catalog.a = fl.a;
    c.sweep.a = fl.a;
  }
  if (o.given("b")) c.catalog.b = fl.b;
  if (o.given("c")) c.catalog.c = fl.c;
  if (o.given("alpha")) c.catalog.alpha = parse_coeff_arg(fl.alpha);
  if (o.given("f")) c.f = parse_expr_arg(fl.f);
  if (o.given("g")) c.g = parse_expr_arg(fl.g);
  if (o.given("fold-on")) {
    if (fl.fold_on != "f" && fl.fold_on != "g") throw InvalidParam("--fold-on must be f or g");
    c.fold_on_g = fl.fold_on == "g";
  }
  if (o.given("init")) c.init = {fl.init.at(0), fl.init.at(1)};
  if (o.given("steps")) c.steps = fl.steps;
  if (o.given("seed")) c.seed = fl.seed;
  if (o.given("out")) c.output = fl.out;
  if (o.given("tol")) c.tolerances.consistency = fl.tol;
  if (o.given("singular-tol")) c.tolerances.singular = fl.singular_tol;
  if (o.given("cycle-tol")) {
    c.tolerances.cycle = fl.cycle_tol;
    c.sweep.cycle_tol = fl.cycle_tol;
  }
  if (o.given("inits")) c.verify_samples = fl.inits;
  if (o.given("chaotic-horizon")) c.chaotic_horizon = fl.chaotic_horizon;
  if (o.given("budget")) c.budget = fl.budget;
  if (o.given("max-period")) {
    c.max_period = fl.max_period;
    c.sweep.max_period = fl.max_period;
  }
  if (o.given("threads")) c.sweep.threads = fl.threads;
  if (o.given("b-range")) {
    const auto r = parse_range(fl.b_range);
    c.sweep.b_from = r[0];
    c.sweep.b_to = r[1];
    c.sweep.b_step = r[2];
  }
  if (command == "sweep") {
    if (o.given("transient")) c.sweep.transient = fl.transient;
    if (o.given("samples")) c.sweep.samples = fl.samples;
  } else {
    if (o.given("transient")) c.transient = fl.transient;
    if (o.given("samples")) c.lyapunov_samples = fl.samples;
  }
  c.validate();
  return c;
}

NumericPolicy policy_of(const RunConfig& c) {
  NumericPolicy p;
  p.singular_rel_tol = c.tolerances.singular;
  return p;
}

std::string system_name(const RunConfig& c) {
  switch (c.kind) {
    case SystemKind::Catalog: return to_string(c.catalog.id);
    case SystemKind::Generic: return "generic";
    case SystemKind::Semilinear: return "semilinear";
  }
  return "unknown";
}

std::pair<MapExpr, MapExpr> generic_maps(const RunConfig& c) {
  if (!c.fold_on_g) return {c.f, c.g};
  // Exchange x and y: the second map becomes the first.
  const MapExpr u = MapExpr::u();
  const MapExpr v = MapExpr::v();
  return {c.g.call(0, v, u), c.f.call(0, v, u)};
}

/// With `as_folded`, a generic system folded on g is returned in (y, x) order.
SystemSpec build_system(const RunConfig& c, bool as_folded = false) {
  const double tol = c.tolerances.singular;
  switch (c.kind) {
    case SystemKind::Catalog:
      return catalog_spec(c.catalog, tol);
    case SystemKind::Generic: {
      if (!as_folded) return SystemSpec::from_maps(c.f, c.g, "generic", tol);
      auto [f, g] = generic_maps(c);
      return SystemSpec::from_maps(f, g, c.fold_on_g ? "generic (x<->y)" : "generic", tol);
    }
    case SystemKind::Semilinear:
      return SystemSpec::from_maps(
          MapExpr::affine(c.semilinear.a, c.semilinear.b, c.semilinear.c), c.semilinear.g,
          "semilinear", tol);
  }
  throw InvalidParam("unknown system kind");
}

Folding build_folding(const RunConfig& c) {
  switch (c.kind) {
    case SystemKind::Catalog:
      if (c.fold_on_g) throw InvalidParam("catalog systems fold on f only");
      return catalog_folding(c.catalog);
    case SystemKind::Semilinear:
      if (c.fold_on_g) throw InvalidParam("semilinear systems fold on f only");
      return fold_semilinear(c.semilinear.a, c.semilinear.b, c.semilinear.c, c.semilinear.g);
    case SystemKind::Generic: {
      auto [f, g] = generic_maps(c);
      const auto h = semi_invert_catalog(f);
      if (!h) {
        throw InvalidParam("no catalog semi-inversion applies to " +
                           std::string(c.fold_on_g ? "g" : "f") + " = " + f.to_string());
      }
      return fold(f, g, *h);
    }
  }
  throw InvalidParam("unknown system kind");
}

/// Writes to --out when set, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw InvalidParam("cannot open output '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::string opt_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("none");
}

std::string opt_count(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

int cmd_fold(const RunConfig& c, std::ostream& out) {
  const Folding folding = build_folding(c);
  Sink sink(c.output, out);
  *sink << "system: " << system_name(c) << (c.fold_on_g ? " (folded on g, x<->y)" : "") << "\n";
  *sink << "core order: " << folding.core.order() << "\n";
  *sink << "core: " << folding.core.describe() << "\n";
  *sink << "passive: " << folding.passive_text() << "\n";
  *sink << "init: " << Folding::init_rule() << "\n";
  if (folding.passive.period() > 1) {
    *sink << "passive period: " << folding.passive.period() << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const SystemSpec spec = build_system(c);
  const Orbit orbit = iterate_system(spec, c.init, c.steps, policy_of(c));
  Sink sink(c.output, out);
  *sink << "n,x,y\n";
  for (std::size_t n = 0; n < orbit.points.size(); ++n) {
    *sink << n << ',' << format_csv_real(orbit.points[n].x) << ','
          << format_csv_real(orbit.points[n].y) << '\n';
  }
  switch (orbit.status) {
    case OrbitStatus::Completed:
      return kExitOk;
    case OrbitStatus::Singular:
      err << "singular at n=" << orbit.stop_index << ": denominator " << orbit.detail << "\n";
      return kExitSingular;
    case OrbitStatus::Overflow:
      err << "overflow at n=" << orbit.stop_index << ": " << orbit.detail << "\n";
      return kExitOverflow;
  }
  return kExitOk;
}

bool quadratic_catalog(const RunConfig& c) {
  return c.kind == SystemKind::Catalog && has_quadratic_core(c.catalog.id);
}

/// Core Lyapunov estimate from the critical point when the quadratic core
/// parameters admit one.
std::optional<double> quadratic_regime_lyapunov(const RunConfig& c) {
  if (!quadratic_catalog(c)) return std::nullopt;
  const QuadraticCoreParams q = c.catalog.quadratic();
  if (q.a == 0.0 || !(q.b > 0.0 && q.b < 4.0)) return std::nullopt;
  try {
    return lyapunov_core(q, -q.b / (2.0 * q.a), 1000, 10000);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<Point> sample_inits(const RunConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> inits;
  inits.reserve(c.verify_samples);
  if (quadratic_catalog(c)) {
    const QuadraticCoreParams q = c.catalog.quadratic();
    const auto [lo, hi] = q.window();
    auto inside = [&] { return lo + (hi - lo) * (0.05 + 0.9 * unit(rng)); };
    for (std::size_t k = 0; k < c.verify_samples; ++k) {
      const double x0 = inside();
      const double r0 = inside();
      inits.push_back({x0, q.alpha(0) * x0 / r0});
    }
    return inits;
  }
  for (std::size_t k = 0; k < c.verify_samples; ++k) {
    const double x0 = 0.5 + unit(rng);
    const double y0 = 0.5 + unit(rng);
    inits.push_back({x0, y0});
  }
  return inits;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const SystemSpec spec = build_system(c, true);
  const Folding folding = build_folding(c);
  Sink sink(c.output, out);

  std::size_t steps = c.steps;
  double tol = c.tolerances.consistency;
  const auto lyap = quadratic_regime_lyapunov(c);
  if (lyap && *lyap > kChaosLyapunov) {
    steps = std::min(steps, c.chaotic_horizon);
    tol = std::max(tol, kChaoticConsistencyTol);
    *sink << "note=chaotic regime (core lyapunov " << format_real(*lyap) << "): " << steps
          << " steps, tolerance " << format_real(tol) << "\n";
  }

  std::vector<Point> inits = sample_inits(c);
  if (c.fold_on_g) {
    for (Point& p : inits) std::swap(p.x, p.y);
  }
  double worst = 0.0;
  std::size_t failed = 0;
  for (std::size_t k = 0; k < inits.size(); ++k) {
    const ConsistencyReport r = check_fold_consistency(spec, folding, inits[k], steps, tol,
                                                       policy_of(c));
    worst = std::max(worst, r.max_diff);
    if (!r.pass) {
      ++failed;
      *sink << "fail sample=" << k << " init=" << format_real(inits[k].x) << ','
            << format_real(inits[k].y) << " max_diff=" << format_real(r.max_diff)
            << (r.early_stop.empty() ? "" : " stop=" + r.early_stop) << "\n";
    }
  }
  *sink << "system=" << system_name(c) << "\n"
        << "samples=" << inits.size() << "\n"
        << "steps=" << steps << "\n"
        << "tolerance=" << format_real(tol) << "\n"
        << "max_diff=" << format_real(worst) << "\n"
        << "failed=" << failed << "\n"
        << "result=" << (failed == 0 ? "pass" : "fail") << "\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
  if (c.kind != SystemKind::Catalog) throw InvalidParam("classify needs a catalog system");
  ClassifyOptions o;
  o.budget = c.budget;
  o.transient = c.transient;
  o.cycle_tol = c.tolerances.cycle;
  o.max_period = c.max_period;
  o.policy = policy_of(c);

  ClassifyReport r;
  switch (c.catalog.id) {
    case CatalogId::RHSC:
    case CatalogId::MHS:
      r = classify_rhsc(c.catalog.quadratic(), c.init, o);
      r.system = to_string(c.catalog.id);
      break;
    case CatalogId::LNA:
    case CatalogId::LAH:
    case CatalogId::LNH:
      r = classify_affine(c.catalog, c.init, o);
      break;
    default:
      throw InvalidParam("classify supports rhsc, mhs, lna, lah and lnh");
  }

  Sink sink(c.output, out);
  std::ostream& s = *sink;
  s << "system=" << r.system << "\n"
    << "r0=" << format_real(r.r0) << "\n"
    << "window_ok=" << (r.window_ok ? "true" : "false") << "\n"
    << "mu_max=" << format_real(r.mu_max) << "\n"
    << "mu_mu_max=" << format_real(r.mu_mu_max) << "\n"
    << "y_bound=" << format_real(r.y_bound) << "\n"
    << "alpha_period=" << r.alpha_period << "\n"
    << "core_period=" << opt_count(r.core_period) << "\n"
    << "core_lyapunov=" << opt_real(r.core_lyapunov) << "\n"
    << "predicted=" << to_string(r.predicted) << "\n"
    << "observed=" << to_string(r.observed) << "\n"
    << "observed_period=" << opt_count(r.observed_period) << "\n"
    << "observed_lyapunov=" << opt_real(r.observed_lyapunov) << "\n"
    << "x_confined=" << (r.x_confined ? "true" : "false") << "\n"
    << "y_bounded=" << (r.y_bounded ? "true" : "false") << "\n"
    << "horizon=" << r.horizon << "\n"
    << "verdict=" << to_string(r.verdict) << "\n";
  for (const auto& note : r.notes) s << "note=" << note << "\n";
  return r.verdict == Verdict::Disagree ? kExitCheckFailed : kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const std::vector<SweepRow> rows = bifurcation_sweep(c.sweep);
  Sink sink(c.output, out);
  *sink << "b,sample_index,r,lyapunov\n";
  std::optional<double> onset;
  std::vector<std::pair<double, double>> period3;
  std::size_t escaped = 0;
  for (const SweepRow& row : rows) {
    const std::string b = format_csv_real(row.b);
    const std::string lyap = format_csv_real(row.lyapunov);
    for (std::size_t k = 0; k < row.samples.size(); ++k) {
      *sink << b << ',' << k << ',' << format_csv_real(row.samples[k]) << ',' << lyap << '\n';
    }
    if (row.escaped) {
      ++escaped;
      err << "escaped: b=" << format_real(row.b) << "\n";
      continue;
    }
    if (!onset && row.lyapunov > 0.0) onset = row.b;
    if (row.period == 3u) {
      if (!period3.empty() && std::abs(period3.back().second + c.sweep.b_step - row.b) <
                                  1e-6 * c.sweep.b_step) {
        period3.back().second = row.b;
      } else {
        period3.emplace_back(row.b, row.b);
      }
    }
  }
  err << "rows=" << rows.size() << "\n";
  err << "lyapunov_onset=" << (onset ? format_real(*onset) : std::string("none")) << "\n";
  for (const auto& [from, to] : period3) {
    err << "period3_window=" << format_real(from) << ':' << format_real(to) << "\n";
  }
  if (escaped > 0) err << "escaped_rows=" << escaped << "\n";
  return kExitOk;
}

int cmd_lyapunov(const RunConfig& c, std::ostream& out) {
  Sink sink(c.output, out);
  double value = 0.0;
  std::string method;
  if (quadratic_catalog(c)) {
    if (c.init.y == 0.0) throw InvalidParam("y0 must be nonzero");
    const QuadraticCoreParams q = c.catalog.quadratic();
    const double r0 = q.alpha(0) * c.init.x / c.init.y;
    value = lyapunov_core(q, r0, c.transient, c.lyapunov_samples);
    method = "core-analytic";
  } else if (c.kind == SystemKind::Catalog && c.catalog.id == CatalogId::LAH) {
    const Folding folding = catalog_folding(c.catalog);
    if (c.init.y == 0.0) throw InvalidParam("y0 must be nonzero");
    const double r0 = c.catalog.alpha(0) * c.init.x / c.init.y;
    value = lyapunov_core_generic(folding.core, r0, c.transient, c.lyapunov_samples);
    method = "core-finite-difference";
  } else {
    value = lyapunov_system(build_system(c), c.init, c.transient, c.lyapunov_samples);
    method = "planar-finite-difference";
  }
  *sink << "system=" << system_name(c) << "\n"
        << "method=" << method << "\n"
        << "transient=" << c.transient << "\n"
        << "samples=" << c.lyapunov_samples << "\n"
        << "lyapunov=" << format_real(value) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Folding and dynamics of planar difference equations", "foldcore"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  struct Command {
    const char* name;
    const char* help;
  };
  const std::vector<Command> commands = {
      {"fold", "print the core and passive equations"},
      {"simulate", "iterate the system and write the orbit as CSV"},
      {"verify", "compare direct orbits with core + passive reconstructions"},
      {"classify", "predict and observe the long-run behaviour"},
      {"sweep", "bifurcation sweep of the quadratic core over b"},
      {"lyapunov", "Lyapunov exponent estimate"},
  };
  Flags flags;
  std::map<std::string, Options> options;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub, flags, options[cmd.name]);
  }

  std::vector<std::string> argv_store = {"foldcore"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig config = resolve(command, flags, options.at(command));
    if (command == "fold") return cmd_fold(config, out);
    if (command == "simulate") return cmd_simulate(config, out, err);
    if (command == "verify") return cmd_verify(config, out);
    if (command == "classify") return cmd_classify(config, out);
    if (command == "sweep") return cmd_sweep(config, out, err);
    return cmd_lyapunov(config, out);
  } catch (const InvalidParam& e) {
    err << "invalid: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const SingularError& e) {
    err << e.what() << "\n";
    return kExitSingular;
  } catch (const OverflowError& e) {
    err << "overflow: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const DegenerateOrbit& e) {
    err << "degenerate orbit: " << e.what() << " (perturb the initial point)\n";
    return kExitInvalid;
  }
}

}  // namespace foldcore
