#include "foldcore/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "foldcore/errors.hpp"

namespace foldcore {

using nlohmann::json;

namespace {

using Kind = MapExpr::Kind;

double get_real(const json& j, const char* key) {
  if (!j.is_number()) throw InvalidParam(std::string("'") + key + "' must be a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InvalidParam(std::string("'") + key + "' must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::vector<double> get_reals(const json& j, const char* key) {
  if (!j.is_array()) throw InvalidParam(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_real(v, key));
  return out;
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidParam(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

json rational_to_json(const RationalParams& p) {
  return {{"alpha", coeff_to_json(p.alpha)},     {"beta", coeff_to_json(p.beta)},
          {"A", coeff_to_json(p.A)},             {"alpha_p", coeff_to_json(p.alpha_p)},
          {"beta_p", coeff_to_json(p.beta_p)},   {"B", coeff_to_json(p.B)}};
}

RationalParams rational_from_json(const json& j, RationalParams p) {
  if (!j.is_object()) throw InvalidParam("'rh' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha") p.alpha = coeff_from_json(value);
    else if (key == "beta") p.beta = coeff_from_json(value);
    else if (key == "A") p.A = coeff_from_json(value);
    else if (key == "alpha_p") p.alpha_p = coeff_from_json(value);
    else if (key == "beta_p") p.beta_p = coeff_from_json(value);
    else if (key == "B") p.B = coeff_from_json(value);
    else throw InvalidParam("unknown key 'rh." + key + "'");
  }
  return p;
}

const char* op_name(Kind kind) {
  switch (kind) {
    case Kind::Add: return "+";
    case Kind::Sub: return "-";
    case Kind::Mul: return "*";
    case Kind::Div: return "/";
    default: return "";
  }
}

}  // namespace

json coeff_to_json(const CoeffSeq& seq) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CoeffSeq::Constant>) {
          return {{"kind", "constant"}, {"value", r.value}};
        } else if constexpr (std::is_same_v<T, CoeffSeq::Periodic>) {
          return {{"kind", "periodic"}, {"values", r.values}};
        } else if constexpr (std::is_same_v<T, CoeffSeq::Convergent>) {
          return {{"kind", "convergent"},
                  {"limit", coeff_to_json(*r.limit)},
                  {"initial", r.initial},
                  {"decay", r.decay}};
        } else {
          return {{"kind", "explicit"}, {"prefix", r.prefix}, {"tail", coeff_to_json(*r.tail)}};
        }
      },
      seq.repr());
}

CoeffSeq coeff_from_json(const json& j) {
  if (j.is_number()) return CoeffSeq::constant(j.get<double>());
  if (j.is_array()) return CoeffSeq::periodic(get_reals(j, "values"));
  if (!j.is_object()) throw InvalidParam("coefficient must be a number, array or object");
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "constant") return CoeffSeq::constant(get_real(require(j, "value"), "value"));
  if (kind == "periodic") return CoeffSeq::periodic(get_reals(require(j, "values"), "values"));
  if (kind == "convergent") {
    return CoeffSeq::convergent(coeff_from_json(require(j, "limit")),
                                get_real(require(j, "initial"), "initial"),
                                get_real(require(j, "decay"), "decay"));
  }
  if (kind == "explicit") {
    return CoeffSeq::with_prefix(get_reals(require(j, "prefix"), "prefix"),
                                 coeff_from_json(require(j, "tail")));
  }
  throw InvalidParam("unknown coefficient kind '" + kind + "'");
}

json expr_to_json(const MapExpr& e) {
  const auto& ch = e.children();
  switch (e.kind()) {
    case Kind::Number:
      return e.number_value();
    case Kind::Arg:
      return e.arg_index() == 0 ? "u" : "v";
    case Kind::Coef: {
      json out = {{"coef", coeff_to_json(e.coefs()[0])}};
      if (!e.labels()[0].empty()) out["label"] = e.labels()[0];
      if (e.shift() != 0) out["shift"] = e.shift();
      return out;
    }
    case Kind::Neg:
      return {{"op", "neg"}, {"args", {expr_to_json(ch[0])}}};
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
      return {{"op", op_name(e.kind())}, {"args", {expr_to_json(ch[0]), expr_to_json(ch[1])}}};
    case Kind::Pow:
      return {{"op", "pow"}, {"args", {expr_to_json(ch[0])}}, {"exp", e.exponent()}};
    case Kind::Call:
      return {{"call", expr_to_json(ch[0])},
              {"shift", e.shift()},
              {"args", {expr_to_json(ch[1]), expr_to_json(ch[2])}}};
    case Kind::Ratio:
      return {{"ratio", coeff_to_json(e.coefs()[0])}};
    case Kind::Affine:
    case Kind::LinFrac: {
      json list = json::array();
      for (const auto& c : e.coefs()) list.push_back(coeff_to_json(c));
      return {{e.kind() == Kind::Affine ? "affine" : "linfrac", list}};
    }
  }
  throw InvalidParam("unserializable expression");
}

MapExpr expr_from_json(const json& j) {
  if (j.is_number()) return MapExpr::number(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "u" || s == "x") return MapExpr::u();
    if (s == "v" || s == "y") return MapExpr::v();
    throw InvalidParam("unknown variable '" + s + "' (use u or v)");
  }
  if (!j.is_object()) throw InvalidParam("expression must be a number, variable or object");

  auto args = [&](std::size_t count) {
    const json& a = require(j, "args");
    if (!a.is_array() || a.size() != count) {
      throw InvalidParam("expression needs " + std::to_string(count) + " args");
    }
    std::vector<MapExpr> out;
    for (const auto& x : a) out.push_back(expr_from_json(x));
    return out;
  };
  auto coef_list = [&](const char* key, std::size_t count) {
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != count) {
      throw InvalidParam(std::string("'") + key + "' needs " + std::to_string(count) + " coefficients");
    }
    std::vector<CoeffSeq> out;
    for (const auto& x : a) out.push_back(coeff_from_json(x));
    return out;
  };

  if (j.contains("coef")) {
    const std::string label = j.value("label", std::string());
    const std::size_t shift = j.contains("shift") ? get_count(j.at("shift"), "shift") : 0;
    return MapExpr::coef(coeff_from_json(j.at("coef")), label, shift);
  }
  if (j.contains("ratio")) return MapExpr::ratio(coeff_from_json(j.at("ratio")));
  if (j.contains("affine")) {
    auto c = coef_list("affine", 3);
    return MapExpr::affine(c[0], c[1], c[2]);
  }
  if (j.contains("linfrac")) {
    auto c = coef_list("linfrac", 4);
    return MapExpr::linear_fractional(c[0], c[1], c[2], c[3]);
  }
  if (j.contains("call")) {
    const std::size_t shift = j.contains("shift") ? get_count(j.at("shift"), "shift") : 0;
    auto a = args(2);
    return expr_from_json(j.at("call")).call(shift, a[0], a[1]);
  }
  const std::string op = require(j, "op").get<std::string>();
  if (op == "neg") return -args(1)[0];
  if (op == "pow") {
    const json& e = require(j, "exp");
    if (!e.is_number_integer()) throw InvalidParam("'exp' must be an integer");
    return args(1)[0].pow(e.get<int>());
  }
  auto a = args(2);
  if (op == "+") return a[0] + a[1];
  if (op == "-") return a[0] - a[1];
  if (op == "*") return a[0] * a[1];
  if (op == "/") return a[0] / a[1];
  throw InvalidParam("unknown operator '" + op + "'");
}

void RunConfig::validate() const {
  if (steps == 0) throw InvalidParam("steps must be >= 1");
  if (!(tolerances.singular > 0.0 && tolerances.cycle > 0.0 && tolerances.consistency > 0.0)) {
    throw InvalidParam("tolerances must be positive");
  }
  if (verify_samples == 0) throw InvalidParam("verify samples must be >= 1");
  if (chaotic_horizon == 0) throw InvalidParam("chaotic horizon must be >= 1");
  if (max_period == 0) throw InvalidParam("max period must be >= 1");
  if (lyapunov_samples == 0) throw InvalidParam("lyapunov samples must be >= 1");
}

json config_to_json(const RunConfig& c) {
  json j;
  switch (c.kind) {
    case SystemKind::Catalog: j["system"] = to_string(c.catalog.id); break;
    case SystemKind::Generic: j["system"] = "generic"; break;
    case SystemKind::Semilinear: j["system"] = "semilinear"; break;
  }
  j["a"] = c.catalog.a;
  j["b"] = c.catalog.b;
  j["c"] = c.catalog.c;
  j["alpha"] = coeff_to_json(c.catalog.alpha);
  j["rh"] = rational_to_json(c.catalog.rh);
  j["f"] = expr_to_json(c.f);
  j["g"] = expr_to_json(c.g);
  j["semilinear"] = {{"a", coeff_to_json(c.semilinear.a)},
                     {"b", coeff_to_json(c.semilinear.b)},
                     {"c", coeff_to_json(c.semilinear.c)},
                     {"g", expr_to_json(c.semilinear.g)}};
  j["fold_on"] = c.fold_on_g ? "g" : "f";
  j["init"] = {c.init.x, c.init.y};
  j["steps"] = c.steps;
  j["tolerances"] = {{"singular", c.tolerances.singular},
                     {"cycle", c.tolerances.cycle},
                     {"consistency", c.tolerances.consistency}};
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["verify_samples"] = c.verify_samples;
  j["chaotic_horizon"] = c.chaotic_horizon;
  j["transient"] = c.transient;
  j["budget"] = c.budget;
  j["max_period"] = c.max_period;
  j["lyapunov_samples"] = c.lyapunov_samples;
  j["sweep"] = {{"a", c.sweep.a},
                {"b_from", c.sweep.b_from},
                {"b_to", c.sweep.b_to},
                {"b_step", c.sweep.b_step},
                {"transient", c.sweep.transient},
                {"samples", c.sweep.samples},
                {"cycle_tol", c.sweep.cycle_tol},
                {"max_period", c.sweep.max_period},
                {"threads", c.sweep.threads}};
  return j;
}

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw InvalidParam("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "system") {
      const std::string name = v.get<std::string>();
      if (name == "generic") {
        c.kind = SystemKind::Generic;
      } else if (name == "semilinear") {
        c.kind = SystemKind::Semilinear;
      } else {
        c.kind = SystemKind::Catalog;
        c.catalog.id = parse_catalog_id(name);
      }
    } else if (key == "a") {
      c.catalog.a = get_real(v, "a");
    } else if (key == "b") {
      c.catalog.b = get_real(v, "b");
    } else if (key == "c") {
      c.catalog.c = get_real(v, "c");
    } else if (key == "alpha") {
      c.catalog.alpha = coeff_from_json(v);
    } else if (key == "rh") {
      c.catalog.rh = rational_from_json(v, c.catalog.rh);
    } else if (key == "f") {
      c.f = expr_from_json(v);
    } else if (key == "g") {
      c.g = expr_from_json(v);
    } else if (key == "semilinear") {
      if (!v.is_object()) throw InvalidParam("'semilinear' must be an object");
      for (const auto& [k, x] : v.items()) {
        if (k == "a") c.semilinear.a = coeff_from_json(x);
        else if (k == "b") c.semilinear.b = coeff_from_json(x);
        else if (k == "c") c.semilinear.c = coeff_from_json(x);
        else if (k == "g") c.semilinear.g = expr_from_json(x);
        else throw InvalidParam("unknown key 'semilinear." + k + "'");
      }
    } else if (key == "fold_on") {
      const std::string side = v.get<std::string>();
      if (side != "f" && side != "g") throw InvalidParam("'fold_on' must be f or g");
      c.fold_on_g = side == "g";
    } else if (key == "init") {
      const auto xy = get_reals(v, "init");
      if (xy.size() != 2) throw InvalidParam("'init' must be [x0, y0]");
      c.init = {xy[0], xy[1]};
    } else if (key == "steps") {
      c.steps = get_count(v, "steps");
    } else if (key == "tolerances") {
      if (!v.is_object()) throw InvalidParam("'tolerances' must be an object");
      for (const auto& [k, x] : v.items()) {
        if (k == "singular") c.tolerances.singular = get_real(x, "singular");
        else if (k == "cycle") c.tolerances.cycle = get_real(x, "cycle");
        else if (k == "consistency") c.tolerances.consistency = get_real(x, "consistency");
        else throw InvalidParam("unknown key 'tolerances." + k + "'");
      }
    } else if (key == "seed") {
      if (!v.is_number_integer()) throw InvalidParam("'seed' must be an integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "output") {
      c.output = v.get<std::string>();
    } else if (key == "verify_samples") {
      c.verify_samples = get_count(v, "verify_samples");
    } else if (key == "chaotic_horizon") {
      c.chaotic_horizon = get_count(v, "chaotic_horizon");
    } else if (key == "transient") {
      c.transient = get_count(v, "transient");
    } else if (key == "budget") {
      c.budget = get_count(v, "budget");
    } else if (key == "max_period") {
      c.max_period = get_count(v, "max_period");
    } else if (key == "lyapunov_samples") {
      c.lyapunov_samples = get_count(v, "lyapunov_samples");
    } else if (key == "sweep") {
      if (!v.is_object()) throw InvalidParam("'sweep' must be an object");
      for (const auto& [k, x] : v.items()) {
        if (k == "a") c.sweep.a = get_real(x, "sweep.a");
        else if (k == "b_from") c.sweep.b_from = get_real(x, "sweep.b_from");
        else if (k == "b_to") c.sweep.b_to = get_real(x, "sweep.b_to");
        else if (k == "b_step") c.sweep.b_step = get_real(x, "sweep.b_step");
        else if (k == "transient") c.sweep.transient = get_count(x, "sweep.transient");
        else if (k == "samples") c.sweep.samples = get_count(x, "sweep.samples");
        else if (k == "cycle_tol") c.sweep.cycle_tol = get_real(x, "sweep.cycle_tol");
        else if (k == "max_period") c.sweep.max_period = get_count(x, "sweep.max_period");
        else if (k == "threads") c.sweep.threads = static_cast<unsigned>(get_count(x, "sweep.threads"));
        else throw InvalidParam("unknown key 'sweep." + k + "'");
      }
    } else {
      throw InvalidParam("unknown config key '" + key + "'");
    }
  }
  return c;
}

std::string serialize_config(const RunConfig& config) { return config_to_json(config).dump(2); }

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidParam(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw InvalidParam(std::string("bad config value: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParam("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

CoeffSeq parse_coeff_arg(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return coeff_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw InvalidParam(std::string("bad coefficient: ") + e.what());
    }
  }
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidParam("bad coefficient value '" + item + "'");
    }
  }
  if (values.empty()) throw InvalidParam("empty coefficient");
  return values.size() == 1 ? CoeffSeq::constant(values[0]) : CoeffSeq::periodic(values);
}

}  // namespace foldcore
