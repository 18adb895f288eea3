#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "foldcore/coeff_seq.hpp"
#include "foldcore/dynamics.hpp"
#include "foldcore/map_expr.hpp"
#include "foldcore/rational.hpp"

namespace foldcore {

enum class SystemKind { Catalog, Generic, Semilinear };

struct Tolerances {
  double singular = kSingularRelTol;
  double cycle = kCycleTol;
  double consistency = 1e-9;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// x' = a_n x + b_n y + c_n, y' = g(n, x, y)
struct SemilinearSpec {
  CoeffSeq a = CoeffSeq::constant(0.0);
  CoeffSeq b = CoeffSeq::constant(1.0);
  CoeffSeq c = CoeffSeq::constant(0.0);
  MapExpr g;

  friend bool operator==(const SemilinearSpec&, const SemilinearSpec&) = default;
};

/// Everything a CLI run needs. Unused sections keep their defaults.
struct RunConfig {
  SystemKind kind = SystemKind::Catalog;
  CatalogSystem catalog;
  MapExpr f = MapExpr::u();
  MapExpr g = MapExpr::v();
  SemilinearSpec semilinear;
  /// Fold on the second map by exchanging x and y (generic systems only).
  bool fold_on_g = false;

  Point init{0.7, 1.0};
  std::size_t steps = 100;
  Tolerances tolerances;
  std::uint64_t seed = 1;
  std::string output = "-";
  std::size_t verify_samples = 25;
  std::size_t chaotic_horizon = 30;
  std::size_t transient = kTransient;
  std::size_t budget = 10000;
  std::size_t max_period = kMaxPeriod;
  std::size_t lyapunov_samples = 100000;
  SweepOptions sweep;

  /// Throws InvalidParam on non-positive tolerances, zero steps and the like.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// {"kind":"constant","value":v}, {"kind":"periodic","values":[...]},
/// {"kind":"convergent","limit":{...},"initial":x,"decay":d},
/// {"kind":"explicit","prefix":[...],"tail":{...}}. A bare number reads as a
/// constant and a bare array as a periodic sequence.
nlohmann::json coeff_to_json(const CoeffSeq& seq);
CoeffSeq coeff_from_json(const nlohmann::json& j);

/// Expressions: numbers, "u", "v", {"coef":seq,"label":s,"shift":k},
/// {"op":"+|-|*|/","args":[l,r]}, {"op":"neg","args":[e]},
/// {"op":"pow","args":[e],"exp":k}, {"call":e,"shift":k,"args":[l,r]},
/// {"ratio":seq}, {"affine":[a,b,c]}, {"linfrac":[p,q,r,s]}.
nlohmann::json expr_to_json(const MapExpr& expr);
MapExpr expr_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const RunConfig& config);
/// Missing keys keep their defaults. Throws InvalidParam on malformed input.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

std::string serialize_config(const RunConfig& config);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// "1", "1,-1" or a JSON coefficient object.
CoeffSeq parse_coeff_arg(const std::string& text);

}  // namespace foldcore
