#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "foldcore/map_expr.hpp"
#include "foldcore/numeric.hpp"

namespace foldcore {

/// An evaluable planar system (n, x, y) -> (x', y').
///
/// Either built from a pair of expressions (f, g) or wraps a hand-coded step
/// such as a catalog system. The step throws SingularError on a vanishing
/// denominator.
class SystemSpec {
 public:
  using StepFn = std::function<Point(std::size_t, Point)>;

  SystemSpec(std::string name, StepFn step) : name_(std::move(name)), step_(std::move(step)) {}

  static SystemSpec from_maps(MapExpr f, MapExpr g, std::string name = "generic",
                              double singular_rel_tol = kSingularRelTol) {
    SystemSpec spec(std::move(name), [f, g, singular_rel_tol](std::size_t n, Point p) {
      return Point{f.eval(n, p.x, p.y, singular_rel_tol), g.eval(n, p.x, p.y, singular_rel_tol)};
    });
    spec.maps_ = std::make_pair(std::move(f), std::move(g));
    return spec;
  }

  Point step(std::size_t n, Point p) const { return step_(n, p); }
  const std::string& name() const noexcept { return name_; }

  /// (f, g) when the system was built from expressions.
  const std::optional<std::pair<MapExpr, MapExpr>>& maps() const noexcept { return maps_; }

 private:
  std::string name_;
  StepFn step_;
  std::optional<std::pair<MapExpr, MapExpr>> maps_;
};

}  // namespace foldcore
