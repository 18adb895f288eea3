#pragma once

#include <cstddef>
#include <string>

#include "foldcore/map_expr.hpp"

namespace foldcore {

/// A scalar core recursion of order 1 or 2.
///
/// Order 2: s_{n+2} = phi(n, s_n, s_{n+1}), phi uses both arguments.
/// Order 1: r_{k+1} = phi(k, r_k), phi uses argument 0 only. Inside a folding
/// the order-1 core reads s_{n+2} = phi(n, s_{n+1}).
class ScalarCore {
 public:
  static ScalarCore first_order(MapExpr phi) { return ScalarCore(std::move(phi), 1); }
  static ScalarCore second_order(MapExpr phi) { return ScalarCore(std::move(phi), 2); }

  int order() const noexcept { return order_; }
  const MapExpr& expr() const noexcept { return phi_; }

  /// s_{n+2} given (s_n, s_{n+1}) under either order.
  double next(std::size_t n, double s_n, double s_n1,
              double singular_rel_tol = kSingularRelTol) const {
    return order_ == 1 ? phi_.eval(n, s_n1, 0.0, singular_rel_tol)
                       : phi_.eval(n, s_n, s_n1, singular_rel_tol);
  }

  /// One step of an order-1 core.
  double step(std::size_t k, double r, double singular_rel_tol = kSingularRelTol) const {
    return phi_.eval(k, r, 0.0, singular_rel_tol);
  }

  /// phi2(n, u, w): the same recursion written as a second-order map.
  MapExpr as_second_order() const {
    return order_ == 1 ? phi_.call(0, MapExpr::v(), MapExpr::number(0.0)) : phi_;
  }

  /// e.g. "s' = -1*s^2 + 3.5*s (order 1)"
  std::string describe() const {
    if (order_ == 1) return "s' = " + phi_.to_string("s", "s") + " (order 1)";
    return "s'' = " + phi_.to_string("s", "s'") + " (order 2)";
  }

 private:
  ScalarCore(MapExpr phi, int order) : phi_(std::move(phi)), order_(order) {}

  MapExpr phi_;
  int order_;
};

}  // namespace foldcore
