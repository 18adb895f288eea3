#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "foldcore/coeff_seq.hpp"
#include "foldcore/folding.hpp"
#include "foldcore/map_expr.hpp"
#include "foldcore/numeric.hpp"
#include "foldcore/system.hpp"

namespace foldcore {

/// Coefficients of the general homogeneous rational system
///   x' = (alpha_n x + beta_n y) / (A_n x + y)
///   y' = (alpha'_n x + beta'_n y) / (x + B_n y)
struct RationalParams {
  CoeffSeq alpha = CoeffSeq::constant(1.0);
  CoeffSeq beta = CoeffSeq::constant(0.0);
  CoeffSeq A = CoeffSeq::constant(0.0);
  CoeffSeq alpha_p = CoeffSeq::constant(0.0);
  CoeffSeq beta_p = CoeffSeq::constant(1.0);
  CoeffSeq B = CoeffSeq::constant(1.0);

  friend bool operator==(const RationalParams&, const RationalParams&) = default;
};

/// Parameters of the quadratic-core reduction: A = alpha' = beta = 0 with
/// beta'_n = alpha_{n+1} / (a alpha_n) and B_n = b / (a alpha_n).
struct QuadraticCoreParams {
  double a = -1.0;
  double b = 3.5;
  CoeffSeq alpha = CoeffSeq::constant(1.0);

  /// Throws InvalidParam if a == 0 or alpha_n == 0 for a sampled n < horizon.
  void validate(std::size_t horizon = 64) const;

  double beta_p(std::size_t n) const { return alpha(n + 1) / (a * alpha(n)); }
  double B(std::size_t n) const { return b / (a * alpha(n)); }

  /// The general-system parameters this reduction instantiates. beta' and B
  /// are materialised as explicit prefixes of length `horizon`; beyond it the
  /// tail uses the eventual structure of alpha.
  RationalParams to_rational(std::size_t horizon) const;

  double mu_max() const { return -b * b / (4.0 * a); }
  /// mu(mu_max) = -(b^3 / 4a)(1 - b/4)
  double mu_mu_max() const { return -(b * b * b / (4.0 * a)) * (1.0 - b / 4.0); }
  /// 16 / (b^2 (4 - b)); multiply by sup |alpha_n|.
  double y_bound_factor() const { return 16.0 / (b * b * (4.0 - b)); }
  /// Open window for r0 = alpha_0 x0 / y0: (0, -b/a) if a < 0, (-b/a, 0) if a > 0.
  std::pair<double, double> window() const;
  bool in_window(double r0) const;
};

enum class CatalogId { RH, RHSC, RNH, MHS, COCH, LNA, LAH, LNH };

std::string to_string(CatalogId id);
/// Throws InvalidParam on an unknown name.
CatalogId parse_catalog_id(std::string_view name);

/// A catalog entry in (a, b, c, alpha) form; RH uses `rh` instead.
///   RHSC: x' = alpha_n x/y, y' = beta'_n y/(x + B_n y)
///   RNH:  x' = alpha_n x/y, y' = alpha_n alpha_{n+1} / ((a x + b) y)
///   LNA:  x' = alpha_n x/y, y' = alpha_n alpha_{n+1} x / (alpha_n b x + (a x + c) y)
///   MHS, COCH, LAH, LNH are the autonomous versions with constant alpha.
struct CatalogSystem {
  CatalogId id = CatalogId::RHSC;
  double a = -1.0;
  double b = 3.5;
  double c = 0.0;
  CoeffSeq alpha = CoeffSeq::constant(1.0);
  RationalParams rh;

  /// Throws InvalidParam when the id's parameter constraints fail.
  void validate() const;
  QuadraticCoreParams quadratic() const { return {a, b, alpha}; }

  friend bool operator==(const CatalogSystem&, const CatalogSystem&) = default;
};

/// Derived (alpha, beta, gamma) view of the autonomous systems:
///   MHS:  y' = beta y/(x + gamma y),   beta = 1/a,      gamma = b/(a alpha)
///   COCH: y' = beta/((x + gamma) y),   beta = alpha^2/a, gamma = b/a
///   LAH:  y' = beta x/(x + gamma y),   beta = alpha/b,   gamma = c/(alpha b)
///   LNH:  y' = beta x/((x + gamma) y), beta = alpha^2/a, gamma = c/a
struct GreekParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
};

GreekParams greek_view(const CatalogSystem& system);
CatalogSystem from_greek(CatalogId id, const GreekParams& greek);

Point step_rh(const RationalParams& p, std::size_t n, Point pt,
              double singular_rel_tol = kSingularRelTol);

/// y_n = x (alpha_n - A_n x_next) / (x_next - beta_n)
double passive_rh(const RationalParams& p, std::size_t n, double x, double x_next,
                  double singular_rel_tol = kSingularRelTol);

/// The first-order core: x_{n+2} as a rational function of s = x_{n+1}.
double core_rh(const RationalParams& p, std::size_t n, double s,
               double singular_rel_tol = kSingularRelTol);

Point step_catalog(const CatalogSystem& system, std::size_t n, Point pt,
                   double singular_rel_tol = kSingularRelTol);

/// mu(r) = a r^2 + b r
inline double quadratic_core_step(double a, double b, double r) { return a * r * r + b * r; }

inline double logistic_step(double b, double t) { return b * t * (1.0 - t); }

/// t = -a r / b. Throws InvalidParam if b == 0.
double logistic_conjugate(const QuadraticCoreParams& q, double r);

/// The system as a SystemSpec driven by step_catalog.
SystemSpec catalog_spec(const CatalogSystem& system, double singular_rel_tol = kSingularRelTol);

/// (f, g) written in the expression grammar.
std::pair<MapExpr, MapExpr> catalog_maps(const CatalogSystem& system);

/// Closed-form folding with the reduced core.
Folding catalog_folding(const CatalogSystem& system);

/// Whether the catalog entry folds to the quadratic core a s^2 + b s (in
/// either its first-order or skip form).
bool has_quadratic_core(CatalogId id);

}  // namespace foldcore
