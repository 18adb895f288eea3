#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "foldcore/coeff_seq.hpp"
#include "foldcore/map_expr.hpp"
#include "foldcore/orbit.hpp"
#include "foldcore/scalar_core.hpp"
#include "foldcore/system.hpp"

namespace foldcore {

/// Carrier groups for separable maps: (R,+) and (R\{0},*).
enum class Group { Additive, Multiplicative };

/// A per-index bijection of the reals with a closed-form inverse, used as
/// the second factor of a separable map. Expressions are in argument 0.
class Bijection {
 public:
  /// v -> scale_n * v + offset_n
  static Bijection affine(CoeffSeq scale, CoeffSeq offset = CoeffSeq::constant(0.0));
  /// v -> scale_n / v
  static Bijection reciprocal(CoeffSeq scale = CoeffSeq::constant(1.0));

  const MapExpr& forward() const noexcept { return forward_; }
  const MapExpr& inverse() const noexcept { return inverse_; }

 private:
  Bijection(MapExpr forward, MapExpr inverse)
      : forward_(std::move(forward)), inverse_(std::move(inverse)) {}

  MapExpr forward_;
  MapExpr inverse_;
};

/// h with h(n, u, f(n, u, v)) = v on the declared domain. The domain
/// predicate is "every denominator clears the singularity threshold".
class SemiInversion {
 public:
  explicit SemiInversion(MapExpr h);

  double operator()(std::size_t n, double u, double w,
                    double singular_rel_tol = kSingularRelTol) const {
    return h_.eval(n, u, w, singular_rel_tol);
  }
  bool valid_at(std::size_t n, double u, double w,
                double singular_rel_tol = kSingularRelTol) const;

  const MapExpr& expr() const noexcept { return h_; }
  /// lcm of the eventual periods of the coefficients of h (1 if autonomous).
  std::size_t period() const noexcept { return period_; }

 private:
  MapExpr h_;
  std::size_t period_;
};

/// f = f1 * f2 where f1 uses argument 0.
MapExpr separable_map(const MapExpr& f1, const Bijection& f2, Group group);

/// h(n,u,w) = f2^{-1}(n, [f1(n,u)]^{-1} * w). Spot-checks that f2 really is
/// invertible and throws InvalidParam otherwise. Evaluating h where
/// f1(n,u) = 0 in the multiplicative group throws SingularError.
SemiInversion semi_invert_separable(const MapExpr& f1, const Bijection& f2, Group group);

/// (p u + q v)/(r u + s v) solved for v: u (p - r w)/(s w - q).
SemiInversion semi_invert_linear_fractional(const CoeffSeq& p, const CoeffSeq& q,
                                            const CoeffSeq& r, const CoeffSeq& s);

/// Semi-inversion read off a catalog atom (ratio, affine, linear-fractional)
/// or an atom with its arguments swapped. nullopt for anything else.
std::optional<SemiInversion> semi_invert_catalog(const MapExpr& f);

/// Core + passive pair. `f` is kept for the initial rule s_1 = f(0, x0, y0).
struct Folding {
  MapExpr f;
  ScalarCore core;
  SemiInversion passive;

  std::string passive_text() const {
    return "y_n = " + passive.expr().to_string("x_n", "x_{n+1}");
  }
  static std::string init_rule() { return "s_0 = x_0, s_1 = f(0, x_0, y_0)"; }
};

/// phi(n,u,w) = f(n+1, w, g(n, u, h(n,u,w))). The core is returned in
/// second-order form.
Folding fold(const MapExpr& f, const MapExpr& g, const SemiInversion& h);

/// Folding of x' = a_n x + b_n y + c_n, y' = g(n,x,y). Throws InvalidParam
/// ("b_n must be a unit") when a scanned b_n is zero.
Folding fold_semilinear(const CoeffSeq& a, const CoeffSeq& b, const CoeffSeq& c,
                        const MapExpr& g);

/// s_0 .. s_{steps+1} generated from (x0, y0) by the folding's core.
CoreRun solve_core(const Folding& folding, Point init, std::size_t steps,
                   const NumericPolicy& policy = {});

/// (s_n, h(n, s_n, s_{n+1})) for n = 0 .. len-2. Throws InvalidParam on a
/// solution shorter than 2; a singular passive evaluation truncates.
Orbit reconstruct_orbit(const Folding& folding, std::span<const double> core_solution,
                        const NumericPolicy& policy = {});

/// g(n,u,v) = h(n+1, f(n,u,v), phi(n, u, f(n,u,v))) for a second-order phi.
MapExpr unfold_general(const MapExpr& f, const SemiInversion& h, const MapExpr& phi);

/// g(n,u,v) = h(n+1, f(n,u,v), phi(n, f(n,u,v))) for a one-variable phi.
MapExpr unfold_order1(const MapExpr& f, const SemiInversion& h, const MapExpr& phi);

/// g(n,u,v) = h(n+1, f(n,u,v), phi(n, u)); the core becomes s_{n+2} = phi(n, s_n).
MapExpr unfold_skip(const MapExpr& f, const SemiInversion& h, const MapExpr& phi);

/// unfold_general with phi(u,w) = a u + b w + c. Throws InvalidParam if a = b = 0.
MapExpr unfold_affine(const MapExpr& f, const SemiInversion& h, double a, double b, double c);

struct ConsistencyReport {
  double max_diff = 0.0;
  bool pass = false;
  std::size_t steps = 0;
  Orbit direct;
  Orbit reconstructed;
  /// Empty when both sides completed; otherwise names the side and index.
  std::string early_stop;
};

/// Direct orbit vs. core + passive reconstruction over `steps` steps.
ConsistencyReport check_fold_consistency(const SystemSpec& system, const Folding& folding,
                                         Point init, std::size_t steps, double tol,
                                         const NumericPolicy& policy = {});

}  // namespace foldcore
