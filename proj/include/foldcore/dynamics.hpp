#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foldcore/orbit.hpp"
#include "foldcore/rational.hpp"
#include "foldcore/scalar_core.hpp"
#include "foldcore/system.hpp"

namespace foldcore {

inline constexpr double kCycleTol = 1e-6;
inline constexpr std::size_t kTransient = 1000;
inline constexpr std::size_t kMaxPeriod = 64;
inline constexpr double kChaosLyapunov = 0.01;

template <class T>
struct CycleReport {
  std::size_t period = 0;
  std::vector<T> cycle;  // the last `period` values of the tail
  double residual = 0.0;
  std::size_t transient_used = 0;
};

/// Smallest q <= max_period with |v[k+q] - v[k]| < abs_tol for every k in
/// [len - 3q, len - q). Points compare by max-norm. Throws InvalidParam if
/// the tail is shorter than 3 * max_period.
std::optional<CycleReport<double>> detect_cycle(std::span<const double> tail,
                                                double abs_tol = kCycleTol,
                                                std::size_t max_period = kMaxPeriod,
                                                std::size_t transient_used = 0);
std::optional<CycleReport<Point>> detect_cycle(std::span<const Point> tail,
                                               double abs_tol = kCycleTol,
                                               std::size_t max_period = kMaxPeriod,
                                               std::size_t transient_used = 0);

/// Throws InvalidParam unless p, q >= 1.
std::size_t lcm_period(std::size_t p, std::size_t q);

/// Mean of ln|2 a r + b| over `samples` iterates of r -> a r^2 + b r after
/// `transient`. Throws InvalidParam when r0 is outside the window or b is
/// outside (0,4), DegenerateOrbit when an averaged iterate has 2ar + b = 0,
/// OverflowError if the orbit escapes.
double lyapunov_core(const QuadraticCoreParams& q, double r0, std::size_t transient,
                     std::size_t samples);

/// Same estimate for an order-1 core using a central difference with the
/// given step for the derivative.
double lyapunov_core_generic(const ScalarCore& core, double r0, std::size_t transient,
                             std::size_t samples, double fd_step = 1e-6);

/// Largest exponent of a planar system: a tangent vector pushed forward with
/// central-difference directional derivatives, renormalised every step.
/// Errors from the step (SingularError) propagate; OverflowError on escape.
double lyapunov_system(const SystemSpec& system, Point init, std::size_t transient,
                       std::size_t samples, double fd_step = 1e-6);

struct SensitivePairStat {
  double max_sep = 0.0;
  /// Minimum separation after it first exceeded `spread`; nullopt if it never did.
  std::optional<double> min_sep_after_spread;
  std::optional<std::size_t> spread_index;
};

/// Separation of two order-1 core orbits started delta apart. Throws
/// InvalidParam if delta is not in (0, 1e-8], OverflowError on escape.
SensitivePairStat sensitive_pair_stat(const ScalarCore& core, double r0, double delta,
                                      std::size_t horizon, double spread = 0.1);

/// Long-run behaviour of an orbit, predicted or observed.
struct Outcome {
  enum class Kind { FixedPoint, Cycle, XAxisLimit, Chaotic, Aperiodic, Unbounded, Singular };
  Kind kind = Kind::Aperiodic;
  std::size_t period = 0;  // Cycle only

  static Outcome of_period(std::size_t q) {
    return q == 1 ? Outcome{Kind::FixedPoint, 1} : Outcome{Kind::Cycle, q};
  }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string to_string(const Outcome& outcome);

enum class Verdict { Agree, Disagree, OutOfScope };
std::string to_string(Verdict verdict);

struct ClassifyOptions {
  std::size_t budget = 10000;
  std::size_t transient = kTransient;
  double cycle_tol = kCycleTol;
  std::size_t max_period = kMaxPeriod;
  double chaos_lyapunov = kChaosLyapunov;
  /// |y| below this over the last window counts as converging to the x-axis.
  double x_axis_tol = 1e-3;
  NumericPolicy policy{};
};

struct ClassifyReport {
  std::string system;
  double r0 = 0.0;
  bool window_ok = false;
  double mu_max = 0.0;
  double mu_mu_max = 0.0;
  double y_bound = 0.0;
  std::size_t alpha_period = 0;
  std::optional<std::size_t> core_period;
  std::optional<double> core_lyapunov;
  Outcome predicted;
  Outcome observed;
  std::optional<std::size_t> observed_period;
  std::optional<double> observed_lyapunov;
  /// x within [mu(mu_max), mu_max] and |y| <= y_bound past the transient.
  /// Only meaningful for the quadratic classifier.
  bool x_confined = false;
  bool y_bounded = false;
  std::size_t horizon = 0;
  Verdict verdict = Verdict::Disagree;
  std::vector<std::string> notes;
};

/// Prediction from the quadratic core and the eventual structure of alpha,
/// checked against the directly iterated RHSC orbit. Throws InvalidParam
/// unless 0 < b < 4, a != 0, alpha_n != 0 and y0 != 0.
ClassifyReport classify_rhsc(const QuadraticCoreParams& q, Point init,
                             const ClassifyOptions& options = {});

/// Same report for the affine-core systems LNA, LAH and LNH. The prediction
/// comes from the affine core, which can never be chaotic.
ClassifyReport classify_affine(const CatalogSystem& system, Point init,
                               const ClassifyOptions& options = {});

/// s_n for s_{n+2} = a s_n + b s_{n+1} + c from (s0, s1), via the roots of
/// lambda^2 - b lambda - a, including repeated roots and the root 1.
double affine_core_closed_form(double a, double b, double c, double s0, double s1,
                               std::size_t n);

struct SweepOptions {
  double a = -1.0;
  double b_from = 2.8;
  double b_to = 4.0;
  double b_step = 0.002;
  std::size_t transient = 500;
  std::size_t samples = 200;
  double cycle_tol = kCycleTol;
  std::size_t max_period = kMaxPeriod;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;

  friend bool operator==(const SweepOptions&, const SweepOptions&) = default;
};

struct SweepRow {
  double b = 0.0;
  std::vector<double> samples;
  double lyapunov = 0.0;
  std::optional<std::size_t> period;
  bool escaped = false;
};

/// Parameter values b_from + i * b_step below b_to. Throws InvalidParam on an
/// empty range, b_step <= 0, a == 0 or a range outside (0, 4].
std::vector<double> sweep_parameters(const SweepOptions& options);

/// For every b: iterate the core from the critical point -b/(2a), drop the
/// transient, keep the samples and the Lyapunov estimate over them. Rows
/// are ordered by b regardless of the thread count.
std::vector<SweepRow> bifurcation_sweep(const SweepOptions& options);

}  // namespace foldcore
