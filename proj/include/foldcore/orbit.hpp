#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "foldcore/numeric.hpp"
#include "foldcore/scalar_core.hpp"
#include "foldcore/system.hpp"

namespace foldcore {

enum class OrbitStatus { Completed, Singular, Overflow };
enum class Provenance { Direct, Reconstructed };

std::string to_string(OrbitStatus status);

/// A finite trajectory. On Singular, `stop_index` is the index whose step
/// could not be evaluated (points[stop_index] is the last point). On
/// Overflow, `stop_index` is the first index whose value exceeded the
/// threshold; that value is not stored.
struct Orbit {
  std::vector<Point> points;
  OrbitStatus status = OrbitStatus::Completed;
  std::size_t stop_index = 0;
  std::string detail;
  Provenance provenance = Provenance::Direct;
};

/// Scalar analogue of Orbit for core recursions.
struct CoreRun {
  std::vector<double> values;
  OrbitStatus status = OrbitStatus::Completed;
  std::size_t stop_index = 0;
  std::string detail;
};

/// points[0] = init, points[k+1] = step(k, points[k]); stops on the first
/// singular step or overflow. Throws InvalidParam when steps == 0.
Orbit iterate_system(const SystemSpec& system, Point init, std::size_t steps,
                     const NumericPolicy& policy = {});

/// Runs `steps` applications of the core. An order-2 core needs `s1`; an
/// order-1 core must not get one.
CoreRun iterate_core(const ScalarCore& core, double s0, std::optional<double> s1,
                     std::size_t steps, const NumericPolicy& policy = {});

}  // namespace foldcore
