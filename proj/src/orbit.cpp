#include "foldcore/orbit.hpp"

#include <cmath>

#include "foldcore/errors.hpp"

namespace foldcore {

namespace {

bool out_of_range(double value, double threshold) { return !(std::abs(value) <= threshold); }

}  // namespace

std::string to_string(OrbitStatus status) {
  switch (status) {
    case OrbitStatus::Completed: return "completed";
    case OrbitStatus::Singular: return "singular";
    case OrbitStatus::Overflow: return "overflow";
  }
  return "unknown";
}

Orbit iterate_system(const SystemSpec& system, Point init, std::size_t steps,
                     const NumericPolicy& policy) {
  if (steps == 0) throw InvalidParam("iterate_system needs steps >= 1");
  Orbit orbit;
  orbit.points.reserve(steps + 1);
  if (exceeds(init, policy.overflow)) {
    orbit.status = OrbitStatus::Overflow;
    orbit.detail = "initial point exceeds overflow threshold";
    orbit.points.push_back(init);
    return orbit;
  }
  orbit.points.push_back(init);
  Point p = init;
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      p = system.step(k, p);
    } catch (const SingularError& e) {
      if (e.quotient_exceeds(policy.overflow)) {
        orbit.status = OrbitStatus::Overflow;
        orbit.stop_index = k + 1;
        orbit.detail = "|x| or |y| exceeded " + format_real(policy.overflow) + " (" +
                       e.denominator() + " small against its numerator)";
        return orbit;
      }
      orbit.status = OrbitStatus::Singular;
      orbit.stop_index = k;
      orbit.detail = e.denominator();
      return orbit;
    }
    if (exceeds(p, policy.overflow)) {
      orbit.status = OrbitStatus::Overflow;
      orbit.stop_index = k + 1;
      orbit.detail = "|x| or |y| exceeded " + format_real(policy.overflow);
      return orbit;
    }
    orbit.points.push_back(p);
  }
  return orbit;
}

CoreRun iterate_core(const ScalarCore& core, double s0, std::optional<double> s1,
                     std::size_t steps, const NumericPolicy& policy) {
  if (core.order() == 2 && !s1) throw InvalidParam("order-2 core needs two initial values");
  if (core.order() == 1 && s1) throw InvalidParam("order-1 core takes one initial value");

  CoreRun run;
  run.values.reserve(steps + 2);
  run.values.push_back(s0);
  if (s1) run.values.push_back(*s1);
  for (double v : run.values) {
    if (out_of_range(v, policy.overflow)) {
      run.status = OrbitStatus::Overflow;
      run.detail = "initial value exceeds overflow threshold";
      return run;
    }
  }
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t last = run.values.size() - 1;
    double next = 0.0;
    try {
      next = core.order() == 1
                 ? core.step(k, run.values[last], policy.singular_rel_tol)
                 : core.next(k, run.values[last - 1], run.values[last], policy.singular_rel_tol);
    } catch (const SingularError& e) {
      if (e.quotient_exceeds(policy.overflow)) {
        run.status = OrbitStatus::Overflow;
        run.stop_index = last + 1;
        run.detail = "|s| exceeded " + format_real(policy.overflow) + " (" + e.denominator() +
                     " small against its numerator)";
        return run;
      }
      run.status = OrbitStatus::Singular;
      run.stop_index = last;
      run.detail = e.denominator();
      return run;
    }
    if (out_of_range(next, policy.overflow)) {
      run.status = OrbitStatus::Overflow;
      run.stop_index = last + 1;
      run.detail = "|s| exceeded " + format_real(policy.overflow);
      return run;
    }
    run.values.push_back(next);
  }
  return run;
}

}  // namespace foldcore
