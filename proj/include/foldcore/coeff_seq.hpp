#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace foldcore {

enum class LimitKind { Constant, Periodic, None };

/// Asymptotic behavior of a coefficient sequence.
struct EventualStructure {
  LimitKind kind = LimitKind::None;
  std::size_t period = 0;  // 0 when kind == None
  std::vector<double> limit_values;

  friend bool operator==(const EventualStructure&, const EventualStructure&) = default;
};

/// Smallest p dividing values.size() such that the list is p-periodic.
std::size_t minimal_period(std::span<const double> values);

/// A real sequence indexed by n >= 0. Immutable; copies share state.
///
/// The closed variant set covers the sequences that appear in the rational
/// systems: constants, exact cycles such as (-1)^n, geometric convergence to
/// a constant or a cycle, and finitely many explicit overrides before a rule.
class CoeffSeq {
 public:
  struct Constant {
    double value = 0.0;
  };
  /// Stored at its minimal period.
  struct Periodic {
    std::vector<double> values;
  };
  /// limit(n) + (initial - limit(0)) * decay^n, limit is Constant or Periodic.
  struct Convergent {
    std::shared_ptr<const CoeffSeq> limit;
    double initial = 0.0;
    double decay = 0.5;
  };
  /// prefix[n] for n < prefix.size(), tail(n) afterwards (tail keeps its phase).
  struct Explicit {
    std::vector<double> prefix;
    std::shared_ptr<const CoeffSeq> tail;
  };
  using Repr = std::variant<Constant, Periodic, Convergent, Explicit>;

  CoeffSeq() : CoeffSeq(constant(0.0)) {}

  static CoeffSeq constant(double value);
  /// Throws InvalidParam on an empty list.
  static CoeffSeq periodic(std::vector<double> values);
  /// Throws InvalidParam unless decay is in (0,1) and limit is Constant/Periodic.
  static CoeffSeq convergent(const CoeffSeq& limit, double initial, double decay);
  static CoeffSeq with_prefix(std::vector<double> prefix, const CoeffSeq& tail);

  double value_at(std::size_t n) const;
  double operator()(std::size_t n) const { return value_at(n); }

  EventualStructure eventual_structure() const;

  /// Same value for every n (a Periodic of minimal period 1 counts).
  bool is_constant() const;

  const Repr& repr() const noexcept { return repr_; }

  friend bool operator==(const CoeffSeq& lhs, const CoeffSeq& rhs);

 private:
  explicit CoeffSeq(Repr repr) : repr_(std::move(repr)) {}

  Repr repr_;
};

}  // namespace foldcore
