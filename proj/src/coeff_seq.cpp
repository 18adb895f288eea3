#include "foldcore/coeff_seq.hpp"

#include <cmath>

#include "foldcore/errors.hpp"

namespace foldcore {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::size_t minimal_period(std::span<const double> values) {
  const std::size_t len = values.size();
  for (std::size_t p = 1; p < len; ++p) {
    if (len % p != 0) continue;
    bool periodic = true;
    for (std::size_t k = p; k < len && periodic; ++k) {
      periodic = values[k] == values[k - p];
    }
    if (periodic) return p;
  }
  return len;
}

CoeffSeq CoeffSeq::constant(double value) { return CoeffSeq(Constant{value}); }

CoeffSeq CoeffSeq::periodic(std::vector<double> values) {
  if (values.empty()) throw InvalidParam("periodic sequence needs at least one value");
  values.resize(minimal_period(values));
  return CoeffSeq(Periodic{std::move(values)});
}

CoeffSeq CoeffSeq::convergent(const CoeffSeq& limit, double initial, double decay) {
  if (!(decay > 0.0 && decay < 1.0)) {
    throw InvalidParam("convergent sequence decay must lie in (0,1)");
  }
  const bool limit_ok = std::holds_alternative<Constant>(limit.repr_) ||
                        std::holds_alternative<Periodic>(limit.repr_);
  if (!limit_ok) throw InvalidParam("convergent sequence limit must be constant or periodic");
  return CoeffSeq(Convergent{std::make_shared<const CoeffSeq>(limit), initial, decay});
}

CoeffSeq CoeffSeq::with_prefix(std::vector<double> prefix, const CoeffSeq& tail) {
  return CoeffSeq(Explicit{std::move(prefix), std::make_shared<const CoeffSeq>(tail)});
}

double CoeffSeq::value_at(std::size_t n) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [n](const Periodic& p) { return p.values[n % p.values.size()]; },
          [n](const Convergent& c) {
            const double offset = c.initial - c.limit->value_at(0);
            return c.limit->value_at(n) +
                   offset * std::pow(c.decay, static_cast<double>(n));
          },
          [n](const Explicit& e) {
            return n < e.prefix.size() ? e.prefix[n] : e.tail->value_at(n);
          },
      },
      repr_);
}

EventualStructure CoeffSeq::eventual_structure() const {
  return std::visit(
      Overloaded{
          [](const Constant& c) {
            return EventualStructure{LimitKind::Constant, 1, {c.value}};
          },
          [](const Periodic& p) {
            if (p.values.size() == 1) {
              return EventualStructure{LimitKind::Constant, 1, p.values};
            }
            return EventualStructure{LimitKind::Periodic, p.values.size(), p.values};
          },
          [](const Convergent& c) { return c.limit->eventual_structure(); },
          [](const Explicit& e) { return e.tail->eventual_structure(); },
      },
      repr_);
}

bool CoeffSeq::is_constant() const {
  if (std::holds_alternative<Constant>(repr_)) return true;
  if (const auto* p = std::get_if<Periodic>(&repr_)) return p->values.size() == 1;
  if (const auto* c = std::get_if<Convergent>(&repr_)) {
    return c->limit->is_constant() && c->initial == c->limit->value_at(0);
  }
  const auto& e = std::get<Explicit>(repr_);
  if (!e.tail->is_constant()) return false;
  const double v = e.tail->value_at(0);
  for (double p : e.prefix) {
    if (p != v) return false;
  }
  return true;
}

bool operator==(const CoeffSeq& lhs, const CoeffSeq& rhs) {
  if (lhs.repr_.index() != rhs.repr_.index()) return false;
  return std::visit(
      Overloaded{
          [&](const CoeffSeq::Constant& a) {
            return a.value == std::get<CoeffSeq::Constant>(rhs.repr_).value;
          },
          [&](const CoeffSeq::Periodic& a) {
            return a.values == std::get<CoeffSeq::Periodic>(rhs.repr_).values;
          },
          [&](const CoeffSeq::Convergent& a) {
            const auto& b = std::get<CoeffSeq::Convergent>(rhs.repr_);
            return a.initial == b.initial && a.decay == b.decay && *a.limit == *b.limit;
          },
          [&](const CoeffSeq::Explicit& a) {
            const auto& b = std::get<CoeffSeq::Explicit>(rhs.repr_);
            return a.prefix == b.prefix && *a.tail == *b.tail;
          },
      },
      lhs.repr_);
}

}  // namespace foldcore
