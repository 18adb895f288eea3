#include "foldcore/map_expr.hpp"

#include <numeric>
#include <utility>

#include "foldcore/errors.hpp"

namespace foldcore {

namespace {

using Kind = MapExpr::Kind;

std::shared_ptr<MapExpr::Node> make_node(Kind kind) {
  auto node = std::make_shared<MapExpr::Node>();
  node->kind = kind;
  return node;
}

// Precedence levels used by the printer.
constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

struct Rendered {
  std::string text;
  int prec = kPrecAtom;
};

struct RenderContext {
  Rendered args[2];
  std::size_t shift = 0;
};

std::string index_suffix(std::size_t shift) {
  if (shift == 0) return "_n";
  return "_{n+" + std::to_string(shift) + "}";
}

std::string wrap(const Rendered& r, bool needs_parens) {
  return needs_parens ? "(" + r.text + ")" : r.text;
}

Rendered render_real(double value) {
  return {format_real(value), value < 0.0 ? kPrecNeg : kPrecAtom};
}

// Unlabelled constants print as numbers; labelled coefficients stay symbolic.
Rendered render_coef(const CoeffSeq& seq, const std::string& label, std::size_t shift) {
  if (label.empty()) {
    if (seq.is_constant()) return render_real(seq.value_at(0));
    return {"c" + index_suffix(shift), kPrecAtom};
  }
  return {label + index_suffix(shift), kPrecAtom};
}

Rendered render(const MapExpr& e, const RenderContext& ctx);

Rendered render_binary(const char* op, int prec, const Rendered& lhs, const Rendered& rhs,
                       bool right_strict) {
  const bool lp = lhs.prec < prec;
  const bool rp = right_strict ? rhs.prec <= prec : rhs.prec < prec;
  return {wrap(lhs, lp) + op + wrap(rhs, rp), prec};
}

// Atoms print as their arithmetic expansion.
MapExpr expand_atom(const MapExpr& e) {
  const auto& c = e.coefs();
  const auto& l = e.labels();
  switch (e.kind()) {
    case Kind::Ratio:
      return MapExpr::coef(c[0], l[0]) * MapExpr::u() / MapExpr::v();
    case Kind::Affine:
      return MapExpr::coef(c[0], l[0]) * MapExpr::u() +
             MapExpr::coef(c[1], l[1]) * MapExpr::v() + MapExpr::coef(c[2], l[2]);
    case Kind::LinFrac:
      return (MapExpr::coef(c[0], l[0]) * MapExpr::u() + MapExpr::coef(c[1], l[1]) * MapExpr::v()) /
             (MapExpr::coef(c[2], l[2]) * MapExpr::u() + MapExpr::coef(c[3], l[3]) * MapExpr::v());
    default:
      return e;
  }
}

Rendered render(const MapExpr& e, const RenderContext& ctx) {
  const auto& ch = e.children();
  switch (e.kind()) {
    case Kind::Number:
      return render_real(e.number_value());
    case Kind::Coef:
      return render_coef(e.coefs()[0], e.labels()[0], e.shift() + ctx.shift);
    case Kind::Arg:
      return ctx.args[e.arg_index()];
    case Kind::Neg: {
      const Rendered inner = render(ch[0], ctx);
      return {"-" + wrap(inner, inner.prec < kPrecPow), kPrecNeg};
    }
    case Kind::Add:
      return render_binary(" + ", kPrecAdd, render(ch[0], ctx), render(ch[1], ctx), false);
    case Kind::Sub:
      return render_binary(" - ", kPrecAdd, render(ch[0], ctx), render(ch[1], ctx), true);
    case Kind::Mul:
      return render_binary("*", kPrecMul, render(ch[0], ctx), render(ch[1], ctx), false);
    case Kind::Div:
      return render_binary("/", kPrecMul, render(ch[0], ctx), render(ch[1], ctx), true);
    case Kind::Pow: {
      const Rendered base = render(ch[0], ctx);
      return {wrap(base, base.prec < kPrecAtom) + "^" + std::to_string(e.exponent()), kPrecPow};
    }
    case Kind::Call: {
      RenderContext inner;
      inner.args[0] = render(ch[1], ctx);
      inner.args[1] = render(ch[2], ctx);
      inner.shift = ctx.shift + e.shift();
      return render(ch[0], inner);
    }
    case Kind::Ratio:
    case Kind::Affine:
    case Kind::LinFrac:
      return render(expand_atom(e), ctx);
  }
  return {"?", kPrecAtom};
}

double divide(double num, double den, const MapExpr& den_expr, double tol) {
  if (is_singular_denominator(num, den, tol)) throw SingularError(den_expr.to_string(), num, den);
  return num / den;
}

unsigned arg_mask(const MapExpr& e) {
  const auto& ch = e.children();
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Coef:
      return 0u;
    case Kind::Arg:
      return 1u << e.arg_index();
    case Kind::Call: {
      const unsigned fn = arg_mask(ch[0]);
      unsigned mask = 0u;
      if (fn & 1u) mask |= arg_mask(ch[1]);
      if (fn & 2u) mask |= arg_mask(ch[2]);
      return mask;
    }
    case Kind::Ratio:
    case Kind::Affine:
    case Kind::LinFrac:
      return 3u;
    default: {
      unsigned mask = 0u;
      for (const auto& c : ch) mask |= arg_mask(c);
      return mask;
    }
  }
}

}  // namespace

std::string to_string(MapExpr::Kind kind) {
  switch (kind) {
    case Kind::Number: return "number";
    case Kind::Coef: return "coef";
    case Kind::Arg: return "arg";
    case Kind::Neg: return "neg";
    case Kind::Add: return "add";
    case Kind::Sub: return "sub";
    case Kind::Mul: return "mul";
    case Kind::Div: return "div";
    case Kind::Pow: return "pow";
    case Kind::Call: return "call";
    case Kind::Ratio: return "ratio";
    case Kind::Affine: return "affine";
    case Kind::LinFrac: return "linfrac";
  }
  return "unknown";
}

MapExpr MapExpr::number(double value) {
  auto node = make_node(Kind::Number);
  node->number = value;
  return MapExpr(std::move(node));
}

MapExpr MapExpr::coef(CoeffSeq seq, std::string label, std::size_t shift) {
  auto node = make_node(Kind::Coef);
  node->coefs.push_back(std::move(seq));
  node->labels.push_back(std::move(label));
  node->shift = shift;
  return MapExpr(std::move(node));
}

MapExpr MapExpr::arg(int index) {
  if (index != 0 && index != 1) throw InvalidParam("argument index must be 0 or 1");
  auto node = make_node(Kind::Arg);
  node->index = index;
  return MapExpr(std::move(node));
}

MapExpr MapExpr::ratio(CoeffSeq alpha) {
  auto node = make_node(Kind::Ratio);
  node->coefs = {std::move(alpha)};
  node->labels = {"alpha"};
  return MapExpr(std::move(node));
}

MapExpr MapExpr::affine(CoeffSeq a, CoeffSeq b, CoeffSeq c) {
  auto node = make_node(Kind::Affine);
  node->coefs = {std::move(a), std::move(b), std::move(c)};
  node->labels = {"a", "b", "c"};
  return MapExpr(std::move(node));
}

MapExpr MapExpr::linear_fractional(CoeffSeq p, CoeffSeq q, CoeffSeq r, CoeffSeq s) {
  auto node = make_node(Kind::LinFrac);
  node->coefs = {std::move(p), std::move(q), std::move(r), std::move(s)};
  node->labels = {"p", "q", "r", "s"};
  return MapExpr(std::move(node));
}

MapExpr MapExpr::call(std::size_t shift, MapExpr first, MapExpr second) const {
  auto node = make_node(Kind::Call);
  node->shift = shift;
  node->children = {*this, std::move(first), std::move(second)};
  return MapExpr(std::move(node));
}

MapExpr MapExpr::pow(int exponent) const {
  auto node = make_node(Kind::Pow);
  node->index = exponent;
  node->children = {*this};
  return MapExpr(std::move(node));
}

MapExpr MapExpr::binary(Kind kind, const MapExpr& a, const MapExpr& b) {
  auto node = make_node(kind);
  node->children = {a, b};
  return MapExpr(std::move(node));
}

MapExpr operator+(const MapExpr& a, const MapExpr& b) { return MapExpr::binary(Kind::Add, a, b); }
MapExpr operator-(const MapExpr& a, const MapExpr& b) { return MapExpr::binary(Kind::Sub, a, b); }
MapExpr operator*(const MapExpr& a, const MapExpr& b) { return MapExpr::binary(Kind::Mul, a, b); }
MapExpr operator/(const MapExpr& a, const MapExpr& b) { return MapExpr::binary(Kind::Div, a, b); }

MapExpr operator-(const MapExpr& a) {
  auto node = make_node(Kind::Neg);
  node->children = {a};
  return MapExpr(std::move(node));
}

double MapExpr::eval(std::size_t n, double u, double v, double tol) const {
  const Node& node = *node_;
  const auto& ch = node.children;
  switch (node.kind) {
    case Kind::Number:
      return node.number;
    case Kind::Coef:
      return node.coefs[0].value_at(n + node.shift);
    case Kind::Arg:
      return node.index == 0 ? u : v;
    case Kind::Neg:
      return -ch[0].eval(n, u, v, tol);
    case Kind::Add:
      return ch[0].eval(n, u, v, tol) + ch[1].eval(n, u, v, tol);
    case Kind::Sub:
      return ch[0].eval(n, u, v, tol) - ch[1].eval(n, u, v, tol);
    case Kind::Mul:
      return ch[0].eval(n, u, v, tol) * ch[1].eval(n, u, v, tol);
    case Kind::Div:
      return divide(ch[0].eval(n, u, v, tol), ch[1].eval(n, u, v, tol), ch[1], tol);
    case Kind::Pow: {
      const double base = ch[0].eval(n, u, v, tol);
      double result = 1.0;
      for (int k = 0; k < std::abs(node.index); ++k) result *= base;
      return node.index >= 0 ? result : divide(1.0, result, *this, tol);
    }
    case Kind::Call:
      return ch[0].eval(n + node.shift, ch[1].eval(n, u, v, tol), ch[2].eval(n, u, v, tol), tol);
    case Kind::Ratio: {
      const double num = node.coefs[0].value_at(n) * u;
      if (is_singular_denominator(num, v, tol)) throw SingularError("v", num, v);
      return num / v;
    }
    case Kind::Affine:
      return node.coefs[0].value_at(n) * u + node.coefs[1].value_at(n) * v +
             node.coefs[2].value_at(n);
    case Kind::LinFrac: {
      const auto& c = node.coefs;
      const double num = c[0].value_at(n) * u + c[1].value_at(n) * v;
      const double den = c[2].value_at(n) * u + c[3].value_at(n) * v;
      if (is_singular_denominator(num, den, tol)) throw SingularError("r_n*u + s_n*v", num, den);
      return num / den;
    }
  }
  return 0.0;
}

std::string MapExpr::to_string(const std::string& u_name, const std::string& v_name) const {
  RenderContext ctx;
  ctx.args[0] = {u_name, kPrecAtom};
  ctx.args[1] = {v_name, kPrecAtom};
  return render(*this, ctx).text;
}

std::size_t MapExpr::coefficient_period() const {
  std::size_t period = 1;
  for (const auto& seq : node_->coefs) {
    const std::size_t p = seq.eventual_structure().period;
    if (p > 0) period = std::lcm(period, p);
  }
  for (const auto& child : node_->children) period = std::lcm(period, child.coefficient_period());
  return period;
}

bool MapExpr::depends_on(int index) const { return (arg_mask(*this) >> index) & 1u; }

MapExpr::Kind MapExpr::kind() const { return node_->kind; }
double MapExpr::number_value() const { return node_->number; }
int MapExpr::arg_index() const { return node_->index; }
int MapExpr::exponent() const { return node_->index; }
std::size_t MapExpr::shift() const { return node_->shift; }
const std::vector<CoeffSeq>& MapExpr::coefs() const { return node_->coefs; }
const std::vector<std::string>& MapExpr::labels() const { return node_->labels; }
const std::vector<MapExpr>& MapExpr::children() const { return node_->children; }

bool operator==(const MapExpr& a, const MapExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.number == y.number && x.index == y.index &&
         x.shift == y.shift && x.coefs == y.coefs && x.labels == y.labels &&
         x.children == y.children;
}

}  // namespace foldcore
