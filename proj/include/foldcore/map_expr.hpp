#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "foldcore/coeff_seq.hpp"
#include "foldcore/numeric.hpp"

namespace foldcore {

/// A scalar map (n, u, v) -> real in a closed expression grammar.
///
/// Leaves are literals, coefficient sequences (optionally index-shifted) and
/// the two arguments. Interior nodes are arithmetic, integer powers, and
/// `Call`, which evaluates another expression at index n + shift with its
/// arguments replaced by sub-expressions. The three catalog atoms (ratio,
/// affine, linear-fractional) are kept as dedicated nodes so a semi-inversion
/// can be read off them.
///
/// Every division checks its denominator against the singularity threshold
/// and throws SingularError instead of returning inf/nan.
class MapExpr {
 public:
  enum class Kind {
    Number,
    Coef,
    Arg,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Call,
    Ratio,    // alpha_n * u / v
    Affine,   // a_n * u + b_n * v + c_n
    LinFrac,  // (p_n * u + q_n * v) / (r_n * u + s_n * v)
  };

  struct Node;

  MapExpr() : MapExpr(number(0.0)) {}

  static MapExpr number(double value);
  /// An empty label prints constants as numbers; otherwise `label_n`.
  static MapExpr coef(CoeffSeq seq, std::string label = "", std::size_t shift = 0);
  static MapExpr arg(int index);
  static MapExpr u() { return arg(0); }
  static MapExpr v() { return arg(1); }

  static MapExpr ratio(CoeffSeq alpha);
  static MapExpr affine(CoeffSeq a, CoeffSeq b, CoeffSeq c);
  static MapExpr linear_fractional(CoeffSeq p, CoeffSeq q, CoeffSeq r, CoeffSeq s);

  /// this(n + shift, first(n,u,v), second(n,u,v))
  MapExpr call(std::size_t shift, MapExpr first, MapExpr second) const;
  MapExpr shifted(std::size_t shift) const { return call(shift, u(), v()); }
  MapExpr pow(int exponent) const;

  friend MapExpr operator+(const MapExpr& a, const MapExpr& b);
  friend MapExpr operator-(const MapExpr& a, const MapExpr& b);
  friend MapExpr operator*(const MapExpr& a, const MapExpr& b);
  friend MapExpr operator/(const MapExpr& a, const MapExpr& b);
  friend MapExpr operator-(const MapExpr& a);

  double eval(std::size_t n, double u, double v,
              double singular_rel_tol = kSingularRelTol) const;
  double operator()(std::size_t n, double u, double v) const { return eval(n, u, v); }

  /// Infix rendering; argument names are substituted verbatim.
  std::string to_string(const std::string& u_name = "u",
                        const std::string& v_name = "v") const;

  /// lcm of the eventual periods of every coefficient in the tree (1 if none).
  std::size_t coefficient_period() const;

  /// Structural dependence on argument 0 / 1 (through Call substitutions).
  bool depends_on(int index) const;

  Kind kind() const;
  double number_value() const;
  int arg_index() const;
  int exponent() const;
  std::size_t shift() const;
  const std::vector<CoeffSeq>& coefs() const;
  const std::vector<std::string>& labels() const;
  const std::vector<MapExpr>& children() const;

  friend bool operator==(const MapExpr& a, const MapExpr& b);

 private:
  explicit MapExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static MapExpr binary(Kind kind, const MapExpr& a, const MapExpr& b);

  std::shared_ptr<const Node> node_;
};

struct MapExpr::Node {
  Kind kind = Kind::Number;
  double number = 0.0;
  int index = 0;           // Arg: argument index; Pow: exponent
  std::size_t shift = 0;   // Coef, Call: index shift
  std::vector<CoeffSeq> coefs;
  std::vector<std::string> labels;
  std::vector<MapExpr> children;
};

std::string to_string(MapExpr::Kind kind);

}  // namespace foldcore
