#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perron {

using cplx = std::complex<double>;

/// Immutable expression tree in the single variable t.
///
/// Grammar (precedence low to high): `+ -` (left), `* /` (left), unary `-`, `^` (right).
/// Atoms: `t`, `pi`, numbers (`2`, `0.5`, `1e-3`, imaginary `2i`), parenthesised
/// expressions and calls `sqrt cbrt exp log sin cos abs` (one argument) or `pow(b, e)`.
class Expr {
 public:
  enum class Kind { kVar, kNumber, kPi, kAdd, kSub, kMul, kDiv, kPow, kNeg, kCall };
  enum class Func { kSqrt, kCbrt, kExp, kLog, kSin, kCos, kAbs, kPow };

  struct Rational {
    long long num;
    long long den;
    friend bool operator==(const Rational&, const Rational&) = default;
  };

  struct Node {
    Kind kind;
    cplx number{};
    Func func{};
    std::vector<std::shared_ptr<const Node>> args;
    /// Set on power nodes whose exponent folds to a small rational constant.
    std::optional<Rational> rational;
  };

  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Expr number(cplx v);
  static Expr variable();

  bool empty() const { return node_ == nullptr; }
  const Node& node() const { return *node_; }

  /// Throws EvalError on division by zero or log of a non-positive real.
  cplx evaluate(double t) const;
  /// True if the tree does not mention t (and is not empty).
  bool is_constant() const;
  /// Canonical text that parses back to a structurally identical tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const Node> node_;
};

/// Throws ParseError with the byte offset and the expected-token set.
Expr parse_expr(std::string_view text);

}  // namespace perron
