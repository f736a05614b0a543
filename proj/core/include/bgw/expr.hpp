#pragma once

// Small arithmetic-expression language used for user-supplied mating
// functions and SDE coefficients in config files.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Functions: min, max (two or more arguments), sqrt (one argument).
// Binary operators are left-associative; evaluation uses IEEE double
// arithmetic. Division by zero and sqrt of a negative number raise
// ErrorCode::kDomain.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgw {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Expr {
 public:
  enum class Kind { kNumber, kVariable, kNeg, kAdd, kSub, kMul, kDiv, kMin, kMax, kSqrt };

  struct Node {
    Kind kind = Kind::kNumber;
    double value = 0.0;         // kNumber
    std::size_t variable = 0;   // kVariable: index into the variable list
    std::vector<std::size_t> children;
    SourceSpan span;
  };

  /// Parses `text` with the given variable names (bound positionally at eval).
  static Expr parse(std::string_view text, std::vector<std::string> variables = {"y", "z"});
  static Expr constant(double value, std::vector<std::string> variables = {"y", "z"});

  double eval(std::span<const double> values) const;
  double eval(double a, double b) const;
  double operator()(double a, double b) const { return eval(a, b); }

  /// Fully parenthesised canonical form; parse(print()) reproduces the tree.
  std::string print() const;

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const Node& root() const { return nodes_[root_]; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const std::string& source() const noexcept { return source_; }

 private:
  friend class ExprParser;
  double eval_node(std::size_t i, std::span<const double> values) const;
  void print_node(std::size_t i, std::string& out) const;

  std::vector<Node> nodes_;
  std::size_t root_ = 0;
  std::vector<std::string> variables_;
  std::string source_;
};

}  // namespace bgw
