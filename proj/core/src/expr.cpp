#include "bgw/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

#include "bgw/errors.hpp"

namespace bgw {

class ExprParser {
 public:
  ExprParser(std::string_view text, Expr& out) : text_(text), out_(out) {}

  std::size_t parse_all() {
    skip_ws();
    std::size_t root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw SyntaxError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
    }
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw SyntaxError(pos_, std::string("expected '") + c + "' but input ended");
    }
    if (text_[pos_] != c) {
      throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  std::size_t add(Expr::Node node) {
    out_.nodes_.push_back(std::move(node));
    return out_.nodes_.size() - 1;
  }

  std::size_t binary(Expr::Kind kind, std::size_t lhs, std::size_t rhs) {
    Expr::Node n;
    n.kind = kind;
    n.children = {lhs, rhs};
    n.span = {out_.nodes_[lhs].span.begin, out_.nodes_[rhs].span.end};
    return add(std::move(n));
  }

  std::size_t parse_expr() {
    std::size_t lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Expr::Kind::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(Expr::Kind::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  std::size_t parse_term() {
    std::size_t lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Expr::Kind::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Expr::Kind::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  std::size_t parse_unary() {
    skip_ws();
    std::size_t start = pos_;
    if (accept('-')) {
      std::size_t operand = parse_unary();
      Expr::Node n;
    n.kind = Expr::Kind::kNeg;
      n.children = {operand};
      n.span = {start, out_.nodes_[operand].span.end};
      return add(std::move(n));
    }
    return parse_primary();
  }

  std::size_t parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      std::size_t inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') return parse_call(name, start);
      const auto& vars = out_.variables_;
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end()) throw SyntaxError(start, "unknown variable '" + name + "'");
      Expr::Node n;
    n.kind = Expr::Kind::kVariable;
      n.variable = static_cast<std::size_t>(it - vars.begin());
      n.span = {start, pos_};
      return add(std::move(n));
    }
    throw SyntaxError(pos_, "unexpected character '" + std::string(1, c) + "'");
  }

  std::size_t parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      throw SyntaxError(start, "malformed number");
    }
    Expr::Node n;
    n.kind = Expr::Kind::kNumber;
    n.value = value;
    n.span = {start, pos_};
    return add(std::move(n));
  }

  std::size_t parse_call(const std::string& name, std::size_t start) {
    Expr::Kind kind;
    if (name == "min") {
      kind = Expr::Kind::kMin;
    } else if (name == "max") {
      kind = Expr::Kind::kMax;
    } else if (name == "sqrt") {
      kind = Expr::Kind::kSqrt;
    } else {
      throw SyntaxError(start, "unknown function '" + name + "'");
    }
    expect('(');
    std::vector<std::size_t> args{parse_expr()};
    while (accept(',')) args.push_back(parse_expr());
    expect(')');
    if (kind == Expr::Kind::kSqrt && args.size() != 1) {
      throw SyntaxError(start, "sqrt takes exactly one argument");
    }
    if (kind != Expr::Kind::kSqrt && args.size() < 2) {
      throw SyntaxError(start, name + " takes at least two arguments");
    }
    Expr::Node n;
    n.kind = kind;
    n.children = std::move(args);
    n.span = {start, pos_};
    return add(std::move(n));
  }

  std::string_view text_;
  Expr& out_;
  std::size_t pos_ = 0;
};

Expr Expr::parse(std::string_view text, std::vector<std::string> variables) {
  Expr e;
  e.variables_ = std::move(variables);
  e.source_ = std::string(text);
  ExprParser parser(text, e);
  e.root_ = parser.parse_all();
  return e;
}

Expr Expr::constant(double value, std::vector<std::string> variables) {
  Expr e;
  e.variables_ = std::move(variables);
  Node n;
    n.kind = Kind::kNumber;
  n.value = value;
  e.nodes_.push_back(n);
  e.root_ = 0;
  e.source_ = e.print();
  return e;
}

double Expr::eval(std::span<const double> values) const {
  if (values.size() < variables_.size()) {
    throw Error(ErrorCode::kDomain, "expression expects " + std::to_string(variables_.size()) +
                                        " variables");
  }
  return eval_node(root_, values);
}

double Expr::eval(double a, double b) const {
  const double v[2] = {a, b};
  return eval(std::span<const double>(v, 2));
}

double Expr::eval_node(std::size_t i, std::span<const double> values) const {
  const Node& n = nodes_[i];
  switch (n.kind) {
    case Kind::kNumber: return n.value;
    case Kind::kVariable: return values[n.variable];
    case Kind::kNeg: return -eval_node(n.children[0], values);
    case Kind::kAdd: return eval_node(n.children[0], values) + eval_node(n.children[1], values);
    case Kind::kSub: return eval_node(n.children[0], values) - eval_node(n.children[1], values);
    case Kind::kMul: return eval_node(n.children[0], values) * eval_node(n.children[1], values);
    case Kind::kDiv: {
      double num = eval_node(n.children[0], values);
      double den = eval_node(n.children[1], values);
      if (den == 0.0) {
        throw Error(ErrorCode::kDomain, "division by zero in '" + source_ + "' at offset " +
                                            std::to_string(nodes_[n.children[1]].span.begin));
      }
      return num / den;
    }
    case Kind::kMin:
    case Kind::kMax: {
      double acc = eval_node(n.children[0], values);
      for (std::size_t c = 1; c < n.children.size(); ++c) {
        double v = eval_node(n.children[c], values);
        acc = n.kind == Kind::kMin ? std::min(acc, v) : std::max(acc, v);
      }
      return acc;
    }
    case Kind::kSqrt: {
      double v = eval_node(n.children[0], values);
      if (v < 0.0) {
        throw Error(ErrorCode::kDomain, "sqrt of negative value in '" + source_ + "'");
      }
      return std::sqrt(v);
    }
  }
  return 0.0;
}

std::string Expr::print() const {
  std::string out;
  print_node(root_, out);
  return out;
}

void Expr::print_node(std::size_t i, std::string& out) const {
  const Node& n = nodes_[i];
  auto bin = [&](const char* op) {
    out += '(';
    print_node(n.children[0], out);
    out += op;
    print_node(n.children[1], out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::kNumber: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", std::fabs(n.value));
      if (std::signbit(n.value)) {
        out += "(-";
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      return;
    }
    case Kind::kVariable: out += variables_[n.variable]; return;
    case Kind::kNeg:
      out += "(-";
      print_node(n.children[0], out);
      out += ')';
      return;
    case Kind::kAdd: bin(" + "); return;
    case Kind::kSub: bin(" - "); return;
    case Kind::kMul: bin(" * "); return;
    case Kind::kDiv: bin(" / "); return;
    case Kind::kMin:
    case Kind::kMax:
    case Kind::kSqrt: {
      out += n.kind == Kind::kMin ? "min(" : n.kind == Kind::kMax ? "max(" : "sqrt(";
      for (std::size_t c = 0; c < n.children.size(); ++c) {
        if (c) out += ", ";
        print_node(n.children[c], out);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace bgw
