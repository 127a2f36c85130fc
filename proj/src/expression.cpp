#include "penplot/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "penplot/error.hpp"

namespace penplot {

namespace {

enum class Op { constant, x, y, r, neg, add, sub, mul, div, pow, sin, cos, exp, sqrt, abs };

struct Node {
  Op op = Op::constant;
  double value = 0.0;
  int lhs = -1;
  int rhs = -1;
};

// Flat node pool; immutable after parsing, so evaluation is thread-safe.
struct Tree {
  std::vector<Node> nodes;
  int root = -1;

  double eval(int k, double x, double y) const {
    const Node& n = nodes[k];
    switch (n.op) {
      case Op::constant: return n.value;
      case Op::x: return x;
      case Op::y: return y;
      case Op::r: return std::sqrt(x * x + y * y);
      case Op::neg: return -eval(n.lhs, x, y);
      case Op::add: return eval(n.lhs, x, y) + eval(n.rhs, x, y);
      case Op::sub: return eval(n.lhs, x, y) - eval(n.rhs, x, y);
      case Op::mul: return eval(n.lhs, x, y) * eval(n.rhs, x, y);
      case Op::div: return eval(n.lhs, x, y) / eval(n.rhs, x, y);
      case Op::pow: return std::pow(eval(n.lhs, x, y), eval(n.rhs, x, y));
      case Op::sin: return std::sin(eval(n.lhs, x, y));
      case Op::cos: return std::cos(eval(n.lhs, x, y));
      case Op::exp: return std::exp(eval(n.lhs, x, y));
      case Op::sqrt: return std::sqrt(eval(n.lhs, x, y));
      case Op::abs: return std::abs(eval(n.lhs, x, y));
    }
    return 0.0;
  }
};

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Tree run() {
    tree_.root = expr();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return std::move(tree_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    const std::size_t column = pos_ + 1;
    throw Error(Errc::syntax_error, what + " at column " + std::to_string(column), column);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int node(Op op, int lhs = -1, int rhs = -1, double value = 0.0) {
    tree_.nodes.push_back({op, value, lhs, rhs});
    return static_cast<int>(tree_.nodes.size()) - 1;
  }

  int expr() {
    int lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = node(Op::add, lhs, term());
      } else if (accept('-')) {
        lhs = node(Op::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  int term() {
    int lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = node(Op::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = node(Op::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  int unary() {
    if (accept('-')) return node(Op::neg, unary());
    return power();
  }

  int power() {
    const int base = atom();
    if (accept('^')) return node(Op::pow, base, unary());
    return base;
  }

  int atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      const int inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word == "x") return node(Op::x);
      if (word == "y") return node(Op::y);
      if (word == "r") return node(Op::r);
      Op fn;
      if (word == "sin") {
        fn = Op::sin;
      } else if (word == "cos") {
        fn = Op::cos;
      } else if (word == "exp") {
        fn = Op::exp;
      } else if (word == "sqrt") {
        fn = Op::sqrt;
      } else if (word == "abs") {
        fn = Op::abs;
      } else {
        pos_ = start;
        fail("unknown name '" + std::string(word) + "'");
      }
      if (!accept('(')) fail("expected '(' after " + std::string(word));
      const int arg = expr();
      if (!accept(')')) fail("expected ')'");
      return node(fn, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  int number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return node(Op::constant, -1, -1, value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Tree tree_;
};

}  // namespace

ScalarFunction parse_expression(std::string_view text) {
  auto tree = std::make_shared<const Tree>(ExprParser(text).run());
  return [tree](double x, double y) { return tree->eval(tree->root, x, y); };
}

}  // namespace penplot
