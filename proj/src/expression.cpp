#include "sasaki/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "sasaki/errors.hpp"

namespace sasaki {

struct ExprNode {
  enum class Kind { number, var, neg, add, sub, mul, div, pow, sin, cos, exp, log };
  Kind kind = Kind::number;
  double value = 0.0;
  std::vector<std::shared_ptr<const ExprNode>> args;

  double eval(double x) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::var: return x;
      case Kind::neg: return -args[0]->eval(x);
      case Kind::add: return args[0]->eval(x) + args[1]->eval(x);
      case Kind::sub: return args[0]->eval(x) - args[1]->eval(x);
      case Kind::mul: return args[0]->eval(x) * args[1]->eval(x);
      case Kind::div: return args[0]->eval(x) / args[1]->eval(x);
      case Kind::pow: return std::pow(args[0]->eval(x), args[1]->eval(x));
      case Kind::sin: return std::sin(args[0]->eval(x));
      case Kind::cos: return std::cos(args[0]->eval(x));
      case Kind::exp: return std::exp(args[0]->eval(x));
      case Kind::log: return std::log(args[0]->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprNode::Kind k, std::vector<NodePtr> args, double v = 0.0) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->value = v;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + s_ + "': " + msg + " at position " +
                      std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(ExprNode::Kind::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(ExprNode::Kind::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(ExprNode::Kind::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(ExprNode::Kind::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(ExprNode::Kind::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(ExprNode::Kind::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(ExprNode::Kind::number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return make(ExprNode::Kind::var, {});
      ExprNode::Kind k;
      if (name == "sin") {
        k = ExprNode::Kind::sin;
      } else if (name == "cos") {
        k = ExprNode::Kind::cos;
      } else if (name == "exp") {
        k = ExprNode::Kind::exp;
      } else if (name == "log") {
        k = ExprNode::Kind::log;
      } else if (name == "pow") {
        expect('(');
        NodePtr a = expr();
        expect(',');
        NodePtr b = expr();
        expect(')');
        return make(ExprNode::Kind::pow, {a, b});
      } else {
        pos_ = start;
        fail("unknown name '" + name + "'");
      }
      expect('(');
      NodePtr a = expr();
      expect(')');
      return make(k, {a});
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

BasicPotential Expression::sample(const GridPtr& grid) const {
  return BasicPotential::sample(grid, [this](double x) { return (*this)(x); });
}

}  // namespace sasaki
