#include "curvewave/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <locale>
#include <numbers>
#include <sstream>

#include "curvewave/error.hpp"

namespace curvewave {

struct Expression::Node {
  enum class Kind { Number, X, Y, T, Unary, Binary, Call, If };
  Kind kind = Kind::Number;
  double value = 0.0;
  char op = 0;  // '+', '-', '*', '/', '^', '<', 'l' (<=), '>', 'g' (>=), '=', '!', '&', '|', 'n' (not)
  std::function<double(double)> fn1;
  std::function<double(double, double)> fn2;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double x, double y, double t) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::X: return x;
      case Kind::Y: return y;
      case Kind::T: return t;
      case Kind::Unary: {
        const double a = args[0]->eval(x, y, t);
        return op == '-' ? -a : (a == 0.0 ? 1.0 : 0.0);
      }
      case Kind::Binary: {
        const double a = args[0]->eval(x, y, t);
        if (op == '&') return (a != 0.0 && args[1]->eval(x, y, t) != 0.0) ? 1.0 : 0.0;
        if (op == '|') return (a != 0.0 || args[1]->eval(x, y, t) != 0.0) ? 1.0 : 0.0;
        const double b = args[1]->eval(x, y, t);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          case '^': return std::pow(a, b);
          case '<': return a < b ? 1.0 : 0.0;
          case 'l': return a <= b ? 1.0 : 0.0;
          case '>': return a > b ? 1.0 : 0.0;
          case 'g': return a >= b ? 1.0 : 0.0;
          case '=': return a == b ? 1.0 : 0.0;
          case '!': return a != b ? 1.0 : 0.0;
        }
        return 0.0;
      }
      case Kind::Call:
        if (fn1) return fn1(args[0]->eval(x, y, t));
        return fn2(args[0]->eval(x, y, t), args[1]->eval(x, y, t));
      case Kind::If:
        return args[0]->eval(x, y, t) != 0.0 ? args[1]->eval(x, y, t) : args[2]->eval(x, y, t);
    }
    return 0.0;
  }

  bool has_variables() const {
    if (kind == Kind::X || kind == Kind::Y || kind == Kind::T) return true;
    for (const auto& a : args) {
      if (a->has_variables()) return true;
    }
    return false;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
 public:
  Parser(const std::string& text, const std::map<std::string, double>& constants)
      : s_(text), constants_(constants) {}

  NodePtr parse() {
    NodePtr n = logical_or();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + s_ + "': " + msg + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr logical_or() {
    NodePtr a = logical_and();
    while (accept("||")) a = binary('|', a, logical_and());
    return a;
  }
  NodePtr logical_and() {
    NodePtr a = comparison();
    while (accept("&&")) a = binary('&', a, comparison());
    return a;
  }
  NodePtr comparison() {
    NodePtr a = additive();
    while (true) {
      if (accept("<=")) a = binary('l', a, additive());
      else if (accept(">=")) a = binary('g', a, additive());
      else if (accept("==")) a = binary('=', a, additive());
      else if (accept("!=")) a = binary('!', a, additive());
      else if (accept("<")) a = binary('<', a, additive());
      else if (accept(">")) a = binary('>', a, additive());
      else return a;
    }
  }
  NodePtr additive() {
    NodePtr a = multiplicative();
    while (true) {
      if (accept("+")) a = binary('+', a, multiplicative());
      else if (accept("-")) a = binary('-', a, multiplicative());
      else return a;
    }
  }
  NodePtr multiplicative() {
    NodePtr a = unary();
    while (true) {
      if (accept("*")) a = binary('*', a, unary());
      else if (accept("/")) a = binary('/', a, unary());
      else return a;
    }
  }
  NodePtr unary() {
    if (accept("-")) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = '-';
      n->args = {unary()};
      return n;
    }
    if (accept("+")) return unary();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '!' && (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '=')) {
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = 'n';
      n->args = {unary()};
      return n;
    }
    return power();
  }
  // Right associative; binds tighter than unary minus on its left.
  NodePtr power() {
    NodePtr base = primary();
    if (accept("^")) return binary('^', base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = logical_or();
      if (!accept(")")) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }
  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::istringstream in(s_.substr(start, pos_ - start));
    in.imbue(std::locale::classic());
    double v;
    if (!(in >> v)) fail("bad number");
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }
  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      std::vector<NodePtr> args;
      if (!accept(")")) {
        do args.push_back(logical_or());
        while (accept(","));
        if (!accept(")")) fail("expected ')' after arguments");
      }
      return call(name, std::move(args));
    }
    if (name == "x" || name == "x1") n->kind = Node::Kind::X;
    else if (name == "y" || name == "x2") n->kind = Node::Kind::Y;
    else if (name == "t") n->kind = Node::Kind::T;
    else if (name == "pi") n->value = std::numbers::pi;
    else if (auto it = constants_.find(name); it != constants_.end()) n->value = it->second;
    else fail("unknown identifier '" + name + "'");
    return n;
  }
  NodePtr call(const std::string& name, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->args = std::move(args);
    auto need = [&](std::size_t k) {
      if (n->args.size() != k) fail(name + " expects " + std::to_string(k) + " argument(s)");
    };
    static const std::map<std::string, double (*)(double)> unary = {
        {"sin", [](double a) { return std::sin(a); }},   {"cos", [](double a) { return std::cos(a); }},
        {"tan", [](double a) { return std::tan(a); }},   {"exp", [](double a) { return std::exp(a); }},
        {"log", [](double a) { return std::log(a); }},   {"sqrt", [](double a) { return std::sqrt(a); }},
        {"abs", [](double a) { return std::abs(a); }},   {"tanh", [](double a) { return std::tanh(a); }},
        {"atan", [](double a) { return std::atan(a); }}, {"floor", [](double a) { return std::floor(a); }},
    };
    static const std::map<std::string, double (*)(double, double)> binary = {
        {"pow", [](double a, double b) { return std::pow(a, b); }},
        {"atan2", [](double a, double b) { return std::atan2(a, b); }},
        {"min", [](double a, double b) { return std::min(a, b); }},
        {"max", [](double a, double b) { return std::max(a, b); }},
    };
    if (auto it = unary.find(name); it != unary.end()) {
      need(1);
      n->kind = Node::Kind::Call;
      n->fn1 = it->second;
    } else if (auto jt = binary.find(name); jt != binary.end()) {
      need(2);
      n->kind = Node::Kind::Call;
      n->fn2 = jt->second;
    } else if (name == "if") {
      need(3);
      n->kind = Node::Kind::If;
    } else {
      fail("unknown function '" + name + "'");
    }
    return n;
  }

  std::string s_;
  const std::map<std::string, double>& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : text_("0"), root_(std::make_shared<Node>()) {}

Expression Expression::parse(const std::string& text, const std::map<std::string, double>& constants) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text, constants).parse();
  return e;
}

double Expression::operator()(double x, double y, double t) const { return root_->eval(x, y, t); }

bool Expression::is_constant() const { return !root_->has_variables(); }

bool Expression::is_zero() const { return is_constant() && root_->eval(0, 0, 0) == 0.0; }

}  // namespace curvewave
