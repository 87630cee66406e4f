#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace curvewave {

// Arithmetic expressions over x, y (aliases x1, x2) and t; grammar in README.
class Expression {
 public:
  Expression();  // constant zero
  static Expression parse(const std::string& text, const std::map<std::string, double>& constants = {});

  double operator()(double x, double y, double t) const;
  const std::string& text() const { return text_; }
  // True when the expression contains no variables.
  bool is_constant() const;
  bool is_zero() const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace curvewave
