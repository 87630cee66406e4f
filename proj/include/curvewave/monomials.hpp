#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "curvewave/geometry.hpp"

namespace curvewave {

// Scaled monomials m_a(x) = ((x - c) / h)^a in graded order:
// degree 0, then (1,0),(0,1), then (2,0),(1,1),(0,2), ...
class ScaledMonomials {
 public:
  ScaledMonomials(const Vec2& center, double scale, int degree);

  static int dim(int degree) { return degree < 0 ? 0 : (degree + 1) * (degree + 2) / 2; }
  static int index(int a, int b) { return dim(a + b - 1) + b; }
  static std::array<int, 2> exponent(int i);

  int degree() const { return degree_; }
  int size() const { return dim(degree_); }
  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }

  Eigen::VectorXd values(const Vec2& x) const;
  // Rows: d/dx, d/dy.
  Eigen::Matrix<double, 2, Eigen::Dynamic> gradients(const Vec2& x) const;

 private:
  Vec2 center_;
  double scale_;
  int degree_;
};

}  // namespace curvewave
