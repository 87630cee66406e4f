#include "curvewave/monomials.hpp"

namespace curvewave {

ScaledMonomials::ScaledMonomials(const Vec2& center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree) {}

std::array<int, 2> ScaledMonomials::exponent(int i) {
  int d = 0;
  while (dim(d) <= i) ++d;
  const int b = i - dim(d - 1);
  return {d - b, b};
}

Eigen::VectorXd ScaledMonomials::values(const Vec2& x) const {
  const double xi = (x.x() - center_.x()) / scale_, eta = (x.y() - center_.y()) / scale_;
  Eigen::VectorXd v(size());
  if (degree_ < 0) return v;
  v[0] = 1.0;
  for (int d = 1; d <= degree_; ++d) {
    const int prev = dim(d - 2), cur = dim(d - 1);
    for (int b = 0; b < d; ++b) v[cur + b] = v[prev + b] * xi;
    v[cur + d] = v[prev + d - 1] * eta;
  }
  return v;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> ScaledMonomials::gradients(const Vec2& x) const {
  Eigen::Matrix<double, 2, Eigen::Dynamic> g = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, size());
  if (degree_ < 1) return g;
  const Eigen::VectorXd low = ScaledMonomials(center_, scale_, degree_ - 1).values(x);
  for (int i = 1; i < size(); ++i) {
    const auto [a, b] = exponent(i);
    if (a > 0) g(0, i) = a * low[index(a - 1, b)] / scale_;
    if (b > 0) g(1, i) = b * low[index(a, b - 1)] / scale_;
  }
  return g;
}

}  // namespace curvewave
