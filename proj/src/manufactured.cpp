#include "curvewave/manufactured.hpp"

#include <cmath>

namespace curvewave {

RingSolution::RingSolution(double r_inner, double r_outer, double spatial, double temporal)
    : ri2_(r_inner * r_inner), ro2_(r_outer * r_outer), a_(spatial), b_(temporal) {}

double RingSolution::spatial_value(const Vec2& x) const {
  const double r2 = x.squaredNorm();
  return std::sin(a_ * x.x() * x.y()) * (r2 - ri2_) * (r2 - ro2_);
}

Vec2 RingSolution::spatial_gradient(const Vec2& x) const {
  const double r2 = x.squaredNorm();
  const double s = std::sin(a_ * x.x() * x.y()), c = std::cos(a_ * x.x() * x.y());
  const double q = (r2 - ri2_) * (r2 - ro2_);
  const double dq = 4.0 * r2 - 2.0 * (ri2_ + ro2_);  // grad q = dq * x
  return a_ * c * q * Vec2(x.y(), x.x()) + s * dq * x;
}

double RingSolution::spatial_laplacian(const Vec2& x) const {
  const double r2 = x.squaredNorm();
  const double xy = x.x() * x.y();
  const double s = std::sin(a_ * xy), c = std::cos(a_ * xy);
  const double q = (r2 - ri2_) * (r2 - ro2_);
  const double sigma = ri2_ + ro2_;
  // Lap(S q) = q Lap S + 2 grad S . grad q + S Lap q.
  return -a_ * a_ * r2 * s * q + s * (16.0 * r2 - 4.0 * sigma) + 4.0 * a_ * xy * c * (4.0 * r2 - 2.0 * sigma);
}

double RingSolution::value(const Vec2& x, double t) const { return std::sin(b_ * t) * spatial_value(x); }

Vec2 RingSolution::gradient(const Vec2& x, double t) const { return std::sin(b_ * t) * spatial_gradient(x); }

double RingSolution::velocity(const Vec2& x, double t) const { return b_ * std::cos(b_ * t) * spatial_value(x); }

double RingSolution::forcing(const Vec2& x, double t, double rho, double mu) const {
  const double st = std::sin(b_ * t);
  return -rho * b_ * b_ * st * spatial_value(x) - mu * st * spatial_laplacian(x);
}

RadialRingSolution::RadialRingSolution(double r_inner, double r_outer, double temporal)
    : ri2_(r_inner * r_inner), ro2_(r_outer * r_outer), b_(temporal) {}

double RadialRingSolution::spatial_value(const Vec2& x) const {
  const double r2 = x.squaredNorm();
  return (r2 - ri2_) * (r2 - ro2_);
}

double RadialRingSolution::spatial_laplacian(const Vec2& x) const {
  return 16.0 * x.squaredNorm() - 4.0 * (ri2_ + ro2_);
}

double RadialRingSolution::value(const Vec2& x, double t) const { return std::sin(b_ * t) * spatial_value(x); }

Vec2 RadialRingSolution::gradient(const Vec2& x, double t) const {
  return std::sin(b_ * t) * (4.0 * x.squaredNorm() - 2.0 * (ri2_ + ro2_)) * x;
}

double RadialRingSolution::velocity(const Vec2& x, double t) const {
  return b_ * std::cos(b_ * t) * spatial_value(x);
}

double RadialRingSolution::forcing(const Vec2& x, double t, double rho, double mu) const {
  const double st = std::sin(b_ * t);
  return -rho * b_ * b_ * st * spatial_value(x) - mu * st * spatial_laplacian(x);
}

}  // namespace curvewave
