#pragma once

#include "curvewave/geometry.hpp"

namespace curvewave {

// p(x, t) = sin(b t) sin(a x y) (|x|^2 - ri^2)(|x|^2 - ro^2), vanishing on
// both circles of the annulus.
class RingSolution {
 public:
  RingSolution(double r_inner, double r_outer, double spatial = 0.5 * 3.14159265358979323846,
               double temporal = 0.5 * 3.14159265358979323846);

  double spatial_value(const Vec2& x) const;
  Vec2 spatial_gradient(const Vec2& x) const;
  double spatial_laplacian(const Vec2& x) const;

  double value(const Vec2& x, double t) const;
  Vec2 gradient(const Vec2& x, double t) const;
  double velocity(const Vec2& x, double t) const;
  // rho p_tt - mu Lap p for constant coefficients.
  double forcing(const Vec2& x, double t, double rho = 1.0, double mu = 1.0) const;

  double temporal() const { return b_; }

 private:
  double ri2_, ro2_, a_, b_;
};

// p(x, t) = sin(b t) (|x|^2 - ri^2)(|x|^2 - ro^2): radially symmetric, low
// spatial complexity, suited to isolating the time-discretization error.
class RadialRingSolution {
 public:
  RadialRingSolution(double r_inner, double r_outer, double temporal);

  double spatial_value(const Vec2& x) const;
  double spatial_laplacian(const Vec2& x) const;
  double value(const Vec2& x, double t) const;
  Vec2 gradient(const Vec2& x, double t) const;
  double velocity(const Vec2& x, double t) const;
  double forcing(const Vec2& x, double t, double rho = 1.0, double mu = 1.0) const;

 private:
  double ri2_, ro2_, b_;
};

}  // namespace curvewave
