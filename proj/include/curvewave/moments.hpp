#pragma once

#include <Eigen/Core>
#include <vector>

#include "curvewave/mesh.hpp"
#include "curvewave/monomials.hpp"

namespace curvewave {

struct MonomialMoments {
  int max_degree = 0;
  Vec2 center = Vec2::Zero();
  double scale = 1.0;
  Eigen::VectorXd values;  // graded order, see ScaledMonomials

  double operator()(int a, int b) const { return values[ScaledMonomials::index(a, b)]; }
};

// Integrals of ((x - center) / scale)^a over the element, by the divergence
// theorem with F = (scale * xi^(a+1) / (a+1) * eta^b, 0).
MonomialMoments monomial_moments(const Mesh& mesh, const Element& element, int max_degree,
                                 const Vec2& center, double scale);
MonomialMoments monomial_moments(const Mesh& mesh, const Element& element, int max_degree);

struct CellRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
};

// Fan of sub-triangles from the centroid, each the image of the unit square
// under x_E + v (g(u h_e) - x_E); tensor Gauss-Legendre exact to `degree` on
// straight sides, positive weights. Throws QuadratureError when the element
// is not star-shaped with respect to its centroid.
CellRule cell_quadrature(const Mesh& mesh, const Element& element, int degree);

// Green-formula cubature: boundary Gauss nodes times horizontal Gauss lines
// back to the centroid abscissa. Valid for any element; nodes may fall
// outside E and weights may be negative.
CellRule green_cell_quadrature(const Mesh& mesh, const Element& element, int degree);

// The fan rule, or the Green rule where the fan refuses.
CellRule element_cell_rule(const Mesh& mesh, const Element& element, int degree);

}  // namespace curvewave
