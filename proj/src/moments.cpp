#include "curvewave/moments.hpp"

#include <cmath>

#include "curvewave/error.hpp"
#include "curvewave/quadrature.hpp"

namespace curvewave {

MonomialMoments monomial_moments(const Mesh& mesh, const Element& element, int max_degree,
                                 const Vec2& center, double scale) {
  MonomialMoments out;
  out.max_degree = max_degree;
  out.center = center;
  out.scale = scale;
  const ScaledMonomials basis(center, scale, max_degree + 1);
  const int n = ScaledMonomials::dim(max_degree);
  std::vector<int> shifted(n);
  std::vector<double> factor(n);
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = ScaledMonomials::exponent(i);
    shifted[i] = ScaledMonomials::index(a + 1, b);
    factor[i] = scale / (a + 1);
  }
  const int exact = (max_degree + 2 + 1) / 2;
  const int curved_start = (max_degree + 4) / 2;
  out.values = Eigen::VectorXd::Zero(n);
  for (const EdgeUse& use : element.loop) {
    out.values += integrate_edge(mesh.oriented(use), n, exact, curved_start,
                                 [&](double, const Vec2& x, const Vec2& nrm, double w, Eigen::VectorXd& acc) {
                                   const Eigen::VectorXd m = basis.values(x);
                                   const double wn = w * nrm.x();
                                   for (int i = 0; i < n; ++i) acc[i] += wn * factor[i] * m[shifted[i]];
                                 });
  }
  return out;
}

MonomialMoments monomial_moments(const Mesh& mesh, const Element& element, int max_degree) {
  return monomial_moments(mesh, element, max_degree, element.centroid, element.diameter);
}

CellRule cell_quadrature(const Mesh& mesh, const Element& element, int degree) {
  CellRule rule;
  const Vec2 xe = element.centroid;
  const int nv = (degree + 3) / 2;
  const int nu_straight = (degree + 2) / 2;
  const EdgeRule gv = gauss_legendre(nv).mapped(0.0, 1.0);
  for (const EdgeUse& use : element.loop) {
    const OrientedEdge edge = mesh.oriented(use);
    const int nu = edge.map.curved() ? 2 * nu_straight + 4 : nu_straight;
    const std::vector<double> pieces = edge.pieces();
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
      const EdgeRule gu = gauss_legendre(nu).mapped(pieces[p], pieces[p + 1]);
      for (int a = 0; a < nu; ++a) {
        const double tau = gu.nodes[a];
        const Vec2 g = edge.point(tau);
        const double jac = cross(g - xe, edge.tangent(tau));
        if (!(jac > 0.0)) throw QuadratureError("element is not star-shaped with respect to its centroid");
        for (int c = 0; c < nv; ++c) {
          const double v = gv.nodes[c];
          rule.points.push_back(xe + v * (g - xe));
          rule.weights.push_back(gu.weights[a] * gv.weights[c] * v * jac);
        }
      }
    }
  }
  return rule;
}

CellRule green_cell_quadrature(const Mesh& mesh, const Element& element, int degree) {
  CellRule rule;
  const double x0 = element.centroid.x();
  const int nv = (degree + 2) / 2;
  const int nu_straight = (degree + 3) / 2;
  const EdgeRule gv = gauss_legendre(nv).mapped(0.0, 1.0);
  for (const EdgeUse& use : element.loop) {
    const OrientedEdge edge = mesh.oriented(use);
    const int nu = edge.map.curved() ? 2 * nu_straight + 4 : nu_straight;
    const std::vector<double> pieces = edge.pieces();
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
      const EdgeRule gu = gauss_legendre(nu).mapped(pieces[p], pieces[p + 1]);
      for (int a = 0; a < nu; ++a) {
        const Vec2 g = edge.point(gu.nodes[a]);
        const double span = g.x() - x0;
        const double w = gu.weights[a] * edge.normal(gu.nodes[a]).x() * span;
        if (w == 0.0) continue;
        for (int c = 0; c < nv; ++c) {
          rule.points.emplace_back(x0 + gv.nodes[c] * span, g.y());
          rule.weights.push_back(w * gv.weights[c]);
        }
      }
    }
  }
  return rule;
}

CellRule element_cell_rule(const Mesh& mesh, const Element& element, int degree) {
  try {
    return cell_quadrature(mesh, element, degree);
  } catch (const QuadratureError&) {
    return green_cell_quadrature(mesh, element, degree);
  }
}

}  // namespace curvewave
