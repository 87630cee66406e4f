#pragma once

// Independent reference computations shared by the test programs.

#include <cmath>
#include <random>
#include <vector>

#include "curvewave/local_space.hpp"
#include "curvewave/mesh.hpp"
#include "curvewave/quadrature.hpp"

namespace oracle {

using curvewave::Vec2;

inline constexpr double kPi = 3.14159265358979323846;

// One-element mesh over a counterclockwise polygon with the given tag.
inline curvewave::Mesh polygon_mesh(const std::vector<Vec2>& pts,
                                    curvewave::BoundaryTag tag = curvewave::BoundaryTag::Dirichlet) {
  curvewave::MeshBuilder b(1e-12);
  std::vector<int> ids;
  for (const Vec2& p : pts) ids.push_back(b.vertex(p));
  std::vector<curvewave::EdgeUse> loop;
  for (std::size_t i = 0; i < ids.size(); ++i) loop.push_back(b.straight_edge(ids[i], ids[(i + 1) % ids.size()], tag));
  b.add_element(loop, 0);
  curvewave::Mesh m = b.finish();
  m.materials[0] = {};
  m.region_names[0] = "domain";
  return m;
}

inline curvewave::Mesh square_mesh(double x0 = 0.0, double y0 = 0.0, double side = 1.0) {
  return polygon_mesh({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

// Disk of radius r as one element bounded by four quarter arcs.
inline curvewave::Mesh disk_mesh(double r, const Vec2& c = Vec2::Zero()) {
  curvewave::MeshBuilder b(1e-12);
  const int curve = b.add_curve(curvewave::Curve::arc(c, r, 0.0, 2.0 * kPi));
  const double L = 2.0 * kPi * r;
  std::vector<int> v;
  for (int i = 0; i < 4; ++i) v.push_back(b.vertex(c + r * Vec2(std::cos(i * kPi / 2), std::sin(i * kPi / 2))));
  std::vector<curvewave::EdgeUse> loop;
  for (int i = 0; i < 4; ++i)
    loop.push_back(b.curved_edge(v[i], v[(i + 1) % 4], curve, L * i / 4, L * (i + 1) / 4,
                                 curvewave::BoundaryTag::Dirichlet));
  b.add_element(loop, 0);
  curvewave::Mesh m = b.finish();
  m.materials[0] = {};
  m.region_names[0] = "domain";
  return m;
}

// Quarter-annulus sector r in [ri, ro], theta in [0, pi/2] as one element
// with two exact arcs.
inline curvewave::Mesh sector_mesh(double ri = 0.5, double ro = 1.0) {
  curvewave::MeshBuilder b(1e-12);
  const int inner = b.add_curve(curvewave::Curve::arc(Vec2::Zero(), ri, 0.0, kPi / 2));
  const int outer = b.add_curve(curvewave::Curve::arc(Vec2::Zero(), ro, 0.0, kPi / 2));
  const int a = b.vertex({ri, 0}), bb = b.vertex({ro, 0}), c = b.vertex({0, ro}), d = b.vertex({0, ri});
  std::vector<curvewave::EdgeUse> loop;
  loop.push_back(b.straight_edge(a, bb, curvewave::BoundaryTag::Neumann));
  loop.push_back(b.curved_edge(bb, c, outer, 0.0, ro * kPi / 2, curvewave::BoundaryTag::Dirichlet));
  loop.push_back(b.straight_edge(c, d, curvewave::BoundaryTag::Neumann));
  loop.push_back(b.curved_edge(d, a, inner, ri * kPi / 2, 0.0, curvewave::BoundaryTag::Dirichlet));
  b.add_element(loop, 0);
  curvewave::Mesh m = b.finish();
  m.materials[0] = {};
  m.region_names[0] = "domain";
  return m;
}

// Exponent pairs (a, b) in graded order, |alpha| = d listed as (d,0), (d-1,1), ...
inline std::vector<std::pair<int, int>> exponents(int degree) {
  std::vector<std::pair<int, int>> e;
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b) e.emplace_back(d - b, b);
  return e;
}

inline double monomial(const Vec2& x, const Vec2& c, double h, int a, int b) {
  return std::pow((x.x() - c.x()) / h, a) * std::pow((x.y() - c.y()) / h, b);
}

inline Vec2 monomial_gradient(const Vec2& x, const Vec2& c, double h, int a, int b) {
  const double xi = (x.x() - c.x()) / h, eta = (x.y() - c.y()) / h;
  return {a > 0 ? a * std::pow(xi, a - 1) * std::pow(eta, b) / h : 0.0,
          b > 0 ? b * std::pow(xi, a) * std::pow(eta, b - 1) / h : 0.0};
}

// Naive product-form Lagrange interpolation through (nodes, values).
inline double lagrange(const std::vector<double>& nodes, const std::vector<double>& values, double u) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double l = 1.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (j != i) l *= (u - nodes[j]) / (nodes[i] - nodes[j]);
    sum += l * values[i];
  }
  return sum;
}

// Trace of a local DoF vector on loop edge i at traversal parameter tau:
// the degree-k polynomial in arc length through the Gauss-Lobatto values.
inline double trace(const curvewave::LocalSpace& s, const Eigen::VectorXd& v, int i, double tau, double h) {
  const int k = s.k();
  const auto& ref = curvewave::gauss_lobatto(k + 1);
  std::vector<double> nodes, values;
  const auto idx = s.layout().edge_nodes(i);
  for (int j = 0; j <= k; ++j) {
    nodes.push_back(0.5 * (ref.nodes[j] + 1.0) * h);
    values.push_back(v[idx[j]]);
  }
  return lagrange(nodes, values, tau);
}

// Boundary integral of trace(v) * g(x, n) with an n-point Gauss rule per edge.
template <class G>
double boundary_integral(const curvewave::Mesh& mesh, const curvewave::LocalSpace& s, const Eigen::VectorXd& v,
                         G&& g, int points = 48) {
  const curvewave::Element& el = mesh.elements[s.element()];
  double sum = 0.0;
  for (std::size_t i = 0; i < el.loop.size(); ++i) {
    const curvewave::OrientedEdge edge = mesh.oriented(el.loop[i]);
    const double h = edge.length();
    const auto rule = curvewave::gauss_legendre(points).mapped(0.0, h);
    for (int q = 0; q < points; ++q) {
      const double tau = rule.nodes[q];
      sum += rule.weights[q] * trace(s, v, static_cast<int>(i), tau, h) * g(edge.point(tau), edge.normal(tau));
    }
  }
  return sum;
}

// Integral of v * m over E for a monomial m of degree <= k - 2, from the
// moment DoFs of v.
inline double moment_of(const curvewave::LocalSpace& s, const Eigen::VectorXd& v, int a, int b) {
  const auto ex = exponents(s.k() - 2);
  for (std::size_t i = 0; i < ex.size(); ++i)
    if (ex[i] == std::make_pair(a, b)) return s.area() * v[s.layout().moment_dof(static_cast<int>(i))];
  return NAN;
}

// (grad v, grad m_alpha)_E = -(v, Lap m_alpha)_E + boundary integral of v dm_alpha/dn.
inline double stiffness_oracle(const curvewave::Mesh& mesh, const curvewave::LocalSpace& s, const Eigen::VectorXd& v,
                               int a, int b) {
  const double h = s.diameter();
  const Vec2 c = s.centroid();
  double interior = 0.0;
  if (a >= 2) interior += a * (a - 1) / (h * h) * moment_of(s, v, a - 2, b);
  if (b >= 2) interior += b * (b - 1) / (h * h) * moment_of(s, v, a, b - 2);
  const double bnd = boundary_integral(mesh, s, v, [&](const Vec2& x, const Vec2& n) {
    return monomial_gradient(x, c, h, a, b).dot(n);
  });
  return -interior + bnd;
}

// Moment of m_a m_b from the element's monomial moments.
inline double product_moment(const curvewave::LocalSpace& s, int a1, int b1, int a2, int b2) {
  return s.moments()(a1 + a2, b1 + b2);
}

// Coefficients of Pi_nabla v from its definition: (grad Pi v, grad m_a) by
// stiffness_oracle for |a| >= 1 and the boundary mean fixing constants.
inline Eigen::VectorXd pi_nabla_oracle(const curvewave::Mesh& mesh, const curvewave::LocalSpace& s,
                                       const Eigen::VectorXd& v) {
  const auto ex = exponents(s.k());
  const int n = static_cast<int>(ex.size());
  const double h2 = s.diameter() * s.diameter();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    const auto [a1, b1] = ex[i];
    if (i == 0) {
      for (int j = 0; j < n; ++j) {
        const auto [a, b] = ex[j];
        g(0, j) = boundary_integral(mesh, s, Eigen::VectorXd::Ones(v.size()), [&](const Vec2& x, const Vec2&) {
          return monomial(x, s.centroid(), s.diameter(), a, b);
        });
      }
      rhs[0] = boundary_integral(mesh, s, v, [](const Vec2&, const Vec2&) { return 1.0; });
      continue;
    }
    for (int j = 0; j < n; ++j) {
      const auto [a2, b2] = ex[j];
      double x = 0.0;
      if (a1 > 0 && a2 > 0) x += a1 * a2 * product_moment(s, a1 - 1, b1, a2 - 1, b2);
      if (b1 > 0 && b2 > 0) x += b1 * b2 * product_moment(s, a1, b1 - 1, a2, b2 - 1);
      g(i, j) = x / h2;
    }
    rhs[i] = stiffness_oracle(mesh, s, v, a1, b1);
  }
  return g.fullPivLu().solve(rhs);
}

// (v, m_a)_E: moment DoFs for |a| <= k - 2, (Pi_nabla v, m_a) above by the
// enhancement condition.
inline double mass_oracle(const curvewave::Mesh& mesh, const curvewave::LocalSpace& s, const Eigen::VectorXd& v,
                          int a, int b) {
  if (a + b <= s.k() - 2) return moment_of(s, v, a, b);
  const Eigen::VectorXd c = pi_nabla_oracle(mesh, s, v);
  const auto ex = exponents(s.k());
  double sum = 0.0;
  for (std::size_t j = 0; j < ex.size(); ++j) sum += c[j] * product_moment(s, a, b, ex[j].first, ex[j].second);
  return sum;
}

struct MonteCarlo {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Integral over the box of f * indicator by uniform sampling.
template <class F, class I>
MonteCarlo monte_carlo(F&& f, I&& inside, const Vec2& lo, const Vec2& hi, long samples, unsigned seed = 12345) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
  const double vol = (hi.x() - lo.x()) * (hi.y() - lo.y());
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    const Vec2 p(ux(rng), uy(rng));
    const double v = inside(p) ? vol * f(p) : 0.0;
    s += v;
    s2 += v * v;
  }
  MonteCarlo r;
  r.mean = s / samples;
  r.standard_error = std::sqrt(std::max(0.0, s2 / samples - r.mean * r.mean) / samples);
  return r;
}

// Adaptive Simpson integration with Richardson correction.
template <class F>
double simpson(F&& f, double a, double b, double tol, int depth = 30) {
  const auto rec = [&](auto&& self, double x0, double x1, double f0, double fm, double f1, double whole, double eps,
                       int d) -> double {
    const double m = 0.5 * (x0 + x1), lm = 0.5 * (x0 + m), rm = 0.5 * (m + x1);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - x0) / 6 * (f0 + 4 * flm + fm), right = (x1 - m) / 6 * (fm + 4 * frm + f1);
    if (d <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
    return self(self, x0, m, f0, flm, fm, left, eps / 2, d - 1) + self(self, m, x1, fm, frm, f1, right, eps / 2, d - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(rec, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

// Smallest distance from p to the polygon through pts (closed).
inline bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].y() > p.y()) != (poly[j].y() > p.y()) &&
        p.x() < (poly[j].x() - poly[i].x()) * (p.y() - poly[i].y()) / (poly[j].y() - poly[i].y()) + poly[i].x())
      in = !in;
  }
  return in;
}

}  // namespace oracle
