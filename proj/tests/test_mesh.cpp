#include <doctest.h>

#include <cmath>

#include "curvewave/error.hpp"
#include "curvewave/generators.hpp"
#include "curvewave/mesh.hpp"
#include "oracles.hpp"

using namespace curvewave;
using oracle::kPi;

namespace {

std::vector<Vec2> boundary_samples(const Mesh& m, const Element& el, int per_edge) {
  std::vector<Vec2> pts;
  for (const EdgeUse& u : el.loop) {
    const OrientedEdge e = m.oriented(u);
    const int n = e.map.curved() ? per_edge : 1;
    for (int i = 0; i < n; ++i) pts.push_back(e.point(e.length() * i / n));
  }
  return pts;
}

void check_conformity(const Mesh& m) {
  std::vector<int> forward(m.edges.size(), 0), backward(m.edges.size(), 0);
  for (const Element& el : m.elements)
    for (const EdgeUse& u : el.loop) ++(u.reversed ? backward : forward)[u.edge];
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    if (m.edges[e].tag == BoundaryTag::Internal || m.edges[e].tag == BoundaryTag::Interface) {
      CHECK(forward[e] == 1);
      CHECK(backward[e] == 1);
    } else {
      CHECK(forward[e] + backward[e] == 1);
    }
  }
}

}  // namespace

TEST_CASE("unit square geometry") {
  const Mesh sq = oracle::square_mesh();
  const ElementGeometry g = element_geometry(sq, sq.elements[0]);
  CHECK(g.area == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((g.centroid - Vec2(0.5, 0.5)).norm() < 1e-15);
  CHECK(g.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("disk element geometry") {
  const Mesh d = oracle::disk_mesh(0.3, {0.5, -0.2});
  const Element& el = d.elements[0];
  CHECK(el.area == doctest::Approx(kPi * 0.09).epsilon(1e-13));
  CHECK((el.centroid - Vec2(0.5, -0.2)).norm() < 1e-13);
  CHECK(std::abs(el.diameter - 0.6) < 0.006);
}

TEST_CASE("diameter agrees with dense boundary sampling") {
  const Mesh ring = build_ring_quad(3, 7, 0.5, 1.0);
  for (const Element& el : ring.elements) {
    const auto pts = boundary_samples(ring, el, 400);
    double h = 0.0;
    for (const Vec2& a : pts)
      for (const Vec2& b : pts) h = std::max(h, (a - b).norm());
    CHECK(std::abs(el.diameter - h) <= 0.01 * h);
  }
}

TEST_CASE("cut-cell area against Monte Carlo") {
  const Mesh m = build_cartesian_cut_circle(21, 0.43, Vec2(0.01, -0.02));
  const double cell = 2.0 / 21;
  int checked = 0;
  for (const Element& el : m.elements) {
    bool curved = false;
    for (const EdgeUse& u : el.loop) curved |= m.edges[u.edge].curve >= 0;
    if (!curved || el.area < 0.2 * cell * cell || checked == 3) continue;
    ++checked;
    const auto poly = boundary_samples(m, el, 2000);
    Vec2 lo = poly[0], hi = poly[0];
    for (const Vec2& p : poly) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const auto mc = oracle::monte_carlo([](const Vec2&) { return 1.0; },
                                        [&](const Vec2& p) { return oracle::point_in_polygon(poly, p); }, lo, hi,
                                        1'000'000, 99 + checked);
    CHECK(std::abs(mc.mean - el.area) < 3 * mc.standard_error);
  }
  CHECK(checked == 3);
}

TEST_CASE("finalize rejects malformed meshes") {
  // Clockwise loop.
  CHECK_THROWS_AS(oracle::polygon_mesh({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), MeshError);
  MeshBuilder b(1e-12);
  const int v0 = b.vertex({0, 0}), v1 = b.vertex({1, 0}), v2 = b.vertex({0, 1});
  // Open loop.
  b.add_element({b.straight_edge(v0, v1, BoundaryTag::Dirichlet), b.straight_edge(v1, v2, BoundaryTag::Dirichlet)}, 0);
  CHECK_THROWS_AS(b.finish(), MeshError);
  CHECK_THROWS_AS(boundary_tag_from_string("sticky"), MeshError);
}

TEST_CASE("builder merges vertices and shares edges") {
  MeshBuilder b(1e-9);
  const int a = b.vertex({0, 0});
  CHECK(b.vertex({1e-12, 0}) == a);
  const int c = b.vertex({1, 0}), d = b.vertex({1, 1}), e = b.vertex({0, 1}), f = b.vertex({2, 0}), g = b.vertex({2, 1});
  b.add_element({b.straight_edge(a, c, BoundaryTag::Dirichlet), b.straight_edge(c, d, BoundaryTag::Internal),
                 b.straight_edge(d, e, BoundaryTag::Dirichlet), b.straight_edge(e, a, BoundaryTag::Dirichlet)},
                0);
  b.add_element({b.straight_edge(c, f, BoundaryTag::Dirichlet), b.straight_edge(f, g, BoundaryTag::Dirichlet),
                 b.straight_edge(g, d, BoundaryTag::Dirichlet), b.straight_edge(d, c, BoundaryTag::Internal)},
                0);
  Mesh m = b.finish();
  CHECK(m.vertices.size() == 6);
  CHECK(m.edges.size() == 7);
  check_conformity(m);
  CHECK(m.total_area() == doctest::Approx(2.0));
}

TEST_CASE("validate reports shape ratios") {
  const Mesh sq = oracle::square_mesh();
  const MeshQualityReport r = validate(sq);
  REQUIRE(r.elements.size() == 1);
  CHECK(r.elements[0].star_ratio == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.elements[0].edge_ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.flagged == 0);
  const Mesh sliver = oracle::polygon_mesh({{0, 0}, {1, 0}, {1, 1e-4 * std::sqrt(2.0)}, {0, 1}});
  const MeshQualityReport s = validate(sliver);
  CHECK(s.elements[0].flagged);
  CHECK(s.flagged == 1);
  for (int n : {4, 6, 8}) CHECK(validate(build_ring_quad(n, 2 * n, 0.5, 1.0)).flagged == 0);
}

TEST_CASE("straighten removes the circular-segment areas") {
  const double ri = 0.5, ro = 1.0;
  const Mesh ring = build_ring_quad(1, 4, ri, ro);
  const Mesh flat = straighten(ring);
  CHECK(flat.total_area() < kPi * (ro * ro - ri * ri));
  CHECK_FALSE(flat.has_curved_edges());
  const double deficit = (kPi / 4 - 0.5) * (ro * ro - ri * ri);
  for (std::size_t e = 0; e < ring.elements.size(); ++e)
    CHECK(ring.elements[e].area - flat.elements[e].area == doctest::Approx(deficit).epsilon(1e-12));
  for (std::size_t e = 0; e < ring.edges.size(); ++e)
    CHECK(flat.edges[e].origin_curve == (ring.edges[e].curve >= 0 ? ring.edges[e].curve : -1));
}

TEST_CASE("straighten is idempotent and keeps topology") {
  const Mesh ring = build_ring_quad(3, 6, 0.5, 1.0);
  const Mesh once = straighten(ring);
  const Mesh twice = straighten(once);
  CHECK(once.vertices.size() == ring.vertices.size());
  CHECK(once.edges.size() == ring.edges.size());
  CHECK(once.elements.size() == ring.elements.size());
  for (std::size_t e = 0; e < once.elements.size(); ++e) {
    CHECK(once.elements[e].area == twice.elements[e].area);
    CHECK(once.elements[e].diameter == twice.elements[e].diameter);
    CHECK(once.elements[e].centroid == twice.elements[e].centroid);
  }
  const Mesh sq = oracle::square_mesh();
  const Mesh sq2 = straighten(sq);
  CHECK(sq2.elements[0].area == sq.elements[0].area);
  CHECK(sq2.elements[0].diameter == sq.elements[0].diameter);
  CHECK(sq2.elements[0].centroid == sq.elements[0].centroid);
}

TEST_CASE("trace map follows the origin curve of a chord") {
  const Mesh flat = straighten(build_ring_quad(1, 4, 0.5, 1.0));
  for (std::size_t e = 0; e < flat.edges.size(); ++e) {
    if (flat.edges[e].origin_curve < 0) continue;
    const EdgeMap t = flat.trace_map(static_cast<int>(e));
    CHECK(t.curved());
    const double r = t.point(0.5 * t.length()).norm();
    CHECK((std::abs(r - 0.5) < 1e-12 || std::abs(r - 1.0) < 1e-12));
  }
}

TEST_CASE("edge conformity on every generator") {
  check_conformity(build_ring_quad(4, 8, 0.5, 1.0));
  check_conformity(build_ring_voronoi(ring_seeds(40, 0.5, 1.0), 0.5, 1.0));
  check_conformity(build_cartesian_cut_circle(21, 0.2, Vec2::Zero()));
  check_conformity(build_layered_fault(default_layered_fault_spec()));
}

TEST_CASE("materials and regions") {
  Mesh m = oracle::square_mesh();
  CHECK(m.region_id("domain") == 0);
  CHECK_THROWS_AS(m.region_id("nowhere"), MeshError);
  m.materials.clear();
  CHECK_THROWS_AS(m.material(0), MeshError);
}
