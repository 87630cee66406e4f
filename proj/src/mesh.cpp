#include "curvewave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "curvewave/error.hpp"
#include "curvewave/quadrature.hpp"

namespace curvewave {

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Internal: return "internal";
    case BoundaryTag::Dirichlet: return "dirichlet";
    case BoundaryTag::Neumann: return "neumann";
    case BoundaryTag::Absorbing: return "absorbing";
    case BoundaryTag::Interface: return "interface";
  }
  return "internal";
}

BoundaryTag boundary_tag_from_string(const std::string& name) {
  if (name == "internal") return BoundaryTag::Internal;
  if (name == "dirichlet") return BoundaryTag::Dirichlet;
  if (name == "neumann") return BoundaryTag::Neumann;
  if (name == "absorbing") return BoundaryTag::Absorbing;
  if (name == "interface") return BoundaryTag::Interface;
  throw MeshError("unknown boundary tag '" + name + "'");
}

EdgeMap Mesh::edge_map(int e) const {
  const Edge& ed = edges[e];
  if (ed.curve < 0) return EdgeMap::straight(vertices[ed.v0], vertices[ed.v1]);
  return EdgeMap::on_curve(curves[ed.curve], ed.s0, ed.s1);
}

EdgeMap Mesh::trace_map(int e) const {
  const Edge& ed = edges[e];
  if (ed.curve < 0 && ed.origin_curve >= 0) return EdgeMap::on_curve(curves[ed.origin_curve], ed.s0, ed.s1);
  return edge_map(e);
}

ElementGeometry element_geometry(const Mesh& mesh, const Element& element) {
  Eigen::Vector3d sums = Eigen::Vector3d::Zero();
  std::vector<Vec2> samples;
  for (const EdgeUse& use : element.loop) {
    const OrientedEdge edge = mesh.oriented(use);
    sums += integrate_edge(edge, 3, 2, 4, [](double, const Vec2& x, const Vec2& n, double w, Eigen::VectorXd& acc) {
      acc[0] += w * x.x() * n.x();
      acc[1] += w * 0.5 * x.x() * x.x() * n.x();
      acc[2] += w * x.x() * x.y() * n.x();
    });
    const int m = edge.map.curved() ? 32 : 1;
    for (int i = 0; i < m; ++i) samples.push_back(edge.point(edge.length() * i / m));
  }
  ElementGeometry g;
  g.area = sums[0];
  if (!(g.area > 0.0)) throw MeshError("element has non-positive area; loop must be counterclockwise");
  g.centroid = Vec2(sums[1], sums[2]) / g.area;
  double d2 = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) d2 = std::max(d2, (samples[i] - samples[j]).squaredNorm());
  }
  g.diameter = std::sqrt(d2);
  return g;
}

void Mesh::finalize() {
  const auto nv = static_cast<int>(vertices.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    Edge& ed = edges[e];
    if (ed.v0 < 0 || ed.v0 >= nv || ed.v1 < 0 || ed.v1 >= nv || ed.v0 == ed.v1) {
      throw MeshError("edge " + std::to_string(e) + " has invalid endpoints");
    }
    if (ed.curve >= static_cast<int>(curves.size()) || ed.origin_curve >= static_cast<int>(curves.size())) {
      throw MeshError("edge " + std::to_string(e) + " references a missing curve");
    }
    if (ed.curve >= 0) {
      ed.length = std::abs(ed.s1 - ed.s0);
      const Curve& c = curves[ed.curve];
      const double tol = 1e-10 * std::max(1.0, c.length());
      if ((c.point(ed.s0) - vertices[ed.v0]).norm() > tol || (c.point(ed.s1) - vertices[ed.v1]).norm() > tol) {
        throw MeshError("curved edge " + std::to_string(e) + " endpoints do not match its vertices");
      }
    } else {
      ed.length = (vertices[ed.v1] - vertices[ed.v0]).norm();
    }
    if (!(ed.length > 0.0)) throw MeshError("edge " + std::to_string(e) + " has zero length");
  }
  for (std::size_t k = 0; k < elements.size(); ++k) {
    Element& el = elements[k];
    if (el.loop.size() < 2) throw MeshError("element " + std::to_string(k) + " has fewer than 2 edges");
    for (std::size_t i = 0; i < el.loop.size(); ++i) {
      const EdgeUse& u = el.loop[i];
      if (u.edge < 0 || u.edge >= static_cast<int>(edges.size())) {
        throw MeshError("element " + std::to_string(k) + " references a missing edge");
      }
      if (end_vertex(u) != start_vertex(el.loop[(i + 1) % el.loop.size()])) {
        throw MeshError("element " + std::to_string(k) + " edge loop is not closed");
      }
    }
    const ElementGeometry g = element_geometry(*this, el);
    el.area = g.area;
    el.centroid = g.centroid;
    el.diameter = g.diameter;
  }
  std::vector<int> forward(edges.size(), 0), backward(edges.size(), 0);
  for (const Element& el : elements) {
    for (const EdgeUse& u : el.loop) ++(u.reversed ? backward : forward)[u.edge];
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int uses = forward[e] + backward[e];
    const bool boundary = edges[e].tag != BoundaryTag::Internal && edges[e].tag != BoundaryTag::Interface;
    if (uses == 2 && (forward[e] != 1 || boundary)) {
      throw MeshError("edge " + std::to_string(e) + " must be traversed once in each direction by two elements");
    }
    if (uses == 1 && !boundary) throw MeshError("boundary edge " + std::to_string(e) + " has no boundary tag");
    if (uses == 0 || uses > 2) throw MeshError("edge " + std::to_string(e) + " is used by " + std::to_string(uses) + " elements");
  }
}

double Mesh::h() const {
  double h = 0.0;
  for (const Element& el : elements) h = std::max(h, el.diameter);
  return h;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (const Element& el : elements) a += el.area;
  return a;
}

bool Mesh::has_curved_edges() const {
  return std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.curve >= 0; });
}

Material Mesh::material(int region) const {
  auto it = materials.find(region);
  if (it == materials.end()) throw MeshError("no material for region " + std::to_string(region));
  return it->second;
}

int Mesh::region_id(const std::string& name) const {
  for (const auto& [id, n] : region_names) {
    if (n == name) return id;
  }
  throw MeshError("unknown region '" + name + "'");
}

std::vector<int> Mesh::edge_use_counts() const {
  std::vector<int> counts(edges.size(), 0);
  for (const Element& el : elements) {
    for (const EdgeUse& u : el.loop) ++counts[u.edge];
  }
  return counts;
}

Mesh straighten(const Mesh& mesh) {
  Mesh out = mesh;
  bool changed = false;
  for (Edge& e : out.edges) {
    if (e.curve >= 0) {
      e.origin_curve = e.curve;
      e.curve = -1;
      changed = true;
    }
  }
  if (changed) out.finalize();
  return out;
}

namespace {

double distance_to_edge(const EdgeMap& edge, const Vec2& p) {
  if (!edge.curved()) {
    const Vec2 a = edge.point(0.0), b = edge.point(edge.length());
    const double u = std::clamp((p - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
    return (a + u * (b - a) - p).norm();
  }
  const int m = 64;
  const double h = edge.length();
  int best = 0;
  double best_d = std::numeric_limits<double>::max();
  for (int i = 0; i <= m; ++i) {
    const double d = (edge.point(h * i / m) - p).norm();
    if (d < best_d) { best_d = d; best = i; }
  }
  double lo = h * std::max(best - 1, 0) / m, hi = h * std::min(best + 1, m) / m;
  for (int it = 0; it < 100; ++it) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    if ((edge.point(a) - p).norm() < (edge.point(b) - p).norm()) hi = b; else lo = a;
  }
  return std::min(best_d, (edge.point(0.5 * (lo + hi)) - p).norm());
}

}  // namespace

MeshQualityReport validate(const Mesh& mesh, const MeshQualityThresholds& thresholds) {
  MeshQualityReport report;
  report.thresholds = thresholds;
  report.elements.resize(mesh.elements.size());
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    const Element& el = mesh.elements[k];
    double inradius = std::numeric_limits<double>::max();
    double min_edge = std::numeric_limits<double>::max();
    for (const EdgeUse& u : el.loop) {
      inradius = std::min(inradius, distance_to_edge(mesh.edge_map(u.edge), el.centroid));
      min_edge = std::min(min_edge, mesh.edges[u.edge].length);
    }
    ElementQuality& q = report.elements[k];
    q.star_ratio = inradius / el.diameter;
    q.edge_ratio = min_edge / el.diameter;
    q.flagged = q.star_ratio < thresholds.star || q.edge_ratio < thresholds.edge;
    report.min_star_ratio = std::min(report.min_star_ratio, q.star_ratio);
    report.min_edge_ratio = std::min(report.min_edge_ratio, q.edge_ratio);
    report.flagged += q.flagged ? 1 : 0;
  }
  return report;
}

int MeshBuilder::vertex(const Vec2& p) {
  const double cell = 4.0 * tol_;
  const long long ix = static_cast<long long>(std::floor(p.x() / cell));
  const long long iy = static_cast<long long>(std::floor(p.y() / cell));
  for (long long dx = -1; dx <= 1; ++dx) {
    for (long long dy = -1; dy <= 1; ++dy) {
      auto it = buckets_.find({ix + dx, iy + dy});
      if (it == buckets_.end()) continue;
      for (int v : it->second) {
        if ((mesh_.vertices[v] - p).norm() <= tol_) return v;
      }
    }
  }
  const int id = static_cast<int>(mesh_.vertices.size());
  mesh_.vertices.push_back(p);
  buckets_[{ix, iy}].push_back(id);
  return id;
}

int MeshBuilder::add_curve(Curve curve) {
  mesh_.curves.push_back(std::move(curve));
  return static_cast<int>(mesh_.curves.size()) - 1;
}

EdgeUse MeshBuilder::straight_edge(int a, int b, BoundaryTag tag) {
  if (a == b) throw MeshError("straight edge with coincident endpoints");
  const auto key = std::minmax(a, b);
  auto it = straight_.find({key.first, key.second});
  if (it != straight_.end()) {
    Edge& e = mesh_.edges[it->second];
    if (tag != BoundaryTag::Internal) e.tag = tag;
    return {it->second, e.v0 != a};
  }
  Edge e;
  e.v0 = a;
  e.v1 = b;
  e.tag = tag;
  mesh_.edges.push_back(e);
  const int id = static_cast<int>(mesh_.edges.size()) - 1;
  straight_[{key.first, key.second}] = id;
  return {id, false};
}

EdgeUse MeshBuilder::curved_edge(int a, int b, int curve, double s0, double s1, BoundaryTag tag) {
  if (a == b) throw MeshError("curved edge with coincident endpoints");
  Edge e;
  e.v0 = a;
  e.v1 = b;
  e.curve = curve;
  e.s0 = s0;
  e.s1 = s1;
  e.tag = tag;
  mesh_.edges.push_back(e);
  return {static_cast<int>(mesh_.edges.size()) - 1, false};
}

void MeshBuilder::add_element(std::vector<EdgeUse> loop, int region) {
  Element el;
  el.loop = std::move(loop);
  el.region = region;
  mesh_.elements.push_back(std::move(el));
}

Mesh MeshBuilder::finish() {
  mesh_.finalize();
  return std::move(mesh_);
}

}  // namespace curvewave
