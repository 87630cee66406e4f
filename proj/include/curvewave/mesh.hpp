#pragma once

#include <map>
#include <string>
#include <vector>

#include "curvewave/geometry.hpp"

namespace curvewave {

enum class BoundaryTag { Internal, Dirichlet, Neumann, Absorbing, Interface };

const char* to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(const std::string& name);

struct Edge {
  int v0 = -1, v1 = -1;
  int curve = -1;         // -1 for a straight edge
  int origin_curve = -1;  // curve a straightened chord came from, else -1
  double s0 = 0.0, s1 = 0.0;
  BoundaryTag tag = BoundaryTag::Internal;
  double length = 0.0;
};

struct EdgeUse {
  int edge = -1;
  bool reversed = false;
};

struct Element {
  std::vector<EdgeUse> loop;  // counterclockwise
  int region = 0;
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  double diameter = 0.0;
};

struct Material {
  double rho = 1.0;
  double mu = 1.0;
};

struct ElementGeometry {
  double diameter = 0.0;
  Vec2 centroid = Vec2::Zero();
  double area = 0.0;
};

class Mesh {
 public:
  std::vector<Vec2> vertices;
  std::vector<Curve> curves;
  std::vector<Edge> edges;
  std::vector<Element> elements;
  std::map<int, Material> materials;
  std::map<int, std::string> region_names;

  EdgeMap edge_map(int e) const;
  // Map onto the exact geometry: the origin curve for straightened chords.
  EdgeMap trace_map(int e) const;
  OrientedEdge oriented(const EdgeUse& use) const { return {edge_map(use.edge), use.reversed}; }

  int start_vertex(const EdgeUse& use) const {
    return use.reversed ? edges[use.edge].v1 : edges[use.edge].v0;
  }
  int end_vertex(const EdgeUse& use) const {
    return use.reversed ? edges[use.edge].v0 : edges[use.edge].v1;
  }

  // Recomputes edge lengths and element geometry; checks loop closure,
  // positive areas and edge sharing.
  void finalize();

  double h() const;
  double total_area() const;
  bool has_curved_edges() const;
  Material material(int region) const;
  int region_id(const std::string& name) const;
  // Number of elements using each edge.
  std::vector<int> edge_use_counts() const;
};

ElementGeometry element_geometry(const Mesh& mesh, const Element& element);

// Replaces every curved edge by its chord, keeping the curve as origin.
Mesh straighten(const Mesh& mesh);

struct MeshQualityThresholds {
  double star = 0.02;
  double edge = 0.02;
};

struct ElementQuality {
  double star_ratio = 0.0;  // distance from centroid to boundary / h_E
  double edge_ratio = 0.0;  // min h_e / h_E
  bool flagged = false;
};

struct MeshQualityReport {
  MeshQualityThresholds thresholds;
  std::vector<ElementQuality> elements;
  double min_star_ratio = 1.0;
  double min_edge_ratio = 1.0;
  int flagged = 0;
};

MeshQualityReport validate(const Mesh& mesh, const MeshQualityThresholds& thresholds = {});

// Incremental mesh construction with coordinate-based vertex merging and
// edge deduplication by endpoint pair.
class MeshBuilder {
 public:
  explicit MeshBuilder(double merge_tolerance) : tol_(merge_tolerance) {}

  int vertex(const Vec2& p);
  int add_curve(Curve curve);
  // Straight edge between two vertices, shared if it already exists.
  EdgeUse straight_edge(int a, int b, BoundaryTag tag);
  // Curved edge from a to b along curve [s0, s1].
  EdgeUse curved_edge(int a, int b, int curve, double s0, double s1, BoundaryTag tag);
  void add_element(std::vector<EdgeUse> loop, int region);

  Mesh& mesh() { return mesh_; }
  Mesh finish();

 private:
  double tol_;
  Mesh mesh_;
  std::map<std::pair<long long, long long>, std::vector<int>> buckets_;
  std::map<std::pair<int, int>, int> straight_;
};

}  // namespace curvewave
