#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <string>

#include "curvewave/error.hpp"
#include "curvewave/generators.hpp"

namespace curvewave {

namespace {

struct Crossing {
  double u;
  int iface;
  int vertex;
};

struct BoundaryNode {
  int vertex;
  int iface;  // interface the node lies on, -1 if none
};

struct SnapRequest {
  int grid_vertex;
  int iface;
};

class CutGridBuilder {
 public:
  explicit CutGridBuilder(const CutGridSpec& spec) : spec_(spec) {
    nx_ = spec.nx;
    ny_ = spec.ny;
    hx_ = (spec.upper.x() - spec.lower.x()) / nx_;
    hy_ = (spec.upper.y() - spec.lower.y()) / ny_;
    pos_.resize((nx_ + 1) * (ny_ + 1));
    for (int j = 0; j <= ny_; ++j) {
      for (int i = 0; i <= nx_; ++i) {
        pos_[gid(i, j)] = Vec2(i == nx_ ? spec.upper.x() : spec.lower.x() + i * hx_,
                               j == ny_ ? spec.upper.y() : spec.lower.y() + j * hy_);
      }
    }
  }

  Mesh build() {
    check_tangency();
    // Grid vertices within 1e-9 h of a circle are moved onto it first.
    for (int v = 0; v < static_cast<int>(pos_.size()); ++v) {
      for (int c = 0; c < static_cast<int>(spec_.interfaces.size()); ++c) {
        const double phi = level(c, pos_[v]);
        if (std::abs(phi) <= 1e-9 * std::min(hx_, hy_) && std::abs(phi) > on_tolerance(c)) snap(v, c);
      }
    }
    std::set<int> snapped;
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::optional<SnapRequest> request;
      Mesh mesh = attempt_build(request);
      if (!request) return mesh;
      if (!snapped.insert(request->grid_vertex).second) {
        throw MeshError("cut generator could not remove a tiny fragment near grid vertex " +
                        std::to_string(request->grid_vertex) + "; nudge n or the circle radius");
      }
      snap(request->grid_vertex, request->iface);
    }
    throw MeshError("cut generator: too many tiny fragments; nudge n or the circle radius");
  }

 private:
  int gid(int i, int j) const { return j * (nx_ + 1) + i; }
  int hidx(int i, int j) const { return j * nx_ + i; }
  int vidx(int i, int j) const { return j * (nx_ + 1) + i; }

  double level(int c, const Vec2& p) const {
    const CircleInterface& ci = spec_.interfaces[c];
    return (p - ci.center).norm() - ci.radius;
  }
  double on_tolerance(int c) const { return 1e-12 * std::max(1.0, spec_.interfaces[c].radius); }

  bool on_boundary_x(int v) const { const int i = v % (nx_ + 1); return i == 0 || i == nx_; }
  bool on_boundary_y(int v) const { const int j = v / (nx_ + 1); return j == 0 || j == ny_; }

  // Moves a grid vertex onto circle c; boundary vertices slide along the boundary.
  void snap(int v, int c) {
    const CircleInterface& ci = spec_.interfaces[c];
    const Vec2 p = pos_[v];
    const bool bx = on_boundary_x(v), by = on_boundary_y(v);
    if (bx && by) throw MeshError("circle passes through a domain corner; nudge n or the circle");
    if (!bx && !by) {
      const Vec2 d = p - ci.center;
      pos_[v] = ci.center + ci.radius * d / d.norm();
      return;
    }
    // Fixed coordinate along the boundary line, solve for the other one.
    const int axis = bx ? 0 : 1;
    const double fixed = p[axis] - ci.center[axis];
    const double rem = ci.radius * ci.radius - fixed * fixed;
    if (rem < 0) throw MeshError("cannot snap boundary vertex onto the circle; nudge n");
    const double a = ci.center[1 - axis] + std::sqrt(rem), b = ci.center[1 - axis] - std::sqrt(rem);
    pos_[v][1 - axis] = std::abs(a - p[1 - axis]) < std::abs(b - p[1 - axis]) ? a : b;
  }

  void check_tangency() const {
    for (const CircleInterface& ci : spec_.interfaces) {
      const double tol = kGeometryTolerance * std::max(1.0, ci.radius);
      for (int i = 0; i <= nx_; ++i) {
        if (std::abs(std::abs(pos_[gid(i, 0)].x() - ci.center.x()) - ci.radius) <= tol) {
          throw MeshError("circle is tangent to grid line x = " + std::to_string(pos_[gid(i, 0)].x()) + "; nudge n");
        }
      }
      for (int j = 0; j <= ny_; ++j) {
        if (std::abs(std::abs(pos_[gid(0, j)].y() - ci.center.y()) - ci.radius) <= tol) {
          throw MeshError("circle is tangent to grid line y = " + std::to_string(pos_[gid(0, j)].y()) + "; nudge n");
        }
      }
    }
  }

  std::vector<Crossing> crossings(MeshBuilder& b, int va, int vb) const {
    std::vector<Crossing> out;
    const Vec2 p = pos_[va], q = pos_[vb], d = q - p;
    for (int c = 0; c < static_cast<int>(spec_.interfaces.size()); ++c) {
      const CircleInterface& ci = spec_.interfaces[c];
      const bool on_a = std::abs(level(c, p)) <= on_tolerance(c);
      const bool on_b = std::abs(level(c, q)) <= on_tolerance(c);
      const Vec2 w = p - ci.center;
      const double qa = d.squaredNorm(), qb = w.dot(d), qc = w.squaredNorm() - ci.radius * ci.radius;
      const double disc = qb * qb - qa * qc;
      if (disc <= 0.0) continue;
      const double sq = std::sqrt(disc);
      std::vector<double> roots;
      for (double u : {(-qb - sq) / qa, (-qb + sq) / qa}) {
        const double eps = 1e-9;
        if ((on_a && u < eps) || (on_b && u > 1.0 - eps)) continue;
        if (u > 0.0 && u < 1.0) roots.push_back(u);
      }
      if (roots.size() > 1) {
        throw MeshError("a circle crosses one grid edge twice near (" + std::to_string(p.x()) + ", " +
                        std::to_string(p.y()) + "); nudge n");
      }
      for (double u : roots) out.push_back({u, c, b.vertex(p + u * d)});
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.u < y.u; });
    return out;
  }

  Mesh attempt_build(std::optional<SnapRequest>& request) {
    const int nc = static_cast<int>(spec_.interfaces.size());
    MeshBuilder b(1e-13 * std::max(hx_, hy_));
    std::vector<int> vid(pos_.size());
    for (std::size_t v = 0; v < pos_.size(); ++v) vid[v] = b.vertex(pos_[v]);
    std::vector<std::vector<Crossing>> hcross(nx_ * (ny_ + 1)), vcross((nx_ + 1) * ny_);
    for (int j = 0; j <= ny_; ++j) {
      for (int i = 0; i < nx_; ++i) hcross[hidx(i, j)] = crossings(b, gid(i, j), gid(i + 1, j));
    }
    for (int j = 0; j < ny_; ++j) {
      for (int i = 0; i <= nx_; ++i) vcross[vidx(i, j)] = crossings(b, gid(i, j), gid(i, j + 1));
    }
    auto corner_iface = [&](int g) {
      for (int c = 0; c < nc; ++c) {
        if (std::abs(level(c, pos_[g])) <= on_tolerance(c)) return c;
      }
      return -1;
    };

    struct Split {
      int cell;
      int element_a, element_b;
      std::vector<int> corners_a, corners_b;
      int iface;
    };
    std::vector<Split> splits;
    std::vector<int> region_of;

    for (int j = 0; j < ny_; ++j) {
      for (int i = 0; i < nx_; ++i) {
        // Counterclockwise boundary nodes with side tags for straight edges.
        std::vector<BoundaryNode> nodes;
        std::vector<BoundaryTag> side_tag;  // tag of the sub-edge starting at each node
        std::vector<int> grid_corner;       // grid vertex id if the node is a corner, else -1
        auto add_side = [&](int g0, const std::vector<Crossing>& cr, bool forward, BoundaryTag tag) {
          nodes.push_back({vid[g0], corner_iface(g0)});
          side_tag.push_back(tag);
          grid_corner.push_back(g0);
          if (forward) {
            for (const Crossing& x : cr) { nodes.push_back({x.vertex, x.iface}); side_tag.push_back(tag); grid_corner.push_back(-1); }
          } else {
            for (auto it = cr.rbegin(); it != cr.rend(); ++it) { nodes.push_back({it->vertex, it->iface}); side_tag.push_back(tag); grid_corner.push_back(-1); }
          }
        };
        const BoundaryTag in = BoundaryTag::Internal;
        add_side(gid(i, j), hcross[hidx(i, j)], true, j == 0 ? spec_.bottom : in);
        add_side(gid(i + 1, j), vcross[vidx(i + 1, j)], true, i + 1 == nx_ ? spec_.right : in);
        add_side(gid(i + 1, j + 1), hcross[hidx(i, j + 1)], false, j + 1 == ny_ ? spec_.top : in);
        add_side(gid(i, j + 1), vcross[vidx(i, j)], false, i == 0 ? spec_.left : in);
        const int m = static_cast<int>(nodes.size());

        std::set<int> touching;
        for (const BoundaryNode& nd : nodes) {
          if (nd.iface >= 0) touching.insert(nd.iface);
        }
        const Vec2 cell_center = 0.5 * (pos_[gid(i, j)] + pos_[gid(i + 1, j + 1)]);
        auto edge_between = [&](int a, int c) {
          return b.straight_edge(nodes[a].vertex, nodes[c].vertex, side_tag[a]);
        };

        int split_iface = -1;
        std::vector<int> on;
        for (int c : touching) {
          std::vector<int> idx;
          for (int k = 0; k < m; ++k) {
            if (nodes[k].iface == c) idx.push_back(k);
          }
          if (idx.size() > 2) {
            throw MeshError("circle meets cell (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") in more than two points; nudge n");
          }
          if (idx.size() == 2 && arc_enters_cell(c, nodes[idx[0]].vertex, nodes[idx[1]].vertex, b, i, j)) {
            if (split_iface >= 0) {
              throw MeshError("two interfaces cross cell (" + std::to_string(i) + ", " + std::to_string(j) + "); refine n");
            }
            split_iface = c;
            on = idx;
          }
        }

        if (split_iface < 0) {
          std::vector<EdgeUse> loop;
          for (int k = 0; k < m; ++k) loop.push_back(edge_between(k, (k + 1) % m));
          int parity = 0;
          for (int c = 0; c < nc; ++c) parity += level(c, cell_center) < 0 ? 1 : 0;
          b.add_element(std::move(loop), parity % 2);
          continue;
        }

        const int c = split_iface;
        const CircleInterface& ci = spec_.interfaces[c];
        const int P = on[0], Q = on[1];
        const Vec2 p = b.mesh().vertices[nodes[P].vertex], q = b.mesh().vertices[nodes[Q].vertex];
        const double thp = std::atan2(p.y() - ci.center.y(), p.x() - ci.center.x());
        double thq = std::atan2(q.y() - ci.center.y(), q.x() - ci.center.x());
        while (thq - thp > std::numbers::pi) thq -= 2.0 * std::numbers::pi;
        while (thq - thp < -std::numbers::pi) thq += 2.0 * std::numbers::pi;
        const int curve = b.add_curve(Curve::arc(ci.center, ci.radius, thp, thq));
        const EdgeUse arc = b.curved_edge(nodes[P].vertex, nodes[Q].vertex, curve, 0.0,
                                          b.mesh().curves[curve].length(), BoundaryTag::Interface);

        auto fragment = [&](int from, int to, bool arc_reversed, std::vector<int>& corners) {
          std::vector<EdgeUse> loop;
          for (int k = from; k != to; k = (k + 1) % m) {
            loop.push_back(edge_between(k, (k + 1) % m));
            if (k != from && grid_corner[k] >= 0) corners.push_back(grid_corner[k]);
          }
          loop.push_back({arc.edge, arc_reversed});
          // Side of each interface taken from the first straight sub-edge midpoint.
          const Vec2 probe = 0.5 * (b.mesh().vertices[nodes[from].vertex] + b.mesh().vertices[nodes[(from + 1) % m].vertex]);
          int parity = 0;
          for (int cc = 0; cc < nc; ++cc) {
            const Vec2 pt = cc == c ? probe : cell_center;
            parity += level(cc, pt) < 0 ? 1 : 0;
          }
          b.add_element(std::move(loop), parity % 2);
          return static_cast<int>(b.mesh().elements.size()) - 1;
        };
        Split s;
        s.cell = hidx(i, j);
        s.iface = c;
        s.element_a = fragment(P, Q, true, s.corners_a);
        s.element_b = fragment(Q, P, false, s.corners_b);
        splits.push_back(std::move(s));
      }
    }

    Mesh mesh = b.finish();
    const double cell_area = hx_ * hy_;
    for (const Split& s : splits) {
      for (int side = 0; side < 2; ++side) {
        const int e = side == 0 ? s.element_a : s.element_b;
        const auto& corners = side == 0 ? s.corners_a : s.corners_b;
        if (mesh.elements[e].area >= 1e-3 * cell_area) continue;
        if (corners.size() != 1) {
          throw MeshError("tiny cut fragment without a unique grid corner; nudge n or the circle radius");
        }
        request = SnapRequest{corners.front(), s.iface};
        return mesh;
      }
    }
    mesh.region_names[0] = spec_.outside_name;
    if (nc > 0) mesh.region_names[1] = spec_.inside_name;
    for (const auto& [id, name] : mesh.region_names) mesh.materials[id] = Material{};
    return mesh;
  }

  // The minor arc between two on-circle nodes passes through the cell interior.
  bool arc_enters_cell(int c, int va, int vb, MeshBuilder& b, int i, int j) const {
    const CircleInterface& ci = spec_.interfaces[c];
    const Vec2 da = b.mesh().vertices[va] - ci.center, db = b.mesh().vertices[vb] - ci.center;
    Vec2 mid = da.normalized() + db.normalized();
    if (mid.norm() < 1e-12) return false;
    mid = ci.center + ci.radius * mid.normalized();
    const double margin = 1e-12 * std::max(hx_, hy_);
    // Snapped corners are no longer axis aligned; use the polygon of the cell corners.
    const Vec2 c0 = pos_[gid(i, j)], c1 = pos_[gid(i + 1, j)], c2 = pos_[gid(i + 1, j + 1)], c3 = pos_[gid(i, j + 1)];
    const Vec2 poly[4] = {c0, c1, c2, c3};
    for (int k = 0; k < 4; ++k) {
      const Vec2 e = poly[(k + 1) % 4] - poly[k];
      if (cross(e, mid - poly[k]) <= margin * e.norm()) return false;
    }
    return true;
  }

  const CutGridSpec& spec_;
  int nx_, ny_;
  double hx_, hy_;
  std::vector<Vec2> pos_;
};

}  // namespace

Mesh build_cut_grid(const CutGridSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) throw MeshError("cut grid needs at least one cell per direction");
  if (!(spec.upper.x() > spec.lower.x()) || !(spec.upper.y() > spec.lower.y())) {
    throw MeshError("cut grid box is empty");
  }
  for (const CircleInterface& c : spec.interfaces) {
    if (!(c.radius > 0.0)) throw MeshError("interface radius must be positive");
  }
  CutGridBuilder builder(spec);
  return builder.build();
}

}  // namespace curvewave
