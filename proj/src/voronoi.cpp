#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "curvewave/error.hpp"
#include "curvewave/generators.hpp"

namespace curvewave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Polygon = std::vector<Vec2>;

// Keeps the part of a convex polygon with n.x <= c.
Polygon clip_half_plane(const Polygon& poly, const Vec2& n, double c) {
  Polygon out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % m];
    const double fp = n.dot(p) - c, fq = n.dot(q) - c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) out.push_back(p + (fp / (fp - fq)) * (q - p));
  }
  return out;
}

// Convex Voronoi cell of seed i, bounded by a box around the outer circle.
Polygon voronoi_cell(const std::vector<Vec2>& seeds, std::size_t i, double r_outer) {
  const double b = 2.0 * r_outer;
  Polygon cell = {{-b, -b}, {b, -b}, {b, b}, {-b, b}};
  const Vec2 s = seeds[i];
  std::vector<std::size_t> order(seeds.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(seeds.size());
  for (std::size_t j = 0; j < seeds.size(); ++j) dist[j] = (seeds[j] - s).norm();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return dist[a] < dist[c]; });
  for (std::size_t j : order) {
    if (j == i) continue;
    double reach = 0.0;
    for (const Vec2& v : cell) reach = std::max(reach, (v - s).norm());
    if (dist[j] > 2.0 * reach) break;
    const Vec2 n = seeds[j] - s;
    cell = clip_half_plane(cell, n, n.dot(0.5 * (seeds[j] + s)));
  }
  return cell;
}

std::pair<double, Vec2> area_centroid(const Polygon& p) {
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    const double w = cross(u, v);
    a += w;
    c += w * (u + v);
  }
  a *= 0.5;
  if (a != 0.0) c /= 6.0 * a;
  return {a, c};
}

Polygon clip_disk(Polygon cell, double radius, int sides) {
  for (int l = 0; l < sides && !cell.empty(); ++l) {
    const double th = kTwoPi * (l + 0.5) / sides;
    cell = clip_half_plane(cell, Vec2(std::cos(th), std::sin(th)), radius * std::cos(std::numbers::pi / sides));
  }
  return cell;
}

struct Piece {
  Vec2 a, b;
  int circle = -1;  // -1 straight, 0 inner, 1 outer
  double th_a = 0.0, th_b = 0.0;
  bool a_on = false, b_on = false;
};

double angle_of(const Vec2& p) { return std::atan2(p.y(), p.x()); }

// Parameters u1 < u2 where a + u (b - a) meets the circle of radius r about the origin.
bool circle_params(const Vec2& a, const Vec2& b, double r, double& u1, double& u2) {
  const Vec2 d = b - a;
  const double qa = d.squaredNorm(), qb = a.dot(d), qc = a.squaredNorm() - r * r;
  const double disc = qb * qb - qa * qc;
  if (disc <= 0.0) return false;
  const double sq = std::sqrt(disc);
  u1 = (-qb - sq) / qa;
  u2 = (-qb + sq) / qa;
  return true;
}

Piece make_arc(const Vec2& from, const Vec2& to, int circle, double radius, bool ccw) {
  Piece arc;
  arc.a = from;
  arc.b = to;
  arc.circle = circle;
  arc.th_a = angle_of(from);
  arc.th_b = angle_of(to);
  if (ccw) {
    while (arc.th_b <= arc.th_a) arc.th_b += kTwoPi;
  } else {
    while (arc.th_b >= arc.th_a) arc.th_b -= kTwoPi;
  }
  arc.a = radius * Vec2(std::cos(arc.th_a), std::sin(arc.th_a));
  arc.b = radius * Vec2(std::cos(arc.th_b), std::sin(arc.th_b));
  return arc;
}

// Closes a sequence of straight pieces with arcs wherever a piece ends on
// the circle and the next one starts on it.
std::vector<Piece> close_with_arcs(const std::vector<Piece>& pieces, int circle, double radius, bool ccw,
                                   int& arcs_added) {
  std::vector<Piece> out;
  arcs_added = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    out.push_back(pieces[i]);
    const Piece& next = pieces[(i + 1) % pieces.size()];
    if (pieces[i].b_on && pieces[i].circle < 0) {
      out.push_back(make_arc(pieces[i].b, next.a, circle, radius, ccw));
      ++arcs_added;
    }
  }
  return out;
}

std::vector<Piece> clip_cell_to_annulus(const Polygon& cell, double r_inner, double r_outer) {
  // Intersection with the outer disk.
  std::vector<Piece> inside;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    const Vec2 p = cell[i], q = cell[(i + 1) % cell.size()];
    double u1, u2;
    if (!circle_params(p, q, r_outer, u1, u2)) continue;
    const double lo = std::max(0.0, u1), hi = std::min(1.0, u2);
    if (hi <= lo) continue;
    Piece s;
    s.a = p + lo * (q - p);
    s.b = p + hi * (q - p);
    s.a_on = u1 > 0.0;
    s.b_on = u2 < 1.0;
    inside.push_back(s);
  }
  if (inside.empty()) throw MeshError("Voronoi cell contains the whole outer disk; add seeds");
  int arcs = 0;
  std::vector<Piece> outer = close_with_arcs(inside, 1, r_outer, true, arcs);

  // Removal of the inner disk from the straight pieces.
  std::vector<Piece> kept;
  bool touched = false;
  for (const Piece& pc : outer) {
    if (pc.circle >= 0) {
      Piece copy = pc;
      copy.a_on = copy.b_on = false;
      kept.push_back(copy);
      continue;
    }
    double u1, u2;
    if (!circle_params(pc.a, pc.b, r_inner, u1, u2) || u2 <= 0.0 || u1 >= 1.0) {
      Piece copy = pc;
      copy.a_on = copy.b_on = false;
      kept.push_back(copy);
      continue;
    }
    touched = true;
    if (u1 > 0.0) {
      Piece s = pc;
      s.b = pc.a + u1 * (pc.b - pc.a);
      s.a_on = false;
      s.b_on = true;
      kept.push_back(s);
    }
    if (u2 < 1.0) {
      Piece s = pc;
      s.a = pc.a + u2 * (pc.b - pc.a);
      s.a_on = true;
      s.b_on = false;
      kept.push_back(s);
    }
  }
  if (!touched) {
    bool contains_origin = true;
    for (std::size_t i = 0; i < cell.size(); ++i) {
      if (cross(cell[(i + 1) % cell.size()] - cell[i], -cell[i]) < 0) contains_origin = false;
    }
    if (contains_origin) throw MeshError("Voronoi cell contains the inner disk; add seeds");
    return outer;
  }
  std::vector<Piece> result = close_with_arcs(kept, 0, r_inner, false, arcs);
  if (arcs != 1) throw MeshError("inner circle splits a Voronoi cell into several parts; perturb the seeds");
  return result;
}

void check_seeds(const std::vector<Vec2>& seeds, double r_inner, double r_outer) {
  if (seeds.size() < 3) throw MeshError("ring_voronoi needs at least 3 seeds");
  if (!(r_inner > 0.0) || !(r_outer > r_inner)) throw MeshError("ring_voronoi needs 0 < r_inner < r_outer");
  for (const Vec2& s : seeds) {
    const double r = s.norm();
    if (!(r > r_inner && r < r_outer)) throw MeshError("seed outside the annulus");
  }
  std::vector<std::size_t> order(seeds.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return seeds[a].x() < seeds[b].x(); });
  const double tol = kGeometryTolerance * r_outer;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size() && seeds[order[j]].x() - seeds[order[i]].x() <= tol; ++j) {
      if ((seeds[order[i]] - seeds[order[j]]).norm() <= tol) throw MeshError("duplicate Voronoi seeds");
    }
  }
}

}  // namespace

Mesh build_ring_voronoi(const std::vector<Vec2>& seeds, double r_inner, double r_outer) {
  check_seeds(seeds, r_inner, r_outer);
  MeshBuilder b(1e-10 * r_outer);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::vector<Piece> pieces = clip_cell_to_annulus(voronoi_cell(seeds, i, r_outer), r_inner, r_outer);
    std::vector<EdgeUse> loop;
    for (const Piece& pc : pieces) {
      const int va = b.vertex(pc.a), vb = b.vertex(pc.b);
      if (va == vb) continue;
      if (pc.circle < 0) {
        loop.push_back(b.straight_edge(va, vb, BoundaryTag::Internal));
      } else {
        const double radius = pc.circle == 0 ? r_inner : r_outer;
        const int c = b.add_curve(Curve::arc(Vec2::Zero(), radius, pc.th_a, pc.th_b));
        loop.push_back(b.curved_edge(va, vb, c, 0.0, b.mesh().curves[c].length(), BoundaryTag::Dirichlet));
      }
    }
    b.add_element(std::move(loop), 0);
  }
  Mesh mesh = b.finish();
  mesh.region_names[0] = "domain";
  mesh.materials[0] = Material{};
  return mesh;
}

std::vector<Vec2> ring_seeds(int count, double r_inner, double r_outer, std::uint64_t seed, int lloyd_iterations) {
  if (count < 3) throw MeshError("need at least 3 seeds");
  std::mt19937_64 rng(seed);
  // 53-bit uniform doubles, identical on every platform.
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec2> seeds(count);
  for (Vec2& s : seeds) {
    const double r = std::sqrt(r_inner * r_inner + uniform() * (r_outer * r_outer - r_inner * r_inner));
    const double th = kTwoPi * uniform();
    s = r * Vec2(std::cos(th), std::sin(th));
  }
  constexpr int kSides = 512;
  for (int it = 0; it < lloyd_iterations; ++it) {
    std::vector<Vec2> next(count);
    for (int i = 0; i < count; ++i) {
      const Polygon cell = voronoi_cell(seeds, i, r_outer);
      const auto [ao, co] = area_centroid(clip_disk(cell, r_outer, kSides));
      const auto [ai, ci] = area_centroid(clip_disk(cell, r_inner, kSides));
      next[i] = (ao - ai) > 0 ? Vec2((ao * co - ai * ci) / (ao - ai)) : seeds[i];
      const double r = next[i].norm();
      const double lo = r_inner * (1.0 + 1e-6), hi = r_outer * (1.0 - 1e-6);
      if (r < lo) next[i] *= lo / r;
      if (r > hi) next[i] *= hi / r;
    }
    seeds = std::move(next);
  }
  return seeds;
}

}  // namespace curvewave
