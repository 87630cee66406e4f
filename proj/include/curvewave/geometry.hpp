#pragma once

#include <Eigen/Core>
#include <variant>
#include <vector>

namespace curvewave {

using Vec2 = Eigen::Vector2d;

// Relative tolerance for all curve evaluations and inversions.
inline constexpr double kGeometryTolerance = 1e-12;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

enum class CurveKind { Segment, Arc, Sampled };

struct SegmentShape {
  Vec2 a, b;
};

// Counterclockwise when theta1 > theta0.
struct ArcShape {
  Vec2 center;
  double radius;
  double theta0, theta1;
};

// C1 cubic Hermite through the samples; tangents from finite differences.
struct SampledShape {
  std::vector<double> params;
  std::vector<Vec2> points;
  std::vector<Vec2> tangents;
};

// Monotone table (native parameter -> cumulative arc length) at the
// sample knots of a sampled curve.
struct ArcLengthMap {
  std::vector<double> t;
  std::vector<double> s;
  double total = 0.0;
};

class Curve {
 public:
  static Curve segment(const Vec2& a, const Vec2& b);
  static Curve arc(const Vec2& center, double radius, double theta0, double theta1);
  static Curve sampled(std::vector<double> params, std::vector<Vec2> points);

  CurveKind kind() const;
  double length() const { return length_; }

  double native_begin() const;
  double native_end() const;
  Vec2 native_point(double t) const;
  Vec2 native_derivative(double t) const;
  Vec2 native_second_derivative(double t) const;
  double arc_length(double t0, double t1) const;
  double native_from_arc_length(double s) const;

  // Unit-speed evaluation, s in [0, length()].
  Vec2 point(double s) const;
  Vec2 tangent(double s) const;
  double locate(const Vec2& p) const;

  const SegmentShape* as_segment() const { return std::get_if<SegmentShape>(&shape_); }
  const ArcShape* as_arc() const { return std::get_if<ArcShape>(&shape_); }
  const SampledShape* as_sampled() const { return std::get_if<SampledShape>(&shape_); }
  const ArcLengthMap& arc_length_map() const { return map_; }

 private:
  Curve() = default;
  void check_s(double s) const;
  int piece_of(double t) const;

  std::variant<SegmentShape, ArcShape, SampledShape> shape_;
  ArcLengthMap map_;
  double length_ = 0.0;
};

// Unit-speed map sigma in [0, length] onto an edge: either a chord between
// two points or the sub-range [s0, s1] of a curve (s1 < s0 runs backwards).
// Holds a non-owning pointer; the curve must outlive the map.
class EdgeMap {
 public:
  static EdgeMap straight(const Vec2& a, const Vec2& b);
  static EdgeMap on_curve(const Curve& curve, double s0, double s1);

  bool curved() const { return curve_ != nullptr; }
  double length() const { return length_; }
  Vec2 point(double sigma) const;
  Vec2 tangent(double sigma) const;
  double locate(const Vec2& p) const;
  // Sample knots of a sampled curve strictly inside the edge, as increasing sigma.
  std::vector<double> breakpoints() const;

 private:
  const Curve* curve_ = nullptr;
  Vec2 a_ = Vec2::Zero(), b_ = Vec2::Zero();
  double s0_ = 0.0, dir_ = 1.0, length_ = 0.0;
};

struct EdgeFrame {
  Vec2 point;
  Vec2 tangent;
  Vec2 normal;
};

// orientation = -1 when the owning element traverses the edge backwards.
EdgeFrame edge_frame(const EdgeMap& edge, double sigma, int orientation);

// An edge as seen from one element: parameter tau runs along the traversal
// direction, so the outward normal is the tangent rotated by -90 degrees.
struct OrientedEdge {
  EdgeMap map;
  bool reversed = false;

  double length() const { return map.length(); }
  double sigma(double tau) const { return reversed ? map.length() - tau : tau; }
  Vec2 point(double tau) const { return map.point(sigma(tau)); }
  Vec2 tangent(double tau) const {
    Vec2 t = map.tangent(sigma(tau));
    return reversed ? Vec2(-t) : t;
  }
  Vec2 normal(double tau) const {
    Vec2 t = tangent(tau);
    return {t.y(), -t.x()};
  }
  // 0, the interior breakpoints and length() as increasing tau; the edge is
  // smooth on each piece.
  std::vector<double> pieces() const;
};

}  // namespace curvewave
