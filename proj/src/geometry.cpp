#include "curvewave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "curvewave/error.hpp"
#include "curvewave/quadrature.hpp"

namespace curvewave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamp_param(double s, double length, const char* what) {
  const double slack = kGeometryTolerance * std::max(length, 1.0);
  if (!(s >= -slack && s <= length + slack)) {
    throw DomainError(std::string(what) + ": parameter " + std::to_string(s) +
                      " outside [0, " + std::to_string(length) + "]");
  }
  return std::clamp(s, 0.0, length);
}

void require_on_curve(const Vec2& p, const Vec2& q, double scale) {
  const double d = (p - q).norm();
  if (d > kGeometryTolerance * std::max({scale, p.norm(), 1.0})) {
    throw GeometryError("point (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                        ") is not on the curve (distance " + std::to_string(d) + ")");
  }
}

}  // namespace

Curve Curve::segment(const Vec2& a, const Vec2& b) {
  Curve c;
  c.shape_ = SegmentShape{a, b};
  c.length_ = (b - a).norm();
  if (!(c.length_ > 0.0) || !std::isfinite(c.length_)) throw GeometryError("degenerate segment");
  return c;
}

Curve Curve::arc(const Vec2& center, double radius, double theta0, double theta1) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("arc radius must be positive");
  if (theta0 == theta1 || std::abs(theta1 - theta0) > kTwoPi * (1.0 + 1e-14)) {
    throw GeometryError("arc angle range must be nonempty and at most one turn");
  }
  Curve c;
  c.shape_ = ArcShape{center, radius, theta0, theta1};
  c.length_ = radius * std::abs(theta1 - theta0);
  return c;
}

Curve Curve::sampled(std::vector<double> params, std::vector<Vec2> points) {
  const std::size_t n = params.size();
  if (n < 2 || points.size() != n) throw GeometryError("sampled curve needs >= 2 matching samples");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(params[i + 1] > params[i])) throw GeometryError("sample parameters must increase");
  }
  std::vector<Vec2> tangents(n);
  if (n == 2) {
    tangents[0] = tangents[1] = (points[1] - points[0]) / (params[1] - params[0]);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double d0 = params[i] - params[i - 1], d1 = params[i + 1] - params[i];
      tangents[i] = ((points[i + 1] - points[i]) / d1 * d0 + (points[i] - points[i - 1]) / d0 * d1) / (d0 + d1);
    }
    {
      const double d0 = params[1] - params[0], d1 = params[2] - params[1];
      tangents[0] = -(2 * d0 + d1) / (d0 * (d0 + d1)) * points[0] + (d0 + d1) / (d0 * d1) * points[1] -
                    d0 / (d1 * (d0 + d1)) * points[2];
    }
    {
      const double d1 = params[n - 1] - params[n - 2], d0 = params[n - 2] - params[n - 3];
      tangents[n - 1] = (2 * d1 + d0) / (d1 * (d0 + d1)) * points[n - 1] - (d0 + d1) / (d0 * d1) * points[n - 2] +
                        d1 / (d0 * (d0 + d1)) * points[n - 3];
    }
  }
  Curve c;
  c.shape_ = SampledShape{std::move(params), std::move(points), std::move(tangents)};
  const auto& sh = std::get<SampledShape>(c.shape_);
  c.map_.t = sh.params;
  c.map_.s.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    c.map_.s[i + 1] = c.map_.s[i] + c.arc_length(sh.params[i], sh.params[i + 1]);
  }
  c.map_.total = c.map_.s.back();
  c.length_ = c.map_.total;
  if (!(c.length_ > 0.0) || !std::isfinite(c.length_)) throw GeometryError("sampled curve has no length");
  return c;
}

CurveKind Curve::kind() const {
  switch (shape_.index()) {
    case 0: return CurveKind::Segment;
    case 1: return CurveKind::Arc;
    default: return CurveKind::Sampled;
  }
}

double Curve::native_begin() const {
  if (const auto* s = as_sampled()) return s->params.front();
  return 0.0;
}

double Curve::native_end() const {
  if (const auto* s = as_sampled()) return s->params.back();
  return 1.0;
}

int Curve::piece_of(double t) const {
  const auto& p = std::get<SampledShape>(shape_).params;
  auto it = std::upper_bound(p.begin(), p.end(), t);
  int i = static_cast<int>(it - p.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(p.size()) - 2);
}

Vec2 Curve::native_point(double t) const {
  if (const auto* s = as_segment()) return s->a + t * (s->b - s->a);
  if (const auto* a = as_arc()) {
    const double th = a->theta0 + t * (a->theta1 - a->theta0);
    return a->center + a->radius * Vec2(std::cos(th), std::sin(th));
  }
  const auto& sh = std::get<SampledShape>(shape_);
  const int i = piece_of(t);
  const double d = sh.params[i + 1] - sh.params[i];
  const double u = (t - sh.params[i]) / d;
  const double h00 = (2 * u - 3) * u * u + 1, h10 = ((u - 2) * u + 1) * u;
  const double h01 = (3 - 2 * u) * u * u, h11 = (u - 1) * u * u;
  return h00 * sh.points[i] + h10 * d * sh.tangents[i] + h01 * sh.points[i + 1] + h11 * d * sh.tangents[i + 1];
}

Vec2 Curve::native_derivative(double t) const {
  if (const auto* s = as_segment()) return s->b - s->a;
  if (const auto* a = as_arc()) {
    const double dth = a->theta1 - a->theta0;
    const double th = a->theta0 + t * dth;
    return a->radius * dth * Vec2(-std::sin(th), std::cos(th));
  }
  const auto& sh = std::get<SampledShape>(shape_);
  const int i = piece_of(t);
  const double d = sh.params[i + 1] - sh.params[i];
  const double u = (t - sh.params[i]) / d;
  const double g00 = 6 * u * u - 6 * u, g10 = 3 * u * u - 4 * u + 1;
  const double g01 = -6 * u * u + 6 * u, g11 = 3 * u * u - 2 * u;
  return (g00 * sh.points[i] + g01 * sh.points[i + 1]) / d + g10 * sh.tangents[i] + g11 * sh.tangents[i + 1];
}

Vec2 Curve::native_second_derivative(double t) const {
  if (as_segment()) return Vec2::Zero();
  if (const auto* a = as_arc()) {
    const double dth = a->theta1 - a->theta0;
    const double th = a->theta0 + t * dth;
    return -a->radius * dth * dth * Vec2(std::cos(th), std::sin(th));
  }
  const auto& sh = std::get<SampledShape>(shape_);
  const int i = piece_of(t);
  const double d = sh.params[i + 1] - sh.params[i];
  const double u = (t - sh.params[i]) / d;
  return ((12 * u - 6) * sh.points[i] + (6 - 12 * u) * sh.points[i + 1]) / (d * d) +
         ((6 * u - 4) * sh.tangents[i] + (6 * u - 2) * sh.tangents[i + 1]) / d;
}

double Curve::arc_length(double t0, double t1) const {
  const double a = native_begin(), b = native_end();
  const double slack = kGeometryTolerance * (b - a);
  if (!(t0 >= a - slack && t1 <= b + slack && t0 <= t1 + slack)) {
    throw DomainError("arc_length: parameters outside the native range");
  }
  t0 = std::clamp(t0, a, b);
  t1 = std::clamp(t1, a, b);
  if (t1 <= t0) return 0.0;
  if (as_segment() || as_arc()) return length_ * (t1 - t0);
  auto speed = [this](double t) {
    const double v = native_derivative(t).norm();
    if (!std::isfinite(v)) throw GeometryError("non-finite tangent on sampled curve");
    return v;
  };
  const auto& p = std::get<SampledShape>(shape_).params;
  const int i0 = piece_of(t0), i1 = piece_of(t1);
  double total = 0.0;
  for (int i = i0; i <= i1; ++i) {
    const double lo = std::max(t0, p[i]), hi = std::min(t1, p[i + 1]);
    if (hi > lo) total += adaptive_integrate(speed, lo, hi, 1e-15);
  }
  return total;
}

double Curve::native_from_arc_length(double s) const {
  s = clamp_param(s, length_, "arc-length inversion");
  if (as_segment() || as_arc()) return s / length_;
  const auto& tab = map_;
  auto it = std::upper_bound(tab.s.begin(), tab.s.end(), s);
  const int i = std::clamp(static_cast<int>(it - tab.s.begin()) - 1, 0, static_cast<int>(tab.s.size()) - 2);
  double lo = tab.t[i], hi = tab.t[i + 1];
  const double target = s - tab.s[i];
  const double piece = tab.s[i + 1] - tab.s[i];
  double t = lo + (hi - lo) * (piece > 0 ? target / piece : 0.0);
  const double tol = 1e-14 * std::max(length_, 1e-300);
  for (int it_count = 0; it_count < 100; ++it_count) {
    const double f = arc_length(tab.t[i], t) - target;
    if (std::abs(f) <= tol) return t;
    if (f > 0) hi = t; else lo = t;
    const double speed = native_derivative(t).norm();
    double next = speed > 0 ? t - f / speed : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(t))) return t;
    t = next;
  }
  return t;
}

void Curve::check_s(double s) const { clamp_param(s, length_, "curve_point"); }

Vec2 Curve::point(double s) const {
  s = clamp_param(s, length_, "curve_point");
  if (const auto* a = as_arc()) {
    const double th = a->theta0 + (a->theta1 > a->theta0 ? 1.0 : -1.0) * s / a->radius;
    return a->center + a->radius * Vec2(std::cos(th), std::sin(th));
  }
  if (const auto* g = as_segment()) return g->a + (s / length_) * (g->b - g->a);
  return native_point(native_from_arc_length(s));
}

Vec2 Curve::tangent(double s) const {
  s = clamp_param(s, length_, "curve_tangent");
  if (const auto* a = as_arc()) {
    const double dir = a->theta1 > a->theta0 ? 1.0 : -1.0;
    const double th = a->theta0 + dir * s / a->radius;
    return dir * Vec2(-std::sin(th), std::cos(th));
  }
  if (const auto* g = as_segment()) return (g->b - g->a) / length_;
  const Vec2 d = native_derivative(native_from_arc_length(s));
  const double n = d.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw GeometryError("vanishing tangent on sampled curve");
  return d / n;
}

double Curve::locate(const Vec2& p) const {
  double s = 0.0;
  if (const auto* g = as_segment()) {
    s = std::clamp((p - g->a).dot(g->b - g->a) / length_, 0.0, length_);
  } else if (const auto* a = as_arc()) {
    const double lo = std::min(a->theta0, a->theta1), hi = std::max(a->theta0, a->theta1);
    const Vec2 d = p - a->center;
    double phi = std::atan2(d.y(), d.x());
    phi = lo + std::fmod(std::fmod(phi - lo, kTwoPi) + kTwoPi, kTwoPi);
    if (phi > hi) phi = (phi - hi < lo + kTwoPi - phi) ? hi : lo;
    s = a->radius * std::abs(phi - a->theta0);
  } else {
    const auto& sh = std::get<SampledShape>(shape_);
    const int n = static_cast<int>(sh.points.size());
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if ((sh.points[i] - p).squaredNorm() < (sh.points[best] - p).squaredNorm()) best = i;
    }
    double lo = sh.params[std::max(best - 1, 0)], hi = sh.params[std::min(best + 1, n - 1)];
    auto dist2 = [&](double t) { return (native_point(t) - p).squaredNorm(); };
    // Golden-section search for the foot point, then Newton on (g - p).g' = 0.
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = dist2(x1), f2 = dist2(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-10 * (sh.params.back() - sh.params.front()); ++it) {
      if (f1 < f2) { hi = x2; x2 = x1; f2 = f1; x1 = hi - r * (hi - lo); f1 = dist2(x1); }
      else { lo = x1; x1 = x2; f1 = f2; x2 = lo + r * (hi - lo); f2 = dist2(x2); }
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 20; ++it) {
      const Vec2 g = native_point(t) - p, d1 = native_derivative(t), d2 = native_second_derivative(t);
      const double f = g.dot(d1), df = d1.squaredNorm() + g.dot(d2);
      if (df <= 0) break;
      const double next = std::clamp(t - f / df, sh.params.front(), sh.params.back());
      if (std::abs(next - t) < 1e-16 * std::max(1.0, std::abs(t))) { t = next; break; }
      t = next;
    }
    s = arc_length(sh.params.front(), t);
  }
  s = std::clamp(s, 0.0, length_);
  require_on_curve(p, point(s), length_);
  return s;
}

EdgeMap EdgeMap::straight(const Vec2& a, const Vec2& b) {
  EdgeMap m;
  m.a_ = a;
  m.b_ = b;
  m.length_ = (b - a).norm();
  if (!(m.length_ > 0.0)) throw GeometryError("degenerate straight edge");
  return m;
}

EdgeMap EdgeMap::on_curve(const Curve& curve, double s0, double s1) {
  EdgeMap m;
  m.curve_ = &curve;
  m.s0_ = s0;
  m.dir_ = s1 >= s0 ? 1.0 : -1.0;
  m.length_ = std::abs(s1 - s0);
  if (!(m.length_ > 0.0)) throw GeometryError("degenerate curved edge");
  m.a_ = curve.point(s0);
  m.b_ = curve.point(s1);
  return m;
}

Vec2 EdgeMap::point(double sigma) const {
  sigma = clamp_param(sigma, length_, "edge point");
  if (!curve_) return a_ + (sigma / length_) * (b_ - a_);
  if (sigma == 0.0) return a_;
  if (sigma == length_) return b_;
  return curve_->point(s0_ + dir_ * sigma);
}

Vec2 EdgeMap::tangent(double sigma) const {
  sigma = clamp_param(sigma, length_, "edge tangent");
  if (!curve_) return (b_ - a_) / length_;
  return dir_ * curve_->tangent(s0_ + dir_ * sigma);
}

double EdgeMap::locate(const Vec2& p) const {
  if (!curve_) {
    const double sigma = std::clamp((p - a_).dot(b_ - a_) / length_, 0.0, length_);
    require_on_curve(p, point(sigma), length_);
    return sigma;
  }
  const double s = curve_->locate(p);
  return clamp_param(dir_ * (s - s0_), length_, "edge locate");
}

std::vector<double> EdgeMap::breakpoints() const {
  std::vector<double> out;
  if (!curve_ || !curve_->as_sampled()) return out;
  const double margin = 1e-12 * length_;
  for (double s : curve_->arc_length_map().s) {
    const double sigma = dir_ * (s - s0_);
    if (sigma > margin && sigma < length_ - margin) out.push_back(sigma);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> OrientedEdge::pieces() const {
  const double h = length();
  std::vector<double> out{0.0};
  for (double sigma : map.breakpoints()) out.push_back(reversed ? h - sigma : sigma);
  out.push_back(h);
  std::sort(out.begin(), out.end());
  return out;
}

EdgeFrame edge_frame(const EdgeMap& edge, double sigma, int orientation) {
  EdgeFrame f;
  f.point = edge.point(sigma);
  f.tangent = (orientation < 0 ? -1.0 : 1.0) * edge.tangent(sigma);
  f.normal = Vec2(f.tangent.y(), -f.tangent.x());
  return f;
}

}  // namespace curvewave
