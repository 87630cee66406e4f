#include "curvewave/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>

namespace curvewave {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = std::abs(x) < 1.0 ? n * (p0 - x * p1) / (1.0 - x * x) : 0.5 * n * (n + 1) * std::pow(x, n + 1);
  return {p1, dp};
}

EdgeRule compute_legendre(int n) {
  EdgeRule rule;
  rule.kind = RuleKind::GaussLegendre;
  rule.points = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

EdgeRule compute_lobatto(int n) {
  EdgeRule rule;
  rule.kind = RuleKind::GaussLobatto;
  rule.points = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = n - 1;
  const double end_weight = 2.0 / (m * (m + 1.0));
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;
  rule.weights.front() = rule.weights.back() = end_weight;
  // Interior nodes: roots of P_m', Newton with P_m'' from the Legendre ODE.
  for (int i = 1; i <= (n - 2) / 2; ++i) {
    double x = -std::cos(std::numbers::pi * i / m);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(m, x);
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre(m, x);
    (void)dp;
    const double w = end_weight / (p * p);
    rule.nodes[i] = x;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    const auto [p, dp] = legendre(m, 0.0);
    (void)dp;
    rule.nodes[n / 2] = 0.0;
    rule.weights[n / 2] = end_weight / (p * p);
  }
  return rule;
}

constexpr int kCacheSize = 257;

template <EdgeRule (*Compute)(int)>
const EdgeRule& cached(int n) {
  static std::array<std::unique_ptr<EdgeRule>, kCacheSize> table;
  static std::mutex mutex;
  if (n >= kCacheSize) {
    thread_local EdgeRule scratch;
    scratch = Compute(n);
    return scratch;
  }
  std::lock_guard lock(mutex);
  if (!table[n]) table[n] = std::make_unique<EdgeRule>(Compute(n));
  return *table[n];
}

// `floor` bounds the accepted change from below at the round-off level of
// the whole integral so that halving `tol` cannot recurse without end.
double adaptive_step(const std::function<double(double)>& f, double a, double b, double whole,
                     double tol, double floor, int depth) {
  const EdgeRule& g = gauss_legendre(10);
  auto integrate = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double sum = 0.0;
    for (int q = 0; q < g.points; ++q) sum += g.weights[q] * f(c + r * g.nodes[q]);
    return sum * r;
  };
  const double mid = 0.5 * (a + b);
  const double left = integrate(a, mid), right = integrate(mid, b);
  if (std::abs(left + right - whole) <= std::max(tol, floor) || depth <= 0) return left + right;
  return adaptive_step(f, a, mid, left, 0.5 * tol, floor, depth - 1) +
         adaptive_step(f, mid, b, right, 0.5 * tol, floor, depth - 1);
}

}  // namespace

EdgeRule EdgeRule::mapped(double a, double b) const {
  EdgeRule out = *this;
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  for (int i = 0; i < points; ++i) {
    out.nodes[i] = c + r * nodes[i];
    out.weights[i] = r * weights[i];
  }
  if (kind == RuleKind::GaussLobatto && points >= 2) {
    out.nodes.front() = a;
    out.nodes.back() = b;
  }
  return out;
}

const EdgeRule& gauss_legendre(int n) {
  if (n < 1) throw QuadratureError("Gauss-Legendre rule needs at least 1 point");
  return cached<compute_legendre>(n);
}

const EdgeRule& gauss_lobatto(int n) {
  if (n < 2) throw QuadratureError("Gauss-Lobatto rule needs at least 2 points");
  return cached<compute_lobatto>(n);
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
  if (b == a) return 0.0;
  const EdgeRule& g = gauss_legendre(10);
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double whole = 0.0, magnitude = 0.0;
  for (int q = 0; q < g.points; ++q) {
    const double v = f(c + r * g.nodes[q]);
    whole += g.weights[q] * v;
    magnitude += g.weights[q] * std::abs(v);
  }
  whole *= r;
  magnitude *= std::abs(r);
  const double scale = std::max(magnitude, 1e-300);
  return adaptive_step(f, a, b, whole, rel_tol * scale, 8 * std::numeric_limits<double>::epsilon() * scale, 40);
}

}  // namespace curvewave
