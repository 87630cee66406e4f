#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <functional>
#include <string>

#include "curvewave/error.hpp"
#include "curvewave/geometry.hpp"

namespace curvewave {

enum class RuleKind { GaussLegendre, GaussLobatto };

struct EdgeRule {
  RuleKind kind = RuleKind::GaussLegendre;
  int points = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  // Affine image of a reference rule on [-1, 1] onto [a, b].
  EdgeRule mapped(double a, double b) const;
};

// Reference rules on [-1, 1], computed once and cached.
const EdgeRule& gauss_legendre(int n);
const EdgeRule& gauss_lobatto(int n);

inline constexpr int kMaxEdgePoints = 64;
inline constexpr double kEscalationTolerance = 1e-13;

// Recursive Gauss-Legendre bisection until the local estimate changes by
// less than rel_tol of the running total.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-14);

// Integrates a vector-valued integrand along one element edge.  `accumulate`
// is called as accumulate(tau, x, n, w, acc) and adds w * integrand(tau) to
// acc.  Straight edges use `exact_points` Gauss-Legendre points; curved edges
// start at max(exact_points, curved_start) per smooth piece and double until
// two successive results agree to kEscalationTolerance relative.
template <class F>
Eigen::VectorXd integrate_edge(const OrientedEdge& edge, Eigen::Index size, int exact_points,
                               int curved_start, F&& accumulate) {
  const std::vector<double> pieces = edge.pieces();
  auto run = [&](int n) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(size);
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
      const EdgeRule rule = gauss_legendre(n).mapped(pieces[p], pieces[p + 1]);
      for (int q = 0; q < n; ++q) {
        const double tau = rule.nodes[q];
        accumulate(tau, edge.point(tau), edge.normal(tau), rule.weights[q], acc);
      }
    }
    return acc;
  };
  if (!edge.map.curved()) return run(std::max(1, exact_points));

  int n = std::min(kMaxEdgePoints, std::max(exact_points, curved_start));
  Eigen::VectorXd coarse = run(n);
  while (n < kMaxEdgePoints) {
    n = std::min(kMaxEdgePoints, 2 * n);
    Eigen::VectorXd fine = run(n);
    const double scale = std::max(fine.lpNorm<Eigen::Infinity>(), coarse.lpNorm<Eigen::Infinity>());
    const double diff = (fine - coarse).lpNorm<Eigen::Infinity>();
    if (diff <= kEscalationTolerance * scale || scale < 1e-300) return fine;
    coarse = std::move(fine);
  }
  throw QuadratureError("edge quadrature did not converge with " + std::to_string(kMaxEdgePoints) +
                        " points");
}

}  // namespace curvewave
