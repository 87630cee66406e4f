#include "curvewave/forms.hpp"

#include "curvewave/quadrature.hpp"

namespace curvewave {

Eigen::MatrixXd local_mass(const LocalSpace& space, double rho) {
  const int n = space.size();
  const double h = space.diameter();
  const Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n) - space.pi0();
  Eigen::MatrixXd m = rho * (space.pi0_star().transpose() * space.H() * space.pi0_star()) +
                      (rho * h * h) * (t.transpose() * t);
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd local_stiffness(const LocalSpace& space, double mu) {
  const int n = space.size();
  const Eigen::MatrixXd hl = space.H_low();
  const Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n) - space.pi_nabla();
  Eigen::MatrixXd a = t.transpose() * t;
  for (int c = 0; c < 2; ++c) a += space.pi0_grad_star(c).transpose() * hl * space.pi0_grad_star(c);
  a *= mu;
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd local_absorbing(double edge_length, double rho, int k) {
  const EdgeLagrange lagrange(k);
  const EdgeRule rule = gauss_legendre(k + 1).mapped(0.0, 1.0);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int q = 0; q < rule.points; ++q) {
    const Eigen::VectorXd l = lagrange.values(rule.nodes[q]);
    c += rule.weights[q] * (l * l.transpose());
  }
  return (rho * edge_length) * c;
}

LocalLoad::LocalLoad(const Mesh& mesh, const LocalSpace& space) {
  const CellRule rule = element_cell_rule(mesh, mesh.elements[space.element()], 2 * space.k());
  points_ = rule.points;
  basis_.resize(static_cast<Eigen::Index>(points_.size()), space.size());
  for (std::size_t q = 0; q < points_.size(); ++q) {
    basis_.row(q) = rule.weights[q] * (space.basis().values(points_[q]).transpose() * space.pi0_star());
  }
}

Eigen::VectorXd LocalLoad::operator()(const std::function<double(const Vec2&)>& f) const {
  Eigen::VectorXd fv(points_.size());
  for (std::size_t q = 0; q < points_.size(); ++q) fv[q] = f(points_[q]);
  return basis_.transpose() * fv;
}

Eigen::MatrixXd mass_against_monomials(const LocalSpace& space, double rho) {
  return rho * space.pi0_star().transpose() * space.H();
}

Eigen::MatrixXd stiffness_against_monomials(const LocalSpace& space, double mu) {
  const int nk = space.n_poly(), nl = space.n_low();
  const Eigen::MatrixXd hl = space.H_low();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(space.size(), nk);
  for (int c = 0; c < 2; ++c) {
    // Coefficients of d_c m_a in P_{k-1}.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nl, nk);
    for (int i = 0; i < nk; ++i) {
      const auto [a, b] = ScaledMonomials::exponent(i);
      if (c == 0 && a > 0) d(ScaledMonomials::index(a - 1, b), i) = a / space.diameter();
      if (c == 1 && b > 0) d(ScaledMonomials::index(a, b - 1), i) = b / space.diameter();
    }
    out += space.pi0_grad_star(c).transpose() * hl * d;
  }
  return mu * out;
}

}  // namespace curvewave
