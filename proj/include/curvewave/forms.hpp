#pragma once

#include <Eigen/Dense>
#include <functional>

#include "curvewave/local_space.hpp"

namespace curvewave {

// rho Pi0^T H Pi0 + rho h_E^2 (I - D Pi0)^T (I - D Pi0).
Eigen::MatrixXd local_mass(const LocalSpace& space, double rho);

// mu sum_c (Pi0 d_c)^T H_{k-1} (Pi0 d_c) + mu (I - Pi_nabla)^T (I - Pi_nabla).
Eigen::MatrixXd local_stiffness(const LocalSpace& space, double mu);

// Edge mass of the k+1 nodal Lagrange functions on an arc-length edge,
// ordered start, interior nodes, end.
Eigen::MatrixXd local_absorbing(double edge_length, double rho, int k);

// f_E[i] = sum_q w_q f(x_q) (Pi0 phi_i)(x_q) on a cell rule of degree 2k.
class LocalLoad {
 public:
  LocalLoad(const Mesh& mesh, const LocalSpace& space);
  Eigen::VectorXd operator()(const std::function<double(const Vec2&)>& f) const;

 private:
  std::vector<Vec2> points_;
  Eigen::MatrixXd basis_;  // quadrature points x local DoFs, weights folded in
};

// Discrete forms with one polynomial argument, columns over the scaled
// monomials of degree <= k: m_k(phi_i, m_a) and a_k(phi_i, m_a).
Eigen::MatrixXd mass_against_monomials(const LocalSpace& space, double rho);
Eigen::MatrixXd stiffness_against_monomials(const LocalSpace& space, double mu);

}  // namespace curvewave
