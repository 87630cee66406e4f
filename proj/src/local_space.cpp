#include "curvewave/local_space.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

#include "curvewave/error.hpp"

namespace curvewave {

namespace {

double condition(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s[s.size() - 1] > 0 ? s[0] / s[s.size() - 1] : INFINITY;
}

Eigen::MatrixXd solve_small(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs, const char* what) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.rows()) throw SolverError(std::string("singular local system: ") + what);
  return qr.solve(rhs);
}

}  // namespace

std::vector<int> DofLayout::edge_nodes(int loop_position) const {
  std::vector<int> idx;
  idx.reserve(k + 1);
  idx.push_back(loop_position);
  for (int j = 0; j < k - 1; ++j) idx.push_back(edge_dof(loop_position, j));
  idx.push_back((loop_position + 1) % n_vertices);
  return idx;
}

DofLayout dof_coordinates(const Mesh& mesh, const Element& element, int k) {
  if (k < 1) throw Error("polynomial degree must be at least 1");
  DofLayout layout;
  layout.k = k;
  layout.n_vertices = static_cast<int>(element.loop.size());
  layout.n_moments = ScaledMonomials::dim(k - 2);
  for (int i = 0; i < layout.n_vertices; ++i) {
    layout.dofs.push_back({DofKind::Vertex, i, 0, mesh.vertices[mesh.start_vertex(element.loop[i])]});
  }
  const EdgeRule& gl = gauss_lobatto(k + 1);
  for (int i = 0; i < layout.n_vertices; ++i) {
    const OrientedEdge edge = mesh.oriented(element.loop[i]);
    for (int j = 1; j < k; ++j) {
      const double tau = 0.5 * (gl.nodes[j] + 1.0) * edge.length();
      layout.dofs.push_back({DofKind::EdgeNode, i, j - 1, edge.point(tau)});
    }
  }
  for (int a = 0; a < layout.n_moments; ++a) layout.dofs.push_back({DofKind::Moment, a, 0, Vec2::Zero()});
  return layout;
}

EdgeLagrange::EdgeLagrange(int k) {
  const EdgeRule& gl = gauss_lobatto(k + 1);
  for (double x : gl.nodes) nodes_.push_back(0.5 * (x + 1.0));
  nodes_.front() = 0.0;
  nodes_.back() = 1.0;
  bary_.assign(nodes_.size(), 1.0);
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
      if (m != j) bary_[j] /= nodes_[j] - nodes_[m];
    }
  }
}

Eigen::VectorXd EdgeLagrange::values(double u) const {
  const int n = size();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (u == nodes_[j]) {
      v[j] = 1.0;
      return v;
    }
  }
  double l = 1.0;
  for (int j = 0; j < n; ++j) l *= u - nodes_[j];
  for (int j = 0; j < n; ++j) v[j] = l * bary_[j] / (u - nodes_[j]);
  return v;
}

LocalSpace::LocalSpace(const Mesh& mesh, int element, int k)
    : element_(element),
      k_(k),
      area_(mesh.elements[element].area),
      diameter_(mesh.elements[element].diameter),
      centroid_(mesh.elements[element].centroid),
      basis_(centroid_, diameter_, k) {
  const Element& el = mesh.elements[element];
  layout_ = dof_coordinates(mesh, el, k);
  moments_ = monomial_moments(mesh, el, 2 * k);
  cell_rule_ = element_cell_rule(mesh, el, 2 * k + 2);
  build_gram();
  build_pi_nabla(mesh, el);
  build_pi0();
  build_pi0_grad(mesh, el);
}

void LocalSpace::build_gram() {
  const int nk = n_poly();
  const int n = size();
  H_.resize(nk, nk);
  G_.setZero(nk, nk);
  const double h2 = diameter_ * diameter_;
  for (int i = 0; i < nk; ++i) {
    const auto [a1, b1] = ScaledMonomials::exponent(i);
    for (int j = 0; j < nk; ++j) {
      const auto [a2, b2] = ScaledMonomials::exponent(j);
      H_(i, j) = moments_(a1 + a2, b1 + b2);
      double g = 0.0;
      if (a1 > 0 && a2 > 0) g += a1 * a2 * moments_(a1 + a2 - 2, b1 + b2);
      if (b1 > 0 && b2 > 0) g += b1 * b2 * moments_(a1 + a2, b1 + b2 - 2);
      G_(i, j) = g / h2;
    }
  }
  D_.resize(n, nk);
  for (int r = 0; r < n; ++r) {
    const DofDescriptor& d = layout_.dofs[r];
    if (d.kind == DofKind::Moment) {
      const auto [ag, bg] = ScaledMonomials::exponent(d.loop_position);
      for (int j = 0; j < nk; ++j) {
        const auto [a, b] = ScaledMonomials::exponent(j);
        D_(r, j) = moments_(ag + a, bg + b) / area_;
      }
    } else {
      D_.row(r) = basis_.values(d.point).transpose();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D_);
  diagnostics_.min_singular_d = svd.singularValues()[nk - 1];
  diagnostics_.cond_h = condition(H_);
}

void LocalSpace::build_pi_nabla(const Mesh& mesh, const Element& el) {
  const int nk = n_poly(), nl = n_low(), n = size(), np = k_ + 1;
  const EdgeLagrange lagrange(k_);
  const double h2 = diameter_ * diameter_;
  B_.setZero(nk, n);
  Eigen::MatrixXd gmod = G_;
  gmod.row(0).setZero();
  pi0_grad_star_[0].setZero(nl, n);
  pi0_grad_star_[1].setZero(nl, n);

  // Interior part -(v, Lap m_a) from the moment DoFs.
  for (int i = 0; i < nk; ++i) {
    const auto [a, b] = ScaledMonomials::exponent(i);
    if (a >= 2) B_(i, layout_.moment_dof(ScaledMonomials::index(a - 2, b))) -= area_ * a * (a - 1) / h2;
    if (b >= 2) B_(i, layout_.moment_dof(ScaledMonomials::index(a, b - 2))) -= area_ * b * (b - 1) / h2;
  }

  // One boundary pass per edge: L_j dm_a/dn, m_a, L_j m_b n_x, L_j m_b n_y.
  const int off_mean = np * nk, off_grad = off_mean + nk;
  const int size_pass = off_grad + 2 * np * nl;
  const EdgeRule& gl = gauss_lobatto(np);
  for (int e = 0; e < static_cast<int>(el.loop.size()); ++e) {
    const OrientedEdge edge = mesh.oriented(el.loop[e]);
    const double h = edge.length();
    const Eigen::VectorXd acc = integrate_edge(
        edge, size_pass, k_ + 1, k_ + 2, [&](double tau, const Vec2& x, const Vec2& nrm, double w, Eigen::VectorXd& out) {
          const Eigen::VectorXd lv = lagrange.values(tau / h);
          const Eigen::VectorXd dn = (nrm.transpose() * basis_.gradients(x)).transpose();
          const Eigen::VectorXd mv = basis_.values(x);
          for (int j = 0; j < np; ++j) {
            out.segment(j * nk, nk) += (w * lv[j]) * dn;
            out.segment(off_grad + j * nl, nl) += (w * lv[j] * nrm.x()) * mv.head(nl);
            out.segment(off_grad + (np + j) * nl, nl) += (w * lv[j] * nrm.y()) * mv.head(nl);
          }
          out.segment(off_mean, nk) += w * mv;
        });
    const std::vector<int> nodes = layout_.edge_nodes(e);
    for (int j = 0; j < np; ++j) {
      B_.col(nodes[j]) += acc.segment(j * nk, nk);
      pi0_grad_star_[0].col(nodes[j]) += acc.segment(off_grad + j * nl, nl);
      pi0_grad_star_[1].col(nodes[j]) += acc.segment(off_grad + (np + j) * nl, nl);
    }
    gmod.row(0) += acc.segment(off_mean, nk).transpose();
  }
  // Boundary mean row: (v, 1) on each edge is exact with the Lobatto weights.
  B_.row(0).setZero();
  for (int e = 0; e < static_cast<int>(el.loop.size()); ++e) {
    const double h = mesh.edges[el.loop[e].edge].length;
    const std::vector<int> nodes = layout_.edge_nodes(e);
    for (int j = 0; j < np; ++j) B_(0, nodes[j]) += 0.5 * h * gl.weights[j];
  }
  diagnostics_.cond_g = condition(gmod);
  diagnostics_.ill_conditioned = diagnostics_.cond_g > kConditionLimit || diagnostics_.cond_h > kConditionLimit;
  pi_nabla_star_ = solve_small(gmod, B_, "gradient projector");
  pi_nabla_ = D_ * pi_nabla_star_;
}

void LocalSpace::build_pi0() {
  const int nk = n_poly(), n = size();
  const int n_inner = ScaledMonomials::dim(k_ - 2);
  Eigen::MatrixXd c(nk, n);
  c.setZero();
  for (int i = 0; i < n_inner; ++i) c(i, layout_.moment_dof(i)) = area_;
  const Eigen::MatrixXd hp = H_ * pi_nabla_star_;
  c.bottomRows(nk - n_inner) = hp.bottomRows(nk - n_inner);
  pi0_star_ = solve_small(H_, c, "L2 projector");
  pi0_ = D_ * pi0_star_;
}

void LocalSpace::build_pi0_grad(const Mesh&, const Element&) {
  const int nl = n_low();
  for (int i = 0; i < nl; ++i) {
    const auto [a, b] = ScaledMonomials::exponent(i);
    if (a >= 1) pi0_grad_star_[0](i, layout_.moment_dof(ScaledMonomials::index(a - 1, b))) -= area_ * a / diameter_;
    if (b >= 1) pi0_grad_star_[1](i, layout_.moment_dof(ScaledMonomials::index(a, b - 1))) -= area_ * b / diameter_;
  }
  const Eigen::MatrixXd hl = H_low();
  pi0_grad_star_[0] = solve_small(hl, pi0_grad_star_[0], "vector L2 projector");
  pi0_grad_star_[1] = solve_small(hl, pi0_grad_star_[1], "vector L2 projector");
}

Eigen::VectorXd LocalSpace::interpolate(const std::function<double(const Vec2&)>& g) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(size());
  const int n_inner = layout_.n_moments;
  for (int r = 0; r < size(); ++r) {
    if (layout_.dofs[r].kind != DofKind::Moment) v[r] = g(layout_.dofs[r].point);
  }
  if (n_inner > 0) {
    const ScaledMonomials inner(centroid_, diameter_, k_ - 2);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n_inner);
    for (std::size_t q = 0; q < cell_rule_.points.size(); ++q) {
      acc += (cell_rule_.weights[q] * g(cell_rule_.points[q])) * inner.values(cell_rule_.points[q]);
    }
    v.tail(n_inner) = acc / area_;
  }
  return v;
}

}  // namespace curvewave
