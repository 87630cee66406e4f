#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "curvewave/mesh.hpp"
#include "curvewave/moments.hpp"
#include "curvewave/monomials.hpp"
#include "curvewave/quadrature.hpp"

namespace curvewave {

enum class DofKind { Vertex, EdgeNode, Moment };

struct DofDescriptor {
  DofKind kind;
  int loop_position;  // edge use index for vertex/edge nodes, monomial index for moments
  int node;           // node index along the edge, 0..k-2
  Vec2 point;         // physical location, unused for moments
};

// Local ordering: vertices in loop order, then the k-1 interior Gauss-Lobatto
// nodes of each edge in traversal order, then |E|^-1 (v, m_a) for |a| <= k-2.
struct DofLayout {
  int k = 1;
  int n_vertices = 0;
  int n_moments = 0;
  std::vector<DofDescriptor> dofs;

  int size() const { return static_cast<int>(dofs.size()); }
  int edge_dof(int loop_position, int node) const { return n_vertices + loop_position * (k - 1) + node; }
  int moment_dof(int alpha) const { return n_vertices * k + alpha; }
  // Local indices of the k+1 nodes along edge use i, in traversal order.
  std::vector<int> edge_nodes(int loop_position) const;
};

DofLayout dof_coordinates(const Mesh& mesh, const Element& element, int k);

// Lagrange basis on the k+1 Gauss-Lobatto nodes of [0, 1].
class EdgeLagrange {
 public:
  explicit EdgeLagrange(int k);
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  // Values of all basis functions at u in [0, 1].
  Eigen::VectorXd values(double u) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
};

struct ProjectorDiagnostics {
  double cond_g = 0.0;     // modified gradient Gram
  double cond_h = 0.0;     // mass Gram
  double min_singular_d = 0.0;
  bool ill_conditioned = false;
};

inline constexpr double kConditionLimit = 1e12;

class LocalSpace {
 public:
  LocalSpace(const Mesh& mesh, int element, int k);

  int k() const { return k_; }
  int element() const { return element_; }
  int size() const { return layout_.size(); }
  int n_poly() const { return ScaledMonomials::dim(k_); }
  double area() const { return area_; }
  double diameter() const { return diameter_; }
  const Vec2& centroid() const { return centroid_; }
  const ScaledMonomials& basis() const { return basis_; }
  const DofLayout& layout() const { return layout_; }
  const MonomialMoments& moments() const { return moments_; }

  const Eigen::MatrixXd& D() const { return D_; }
  const Eigen::MatrixXd& G() const { return G_; }
  const Eigen::MatrixXd& B() const { return B_; }
  const Eigen::MatrixXd& pi_nabla_star() const { return pi_nabla_star_; }
  const Eigen::MatrixXd& pi_nabla() const { return pi_nabla_; }
  const Eigen::MatrixXd& pi0_star() const { return pi0_star_; }
  const Eigen::MatrixXd& pi0() const { return pi0_; }
  // Coefficients in P_{k-1} of the projected x and y derivatives.
  const Eigen::MatrixXd& pi0_grad_star(int component) const { return pi0_grad_star_[component]; }
  const Eigen::MatrixXd& H() const { return H_; }
  Eigen::MatrixXd H_low() const { return H_.topLeftCorner(n_low(), n_low()); }
  int n_low() const { return ScaledMonomials::dim(k_ - 1); }
  const ProjectorDiagnostics& diagnostics() const { return diagnostics_; }

  Eigen::VectorXd interpolate(const std::function<double(const Vec2&)>& g) const;
  const CellRule& cell_rule() const { return cell_rule_; }

 private:
  void build_gram();
  void build_pi_nabla(const Mesh& mesh, const Element& el);
  void build_pi0();
  void build_pi0_grad(const Mesh& mesh, const Element& el);

  int element_;
  int k_;
  double area_, diameter_;
  Vec2 centroid_;
  ScaledMonomials basis_;
  DofLayout layout_;
  MonomialMoments moments_;
  CellRule cell_rule_;
  Eigen::MatrixXd D_, G_, B_, H_;
  Eigen::MatrixXd pi_nabla_star_, pi_nabla_, pi0_star_, pi0_;
  Eigen::MatrixXd pi0_grad_star_[2];
  ProjectorDiagnostics diagnostics_;
};

}  // namespace curvewave
