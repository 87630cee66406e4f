#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "curvewave/forms.hpp"
#include "curvewave/linear_solver.hpp"
#include "curvewave/local_space.hpp"
#include "curvewave/mesh.hpp"

namespace curvewave {

using ScalarField = std::function<double(const Vec2&)>;

// Global order: vertices, then edge-internal nodes edge by edge in
// increasing arc length, then element moments element by element.
struct DofNumbering {
  int k = 1;
  int n_vertices = 0;
  int n_edges = 0;
  int n_elements = 0;
  int moments_per_element = 0;
  int size = 0;
  std::vector<std::vector<int>> element_dofs;

  int edge_dof(int edge, int node) const { return n_vertices + edge * (k - 1) + node; }
  int moment_dof(int element, int alpha) const {
    return n_vertices + n_edges * (k - 1) + element * moments_per_element + alpha;
  }
};

DofNumbering number_dofs(const Mesh& mesh, int k);

struct GlobalSystem {
  std::shared_ptr<const Mesh> mesh;
  int k = 1;
  DofNumbering dofs;
  SparseMatrix M, A, C;
  std::vector<LocalSpace> spaces;
  std::vector<LocalLoad> loads;
  std::vector<int> dirichlet_dofs;
  // Exact-geometry position of each Dirichlet DoF; on straightened chords
  // the node is carried to the origin curve at the same arc fraction.
  std::vector<Vec2> dirichlet_points;

  int size() const { return dofs.size; }
  Eigen::VectorXd local(const Eigen::VectorXd& global, int element) const;
  Eigen::VectorXd interpolate(const ScalarField& g) const;
  Eigen::VectorXd load(const ScalarField& f) const;
  Eigen::VectorXd dirichlet_values(const ScalarField& g) const;
};

struct AssemblyOptions {
  int threads = 0;  // 0: hardware concurrency
};

GlobalSystem assemble(std::shared_ptr<const Mesh> mesh, int k, const AssemblyOptions& options = {});

// Symmetric elimination of the constrained DoFs with a cached factorization
// of the free block.
class ConstrainedOperator {
 public:
  ConstrainedOperator(const SparseMatrix& k, const std::vector<int>& constrained);

  // Solves K p = rhs on the free DoFs with p_D = values; constrained entries
  // of the result are copied from `values`.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs, const Eigen::VectorXd& values) const;
  const SparseMatrix& free_block() const { return kff_; }
  const std::vector<int>& free_dofs() const { return free_; }

 private:
  std::vector<int> constrained_, free_;
  SparseMatrix kff_, kfd_;
  SpdSolver solver_;
};

ConstrainedOperator apply_dirichlet(const GlobalSystem& system, const SparseMatrix& k);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace curvewave
