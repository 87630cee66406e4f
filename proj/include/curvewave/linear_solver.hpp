#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

namespace curvewave {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr double kSolveTolerance = 1e-12;

// Sparse Cholesky with iterative refinement; falls back to preconditioned
// CG when the refined residual still exceeds kSolveTolerance.
class SpdSolver {
 public:
  SpdSolver() = default;
  explicit SpdSolver(const SparseMatrix& a) { compute(a); }

  void compute(const SparseMatrix& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  int rows() const { return static_cast<int>(a_.rows()); }
  double last_residual() const { return last_residual_; }

 private:
  SparseMatrix a_;
  std::shared_ptr<Eigen::SimplicialLLT<SparseMatrix>> llt_;
  mutable double last_residual_ = 0.0;
};

Eigen::VectorXd solve_linear(const SparseMatrix& a, const Eigen::VectorXd& b);
Eigen::VectorXd solve_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace curvewave
