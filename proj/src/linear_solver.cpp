#include "curvewave/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <string>

#include "curvewave/error.hpp"

namespace curvewave {

void SpdSolver::compute(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw SolverError("matrix is not square");
  a_ = a;
  llt_ = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>();
  llt_->compute(a_);
  if (llt_->info() != Eigen::Success) throw SolverError("Cholesky factorization failed: matrix is not SPD");
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& b) const {
  if (!llt_) throw SolverError("solver used before factorization");
  const double bn = b.norm();
  if (bn == 0.0) {
    last_residual_ = 0.0;
    return Eigen::VectorXd::Zero(b.size());
  }
  Eigen::VectorXd x = llt_->solve(b);
  Eigen::VectorXd r = b - a_ * x;
  for (int it = 0; it < 3 && r.norm() > kSolveTolerance * bn; ++it) {
    x += llt_->solve(r);
    r = b - a_ * x;
  }
  last_residual_ = r.norm() / bn;
  if (last_residual_ <= kSolveTolerance) return x;

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(0.1 * kSolveTolerance);
  cg.setMaxIterations(10 * static_cast<int>(a_.rows()) + 100);
  cg.compute(a_);
  x = cg.solveWithGuess(b, x);
  last_residual_ = (b - a_ * x).norm() / bn;
  if (!(last_residual_ <= kSolveTolerance)) {
    throw SolverError("linear solve failed: relative residual " + std::to_string(last_residual_));
  }
  return x;
}

Eigen::VectorXd solve_linear(const SparseMatrix& a, const Eigen::VectorXd& b) {
  return SpdSolver(a).solve(b);
}

Eigen::VectorXd solve_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  return SpdSolver(a.sparseView()).solve(b);
}

}  // namespace curvewave
