#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "curvewave/system.hpp"

namespace curvewave {

enum class StartupMode { Taylor, Paper };

// Paper: [M + dt/2 C + dt^2 A] p2 = 2 M p1 + (dt/2 C - M) p0 + dt^2 f2.
// Newmark: average-acceleration three-level form,
// [M + dt/2 C + dt^2/4 A] p2 = 2 M p1 - dt^2/2 A p1 + (dt/2 C - M - dt^2/4 A) p0
//                              + dt^2/4 (f2 + 2 f1 + f0).
enum class StepScheme { Paper, Newmark };

// Scheme: the quantity the chosen recurrence controls (paper: stiffness at
// the newer level; newmark: at the midpoint). Lagged: stiffness at the
// older level.
enum class EnergyForm { Scheme, Lagged };

StartupMode startup_mode_from_string(const std::string& s);
StepScheme step_scheme_from_string(const std::string& s);

// Load vector at time t; empty means zero forcing.
using Forcing = std::function<Eigen::VectorXd(double)>;
// Dirichlet values at time t, ordered as GlobalSystem::dirichlet_dofs.
using DirichletData = std::function<Eigen::VectorXd(double)>;

struct WaveState {
  int i = 0;
  double dt = 0.0;
  Eigen::VectorXd previous;  // p^(i)
  Eigen::VectorXd current;   // p^(i+1)
  Eigen::VectorXd f_previous, f_current;  // loads at levels i and i+1 (newmark)

  double time() const { return (i + 1) * dt; }
};

class TimeStepper {
 public:
  TimeStepper(const GlobalSystem& system, double dt, StepScheme scheme = StepScheme::Paper);

  WaveState startup(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1, const Forcing& f,
                    const DirichletData& g, StartupMode mode = StartupMode::Taylor) const;
  void step(WaveState& state, const Forcing& f, const DirichletData& g) const;
  double energy(const WaveState& state, EnergyForm form = EnergyForm::Scheme) const;
  double energy(const WaveState& state, const SparseMatrix& m, const SparseMatrix& a,
                EnergyForm form = EnergyForm::Scheme) const;

  StepScheme scheme() const { return scheme_; }
  double dt() const { return dt_; }

 private:
  Eigen::VectorXd load(const Forcing& f, double t) const;
  Eigen::VectorXd dirichlet(const DirichletData& g, double t) const;

  const GlobalSystem& system_;
  double dt_;
  StepScheme scheme_;
  SparseMatrix lhs_;
  std::unique_ptr<ConstrainedOperator> lhs_op_;
  mutable std::unique_ptr<ConstrainedOperator> mass_op_;
};

}  // namespace curvewave
