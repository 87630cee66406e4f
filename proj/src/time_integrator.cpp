#include "curvewave/time_integrator.hpp"

#include "curvewave/error.hpp"

namespace curvewave {

StartupMode startup_mode_from_string(const std::string& s) {
  if (s == "taylor") return StartupMode::Taylor;
  if (s == "paper") return StartupMode::Paper;
  throw ConfigError("unknown startup mode '" + s + "' (taylor | paper)");
}

StepScheme step_scheme_from_string(const std::string& s) {
  if (s == "paper") return StepScheme::Paper;
  if (s == "newmark") return StepScheme::Newmark;
  throw ConfigError("unknown step scheme '" + s + "' (paper | newmark)");
}

TimeStepper::TimeStepper(const GlobalSystem& system, double dt, StepScheme scheme)
    : system_(system), dt_(dt), scheme_(scheme) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const double wa = scheme == StepScheme::Paper ? dt * dt : 0.25 * dt * dt;
  lhs_ = system.M + (0.5 * dt) * system.C + wa * system.A;
  lhs_op_ = std::make_unique<ConstrainedOperator>(lhs_, system.dirichlet_dofs);
}

Eigen::VectorXd TimeStepper::load(const Forcing& f, double t) const {
  if (!f) return Eigen::VectorXd::Zero(system_.size());
  return f(t);
}

Eigen::VectorXd TimeStepper::dirichlet(const DirichletData& g, double t) const {
  if (!g) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(system_.dirichlet_dofs.size()));
  return g(t);
}

WaveState TimeStepper::startup(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1, const Forcing& f,
                               const DirichletData& g, StartupMode mode) const {
  if (!mass_op_) mass_op_ = std::make_unique<ConstrainedOperator>(system_.M, system_.dirichlet_dofs);
  const Eigen::VectorXd f0 = load(f, 0.0);
  const Eigen::VectorXd g1 = dirichlet(g, dt_);
  const auto& dd = system_.dirichlet_dofs;
  WaveState s;
  s.i = 0;
  s.dt = dt_;
  s.previous = p0;
  if (mode == StartupMode::Taylor) {
    // Acceleration with its Dirichlet part chosen so that p^(1)_D = g(dt).
    Eigen::VectorXd ad(dd.size());
    for (std::size_t c = 0; c < dd.size(); ++c) {
      ad[c] = 2.0 * (g1[c] - p0[dd[c]] - dt_ * p1[dd[c]]) / (dt_ * dt_);
    }
    const Eigen::VectorXd r = f0 - system_.C * p1 - system_.A * p0;
    const Eigen::VectorXd a = mass_op_->solve(r, ad);
    s.current = p0 + dt_ * p1 + (0.5 * dt_ * dt_) * a;
  } else {
    const Eigen::VectorXd rhs = system_.M * p0 - (0.5 * dt_) * (system_.A * p0) -
                                dt_ * (system_.M * p1 + system_.C * p1) + (0.5 * dt_ * dt_) * f0;
    s.current = mass_op_->solve(rhs, g1);
  }
  for (std::size_t c = 0; c < dd.size(); ++c) s.current[dd[c]] = g1[c];
  if (scheme_ == StepScheme::Newmark) {
    s.f_previous = f0;
    s.f_current = load(f, dt_);
  }
  return s;
}

void TimeStepper::step(WaveState& s, const Forcing& f, const DirichletData& g) const {
  const double t2 = (s.i + 2) * dt_;
  const Eigen::VectorXd f2 = load(f, t2);
  const Eigen::VectorXd g2 = dirichlet(g, t2);
  Eigen::VectorXd rhs;
  const Eigen::VectorXd mp1 = system_.M * s.current;
  const Eigen::VectorXd cp0 = system_.C * s.previous;
  const Eigen::VectorXd mp0 = system_.M * s.previous;
  if (scheme_ == StepScheme::Paper) {
    rhs = 2.0 * mp1 + 0.5 * dt_ * cp0 - mp0 + dt_ * dt_ * f2;
  } else {
    const double q = 0.25 * dt_ * dt_;
    rhs = 2.0 * mp1 - (2.0 * q) * (system_.A * s.current) + 0.5 * dt_ * cp0 - mp0 - q * (system_.A * s.previous) +
          q * (f2 + 2.0 * s.f_current + s.f_previous);
  }
  Eigen::VectorXd next = lhs_op_->solve(rhs, g2);
  s.previous = std::move(s.current);
  s.current = std::move(next);
  if (scheme_ == StepScheme::Newmark) {
    s.f_previous = std::move(s.f_current);
    s.f_current = f2;
  }
  ++s.i;
}

double TimeStepper::energy(const WaveState& s, EnergyForm form) const {
  return energy(s, system_.M, system_.A, form);
}

double TimeStepper::energy(const WaveState& s, const SparseMatrix& m, const SparseMatrix& a, EnergyForm form) const {
  const Eigen::VectorXd v = (s.current - s.previous) / dt_;
  const double kinetic = v.dot(m * v);
  if (form == EnergyForm::Lagged) return kinetic + s.previous.dot(a * s.previous);
  if (scheme_ == StepScheme::Paper) return kinetic + s.current.dot(a * s.current);
  const Eigen::VectorXd mid = 0.5 * (s.current + s.previous);
  return kinetic + mid.dot(a * mid);
}

}  // namespace curvewave
