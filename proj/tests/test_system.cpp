#include <doctest.h>

#include <Eigen/Cholesky>
#include <cmath>
#include <random>

#include "curvewave/error.hpp"
#include "curvewave/errors.hpp"
#include "curvewave/generators.hpp"
#include "curvewave/manufactured.hpp"
#include "curvewave/system.hpp"
#include "curvewave/time_integrator.hpp"
#include "oracles.hpp"

using namespace curvewave;
using oracle::kPi;

namespace {

SparseMatrix sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

// Hand-built n-DoF system with given matrices and no mesh.
GlobalSystem matrix_system(const Eigen::MatrixXd& m, const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  GlobalSystem s;
  s.dofs.size = static_cast<int>(m.rows());
  s.M = sparse(m);
  s.A = sparse(a);
  s.C = sparse(c);
  return s;
}

GlobalSystem oscillator(double omega) {
  return matrix_system(Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Constant(1, 1, omega * omega),
                       Eigen::MatrixXd::Zero(1, 1));
}

Eigen::VectorXd scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

// Max |p_i - cos(w t_i) - sin(w t_i) / w| over [0, T].
double oscillator_error(double omega, double dt, double T, StepScheme scheme) {
  const GlobalSystem sys = oscillator(omega);
  const TimeStepper ts(sys, dt, scheme);
  WaveState s = ts.startup(scalar(1.0), scalar(1.0), {}, {}, StartupMode::Taylor);
  const auto exact = [&](double t) { return std::cos(omega * t) + std::sin(omega * t) / omega; };
  double err = std::abs(s.current[0] - exact(s.time()));
  const int steps = static_cast<int>(std::lround(T / dt));
  while (s.i + 1 < steps) {
    ts.step(s, {}, {});
    err = std::max(err, std::abs(s.current[0] - exact(s.time())));
  }
  return err;
}

std::shared_ptr<const Mesh> shared(Mesh m) { return std::make_shared<const Mesh>(std::move(m)); }

double max_abs(const SparseMatrix& m) {
  double x = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) x = std::max(x, std::abs(it.value()));
  return x;
}

double asymmetry(const SparseMatrix& m) {
  const SparseMatrix t = m.transpose();
  return max_abs(m - t);
}

// A straight-edged polygonal mesh: the straightened cut grid, Dirichlet
// on the outer box.
Mesh straight_polygons() {
  CutGridSpec spec;
  spec.nx = spec.ny = 6;
  spec.interfaces.push_back({Vec2(0.1, -0.05), 0.55});
  spec.left = spec.right = spec.top = spec.bottom = BoundaryTag::Dirichlet;
  return straighten(build_cut_grid(spec));
}

}  // namespace

TEST_CASE("DoF counts of the assembled system") {
  const auto mesh = shared(build_ring_quad(2, 4, 0.5, 1.0));
  CHECK(assemble(mesh, 1, {1}).size() == static_cast<int>(mesh->vertices.size()));
  CHECK(assemble(mesh, 2, {1}).size() ==
        static_cast<int>(mesh->vertices.size() + mesh->edges.size() + mesh->elements.size()));
  CHECK(assemble(mesh, 3, {1}).size() ==
        static_cast<int>(mesh->vertices.size() + 2 * mesh->edges.size() + 3 * mesh->elements.size()));
}

TEST_CASE("assembled matrices are symmetric and threads agree") {
  const auto mesh = shared(build_cartesian_cut_circle(9, 0.4, Vec2::Zero()));
  const GlobalSystem s1 = assemble(mesh, 3, {1});
  const GlobalSystem s4 = assemble(mesh, 3, {4});
  for (const SparseMatrix* m : {&s1.M, &s1.A, &s1.C}) CHECK(asymmetry(*m) < 1e-12 * max_abs(*m));
  CHECK(max_abs(s1.M - s4.M) == 0.0);
  CHECK(max_abs(s1.A - s4.A) == 0.0);
}

TEST_CASE("absorbing matrix lives on absorbing edges") {
  const auto mesh = shared(build_cartesian_cut_circle(9, 0.4, Vec2::Zero()));
  const GlobalSystem s = assemble(mesh, 2, {1});
  std::vector<char> on_absorbing(s.size(), 0);
  for (std::size_t e = 0; e < mesh->edges.size(); ++e) {
    const Edge& ed = mesh->edges[e];
    if (ed.tag != BoundaryTag::Absorbing) continue;
    on_absorbing[ed.v0] = on_absorbing[ed.v1] = 1;
    on_absorbing[s.dofs.edge_dof(static_cast<int>(e), 0)] = 1;
  }
  double total = 0.0;
  for (int k = 0; k < s.C.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(s.C, k); it; ++it) {
      CHECK(on_absorbing[it.row()]);
      CHECK(on_absorbing[it.col()]);
      total += it.value();
    }
  }
  // Right side x = 1 has length 2.
  CHECK(total == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("matrix-free consistency of the global forms") {
  const auto mesh = shared(build_ring_voronoi(ring_seeds(30, 0.5, 1.0), 0.5, 1.0));
  const GlobalSystem s = assemble(mesh, 2, {2});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd p(s.size()), q(s.size());
  for (int i = 0; i < s.size(); ++i) {
    p[i] = n(rng);
    q[i] = n(rng);
  }
  double a = 0.0, m = 0.0;
  for (std::size_t e = 0; e < mesh->elements.size(); ++e) {
    const Material mat = mesh->material(mesh->elements[e].region);
    const Eigen::VectorXd pl = s.local(p, static_cast<int>(e)), ql = s.local(q, static_cast<int>(e));
    a += pl.dot(local_stiffness(s.spaces[e], mat.mu) * ql);
    m += pl.dot(local_mass(s.spaces[e], mat.rho) * ql);
  }
  CHECK(std::abs(p.dot(s.A * q) - a) < 1e-12 * (std::abs(a) + p.norm() * q.norm()));
  CHECK(std::abs(p.dot(s.M * q) - m) < 1e-12 * (std::abs(m) + p.norm() * q.norm()));
}

TEST_CASE("Dirichlet data sit on the exact curves") {
  const RingSolution ex(0.5, 1.0);
  for (const Mesh& m : std::vector<Mesh>{build_ring_quad(3, 6, 0.5, 1.0), straighten(build_ring_quad(3, 6, 0.5, 1.0))}) {
    const GlobalSystem s = assemble(shared(m), 3, {1});
    REQUIRE(s.dirichlet_points.size() == s.dirichlet_dofs.size());
    CHECK(s.dirichlet_dofs.size() == 2 * 6 * 3);
    for (const Vec2& p : s.dirichlet_points) {
      const double r = p.norm();
      CHECK((std::abs(r - 0.5) < 1e-12 || std::abs(r - 1.0) < 1e-12));
    }
    const Eigen::VectorXd g = s.dirichlet_values([&](const Vec2& x) { return ex.value(x, 0.3) + 1.0; });
    for (std::size_t i = 0; i < s.dirichlet_points.size(); ++i)
      CHECK(g[i] == ex.value(s.dirichlet_points[i], 0.3) + 1.0);
  }
}

TEST_CASE("constrained solves") {
  const auto mesh = shared(build_ring_quad(3, 6, 0.5, 1.0));
  const GlobalSystem s = assemble(mesh, 2, {1});
  const ConstrainedOperator op = apply_dirichlet(s, s.A);
  // Zero data: the reduced matrix is the free block of A.
  const auto& fr = op.free_dofs();
  CHECK(fr.size() + s.dirichlet_dofs.size() == static_cast<std::size_t>(s.size()));
  const Eigen::MatrixXd dense = Eigen::MatrixXd(s.A);
  const Eigen::MatrixXd block = Eigen::MatrixXd(op.free_block());
  double diff = 0.0;
  for (std::size_t i = 0; i < fr.size(); ++i)
    for (std::size_t j = 0; j < fr.size(); ++j) diff = std::max(diff, std::abs(block(i, j) - dense(fr[i], fr[j])));
  CHECK(diff == 0.0);
  Eigen::LLT<Eigen::MatrixXd> llt(block);
  CHECK(llt.info() == Eigen::Success);
  // Constrained entries are copied, not solved.
  Eigen::VectorXd values(s.dirichlet_dofs.size());
  for (int i = 0; i < values.size(); ++i) values[i] = std::sin(0.1 + i) / 3.0;
  const Eigen::VectorXd x = op.solve(Eigen::VectorXd::Ones(s.size()), values);
  for (std::size_t i = 0; i < s.dirichlet_dofs.size(); ++i) CHECK(x[s.dirichlet_dofs[i]] == values[i]);
}

TEST_CASE("solve_linear") {
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, -1, 3);
  CHECK((solve_linear(Eigen::MatrixXd::Identity(5, 5), b) - b).norm() < 1e-15);
  Eigen::Matrix2d a;
  a << 2, 1, 1, 2;
  const Eigen::VectorXd x = solve_linear(Eigen::MatrixXd(a), Eigen::Vector2d(3, 3));
  CHECK((x - Eigen::Vector2d(1, 1)).norm() < 1e-15);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd g(200, 200);
  for (int i = 0; i < g.size(); ++i) g.data()[i] = n(rng);
  const Eigen::MatrixXd spd = g.transpose() * g + Eigen::MatrixXd::Identity(200, 200);
  Eigen::VectorXd rhs(200);
  for (int i = 0; i < 200; ++i) rhs[i] = n(rng);
  const Eigen::VectorXd y = solve_linear(spd, rhs);
  CHECK((spd * y - rhs).norm() <= 1e-12 * rhs.norm());
  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(solve_linear(Eigen::MatrixXd(indefinite), Eigen::Vector2d(1, 0)), SolverError);
}

TEST_CASE("startup examples") {
  const GlobalSystem osc = oscillator(3.0);
  const TimeStepper ts(osc, 0.01);
  for (StartupMode mode : {StartupMode::Taylor, StartupMode::Paper}) {
    const WaveState s = ts.startup(scalar(0.0), scalar(0.0), {}, {}, mode);
    CHECK(s.current[0] == 0.0);
  }
  const Eigen::MatrixXd m = Eigen::Vector3d(1.0, 2.0, 0.5).asDiagonal();
  const GlobalSystem free3 = matrix_system(m, Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3));
  const TimeStepper tf(free3, 0.1);
  const Eigen::Vector3d p0(1, -2, 0.5), p1(0.3, 0.1, -4);
  const WaveState s = tf.startup(p0, p1, {}, {}, StartupMode::Taylor);
  CHECK((s.current - (p0 + 0.1 * p1)).norm() < 1e-15);
}

TEST_CASE("Taylor startup is third-order accurate on the oscillator") {
  const double omega = 3.0;
  const GlobalSystem osc = oscillator(omega);
  std::vector<double> err;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const TimeStepper ts(osc, dt);
    const WaveState s = ts.startup(scalar(1.0), scalar(1.0), {}, {}, StartupMode::Taylor);
    err.push_back(std::abs(s.current[0] - (std::cos(omega * dt) + std::sin(omega * dt) / omega)));
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(3.0).epsilon(0.05));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("free flight without stiffness") {
  const Eigen::MatrixXd m = Eigen::Vector3d(1.0, 2.0, 0.5).asDiagonal();
  const GlobalSystem sys = matrix_system(m, Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3));
  for (StepScheme scheme : {StepScheme::Paper, StepScheme::Newmark}) {
    const TimeStepper ts(sys, 0.05, scheme);
    WaveState s = ts.startup(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(-1, 0.5, 2), {}, {});
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd expected = 2 * s.current - s.previous;
      ts.step(s, {}, {});
      CHECK((s.current - expected).norm() < 1e-13 * expected.norm());
    }
  }
}

TEST_CASE("time order on the oscillator") {
  const std::vector<double> dts{1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};
  std::vector<double> paper, newmark;
  for (double dt : dts) {
    paper.push_back(oscillator_error(2.0, dt, 2.0, StepScheme::Paper));
    newmark.push_back(oscillator_error(2.0, dt, 2.0, StepScheme::Newmark));
  }
  // The three-level recurrence with stiffness only at the new level is a
  // first-order scheme; the average-acceleration variant is second order.
  CHECK(log_log_slope(dts, paper) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(log_log_slope(dts, newmark) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("energy diagnostic") {
  const auto mesh = shared(build_ring_quad(2, 4, 0.5, 1.0));
  const GlobalSystem s = assemble(mesh, 2, {1});
  const TimeStepper ts(s, 1e-2);
  WaveState z;
  z.dt = 1e-2;
  z.previous = z.current = Eigen::VectorXd::Zero(s.size());
  CHECK(ts.energy(z) == 0.0);
  WaveState c = z;
  // Constants lie in the stiffness kernel; build the constant DoF vector.
  c.previous = c.current = s.interpolate([](const Vec2&) { return 2.0; });
  CHECK(std::abs(ts.energy(c)) < 1e-20 + 1e-12 * c.current.squaredNorm());
}

TEST_CASE("oscillator energy over one period") {
  const double omega = 2 * kPi;
  const GlobalSystem osc = oscillator(omega);
  std::vector<double> drift_paper, drift_newmark;
  for (double dt : {1e-2, 5e-3}) {
    for (StepScheme scheme : {StepScheme::Paper, StepScheme::Newmark}) {
      const TimeStepper ts(osc, dt, scheme);
      WaveState s = ts.startup(scalar(1.0), scalar(0.0), {}, {});
      const double e0 = ts.energy(s);
      double drift = 0.0;
      for (int i = 1; i < static_cast<int>(std::lround(1.0 / dt)); ++i) {
        ts.step(s, {}, {});
        drift = std::max(drift, std::abs(ts.energy(s) - e0) / e0);
      }
      (scheme == StepScheme::Paper ? drift_paper : drift_newmark).push_back(drift);
    }
  }
  // Average acceleration conserves its energy to round-off; the other
  // recurrence dissipates at a rate proportional to dt.
  CHECK(drift_newmark[0] < 1e-12);
  CHECK(drift_newmark[1] < 1e-12);
  CHECK(drift_paper[0] / drift_paper[1] == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("energy is non-increasing without forcing") {
  const auto mesh = shared(build_ring_quad(3, 6, 0.5, 1.0));
  const GlobalSystem s = assemble(mesh, 2, {1});
  const Eigen::VectorXd p0 = s.interpolate([](const Vec2& x) { return (x.squaredNorm() - 0.25) * (1 - x.squaredNorm()) * (1 + x.x()); });
  const Eigen::VectorXd p1 = s.interpolate([](const Vec2& x) { return (x.squaredNorm() - 0.25) * (1 - x.squaredNorm()) * x.y(); });
  for (StepScheme scheme : {StepScheme::Paper, StepScheme::Newmark}) {
    const TimeStepper ts(s, 2e-3, scheme);
    WaveState st = ts.startup(p0, p1, {}, {});
    double prev = ts.energy(st);
    bool monotone = true;
    for (int i = 0; i < 1000; ++i) {
      ts.step(st, {}, {});
      const double e = ts.energy(st);
      monotone = monotone && e <= prev * (1 + 1e-10);
      prev = e;
    }
    CHECK(monotone);
  }
}

TEST_CASE("polynomial patch test on straight polygons") {
  const auto mesh = shared(straight_polygons());
  for (int k = 1; k <= 3; ++k) {
    const auto p = [k](const Vec2& x) {
      double v = 0.3 + x.x() - 0.5 * x.y();
      if (k >= 2) v += 0.7 * x.x() * x.y() - x.y() * x.y();
      if (k >= 3) v += x.x() * x.x() * x.x() - 0.4 * x.x() * x.y() * x.y();
      return v;
    };
    const auto lap = [k](const Vec2& x) {
      double v = 0.0;
      if (k >= 2) v += -2.0;
      if (k >= 3) v += 6 * x.x() - 0.8 * x.x();
      return v;
    };
    const GlobalSystem s = assemble(mesh, k, {1});
    const Eigen::VectorXd exact = s.interpolate(p);
    const Eigen::VectorXd sol = apply_dirichlet(s, s.A).solve(s.load([&](const Vec2& x) { return -lap(x); }), s.dirichlet_values(p));
    CHECK((sol - exact).cwiseAbs().maxCoeff() < 1e-9);
  }
}
