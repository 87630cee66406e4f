#include <doctest.h>

#include <cmath>
#include <random>

#include "curvewave/errors.hpp"
#include "curvewave/generators.hpp"
#include "curvewave/local_space.hpp"
#include "curvewave/manufactured.hpp"
#include "curvewave/system.hpp"
#include "oracles.hpp"

using namespace curvewave;
using oracle::kPi;

namespace {

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

Eigen::VectorXd unit(int n, int i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[i] = 1.0;
  return e;
}

// RMS of the polynomial with coefficients c over the element.
double rms(const LocalSpace& s, const Eigen::VectorXd& c) {
  return std::sqrt(std::max(0.0, c.dot(s.H() * c)) / s.area());
}

const Mesh& pentagon() {
  static const Mesh m = oracle::polygon_mesh({{0, 0}, {1.2, 0.1}, {1.5, 0.9}, {0.6, 1.4}, {-0.2, 0.8}});
  return m;
}

}  // namespace

TEST_CASE("DoF counts") {
  const Mesh sq = oracle::square_mesh();
  CHECK(LocalSpace(sq, 0, 1).size() == 4);
  CHECK(LocalSpace(sq, 0, 2).size() == 9);
  const Mesh sector = oracle::sector_mesh();
  for (int k = 1; k <= 5; ++k) CHECK(LocalSpace(sector, 0, k).size() == 4 + 4 * (k - 1) + ScaledMonomials::dim(k - 2));
  CHECK_THROWS_AS(dof_coordinates(sq, sq.elements[0], 0), Error);
}

TEST_CASE("edge DoFs lie on their curves") {
  const Mesh sector = oracle::sector_mesh(0.5, 1.0);
  const DofLayout layout = dof_coordinates(sector, sector.elements[0], 3);
  for (const DofDescriptor& d : layout.dofs) {
    if (d.kind == DofKind::Moment) continue;
    const OrientedEdge e = sector.oriented(sector.elements[0].loop[d.loop_position]);
    if (d.kind == DofKind::EdgeNode && e.map.curved()) {
      const double r = d.point.norm();
      CHECK((std::abs(r - 0.5) < 1e-12 || std::abs(r - 1.0) < 1e-12));
    }
  }
  // Interior nodes sit at the Gauss-Lobatto arc-length fractions.
  const OrientedEdge outer = sector.oriented(sector.elements[0].loop[1]);
  const EdgeRule& gl = gauss_lobatto(4);
  for (int j = 0; j < 2; ++j) {
    const Vec2 p = layout.dofs[layout.edge_dof(1, j)].point;
    CHECK((p - outer.point(0.5 * (gl.nodes[j + 1] + 1) * outer.length())).norm() < 1e-14);
  }
}

TEST_CASE("projectors of the constant DoF vector") {
  for (const Mesh& m : std::vector<Mesh>{pentagon(), oracle::sector_mesh(), oracle::disk_mesh(0.4)}) {
    for (int k = 1; k <= 4; ++k) {
      const LocalSpace s(m, 0, k);
      const Eigen::VectorXd one = s.interpolate([](const Vec2&) { return 1.0; });
      const Eigen::VectorXd e0 = unit(s.n_poly(), 0);
      CHECK(rms(s, s.pi_nabla_star() * one - e0) < 1e-10);
      CHECK(rms(s, s.pi0_star() * one - e0) < 1e-10);
      const Eigen::VectorXd gx = s.pi0_grad_star(0) * one, gy = s.pi0_grad_star(1) * one;
      CHECK(std::sqrt(gx.dot(s.H_low() * gx) / s.area()) * s.diameter() < 1e-10);
      CHECK(std::sqrt(gy.dot(s.H_low() * gy) / s.area()) * s.diameter() < 1e-10);
    }
  }
}

TEST_CASE("polynomial reproduction on straight elements") {
  for (const Mesh& m : std::vector<Mesh>{pentagon(), oracle::square_mesh(0.3, -0.2, 0.5)}) {
    for (int k = 1; k <= 4; ++k) {
      const LocalSpace s(m, 0, k);
      const Eigen::MatrixXd pn = s.pi_nabla_star() * s.D();
      const Eigen::MatrixXd p0 = s.pi0_star() * s.D();
      for (int a = 0; a < s.n_poly(); ++a) {
        CHECK(rms(s, pn.col(a) - unit(s.n_poly(), a)) < 1e-10);
        CHECK(rms(s, p0.col(a) - unit(s.n_poly(), a)) < 1e-10);
      }
    }
  }
}

TEST_CASE("projector idempotence on straight elements") {
  for (int k = 1; k <= 4; ++k) {
    const LocalSpace s(pentagon(), 0, k);
    const Eigen::VectorXd v = random_vector(s.size(), 11 + k);
    const Eigen::VectorXd c = s.pi_nabla_star() * v;
    CHECK(rms(s, s.pi_nabla_star() * (s.D() * c) - c) < 1e-11 * (1 + rms(s, c)));
  }
}

TEST_CASE("projected gradient of a linear monomial") {
  const LocalSpace s(pentagon(), 0, 3);
  const Eigen::VectorXd m10 = s.D().col(ScaledMonomials::index(1, 0));
  const Eigen::VectorXd gx = s.pi0_grad_star(0) * m10, gy = s.pi0_grad_star(1) * m10;
  const Eigen::VectorXd expected = unit(s.n_low(), 0) / s.diameter();
  CHECK(std::sqrt((gx - expected).dot(s.H_low() * (gx - expected)) / s.area()) * s.diameter() < 1e-10);
  CHECK(std::sqrt(gy.dot(s.H_low() * gy) / s.area()) * s.diameter() < 1e-10);
}

TEST_CASE("gradient projector consistency on curved elements") {
  // (grad Pi v, grad m_a) equals the integrated-by-parts oracle.
  for (const Mesh& m : std::vector<Mesh>{oracle::sector_mesh(), oracle::disk_mesh(0.3, {0.1, 0.2})}) {
    for (int k = 1; k <= 4; ++k) {
      const LocalSpace s(m, 0, k);
      const Eigen::VectorXd v = random_vector(s.size(), 100 + k);
      const Eigen::VectorXd lhs = s.G() * (s.pi_nabla_star() * v);
      const auto ex = oracle::exponents(k);
      for (std::size_t a = 1; a < ex.size(); ++a) {
        const double ref = oracle::stiffness_oracle(m, s, v, ex[a].first, ex[a].second);
        CHECK(std::abs(lhs[a] - ref) < 1e-9 * (1 + std::abs(ref)));
      }
      const Eigen::VectorXd c = oracle::pi_nabla_oracle(m, s, v);
      CHECK(rms(s, s.pi_nabla_star() * v - c) < 1e-9 * (1 + rms(s, c)));
    }
  }
}

TEST_CASE("L2 projector orthogonality on curved elements") {
  const Mesh sector = oracle::sector_mesh();
  for (int k = 2; k <= 4; ++k) {
    const LocalSpace s(sector, 0, k);
    const Eigen::VectorXd v = random_vector(s.size(), 200 + k);
    const Eigen::VectorXd hp = s.H() * (s.pi0_star() * v);
    const auto ex = oracle::exponents(k);
    for (std::size_t a = 0; a < ex.size(); ++a) {
      const double ref = oracle::mass_oracle(sector, s, v, ex[a].first, ex[a].second);
      CHECK(std::abs(hp[a] - ref) < 1e-9 * (1 + std::abs(ref)));
    }
  }
}

TEST_CASE("vector projector divergence identity on curved elements") {
  const Mesh disk = oracle::disk_mesh(0.5);
  for (int k = 1; k <= 4; ++k) {
    const LocalSpace s(disk, 0, k);
    const Eigen::VectorXd v = random_vector(s.size(), 300 + k);
    const auto ex = oracle::exponents(k - 1);
    const Vec2 c = s.centroid();
    const double h = s.diameter();
    for (int comp = 0; comp < 2; ++comp) {
      const Eigen::VectorXd lhs = s.H_low() * (s.pi0_grad_star(comp) * v);
      for (std::size_t b = 0; b < ex.size(); ++b) {
        const auto [p, q] = ex[b];
        // (d_c v, m) = -(v, d_c m) + boundary integral of v m n_c.
        double div = 0.0;
        if (comp == 0 && p > 0) div = p / h * oracle::moment_of(s, v, p - 1, q);
        if (comp == 1 && q > 0) div = q / h * oracle::moment_of(s, v, p, q - 1);
        const double bnd = oracle::boundary_integral(disk, s, v, [&](const Vec2& x, const Vec2& n) {
          return oracle::monomial(x, c, h, p, q) * n[comp];
        });
        CHECK(std::abs(lhs[b] + div - bnd) < 1e-10 * (1 + std::abs(bnd)));
      }
    }
  }
}

TEST_CASE("interpolation") {
  const Mesh sector = oracle::sector_mesh();
  const LocalSpace s(sector, 0, 3);
  const Eigen::VectorXd c = s.interpolate([](const Vec2&) { return 2.5; });
  for (int i = 0; i < s.layout().n_vertices * 3; ++i) CHECK(c[i] == 2.5);
  CHECK(c[s.layout().moment_dof(0)] == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(rms(s, s.pi0_star() * c - 2.5 * unit(s.n_poly(), 0)) < 1e-10);
  const auto g = [](const Vec2& x) { return 1 + x.x() - 2 * x.y() + 3 * x.x() * x.y() - x.y() * x.y() * x.x(); };
  const LocalSpace p(pentagon(), 0, 3);
  const Eigen::VectorXd v = p.interpolate(g);
  const Eigen::VectorXd coef = p.pi_nabla_star() * v;
  for (const Vec2& x : {Vec2(0.3, 0.4), Vec2(1.1, 0.6), Vec2(0.2, 1.0)})
    CHECK(std::abs(p.basis().values(x).dot(coef) - g(x)) < 1e-10);
}

TEST_CASE("interpolation error decays at order k + 1 on the quad family") {
  const RingSolution exact(0.5, 1.0);
  const auto g = [&](const Vec2& x) { return exact.value(x, 1.0); };
  for (int k = 1; k <= 3; ++k) {
    std::vector<double> h, e;
    for (int n : {8, 16, 32}) {
      const auto mesh = std::make_shared<const Mesh>(build_ring_quad(n, 2 * n, 0.5, 1.0));
      const GlobalSystem sys = assemble(mesh, k, {1});
      h.push_back(mesh->h());
      e.push_back(l2_error(sys, sys.interpolate(g), g).error);
    }
    INFO("k = " << k << ", errors " << e[0] << " " << e[1] << " " << e[2]);
    CHECK(log_log_slope(h, e) == doctest::Approx(k + 1).epsilon(0.15 / (k + 1)));
  }
}

TEST_CASE("DoF unisolvence on generated meshes") {
  for (const Mesh& m : std::vector<Mesh>{build_ring_quad(4, 8, 0.5, 1.0), build_ring_voronoi(ring_seeds(32, 0.5, 1.0), 0.5, 1.0),
                        build_cartesian_cut_circle(21, 0.2, Vec2::Zero())}) {
    for (int k : {1, 3}) {
      for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const LocalSpace s(m, static_cast<int>(e), k);
        CHECK(s.diagnostics().min_singular_d > 0.0);
        CHECK_FALSE(s.diagnostics().ill_conditioned);
      }
    }
  }
}
