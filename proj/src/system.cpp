#include "curvewave/system.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include "curvewave/error.hpp"
#include "curvewave/quadrature.hpp"

namespace curvewave {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

DofNumbering number_dofs(const Mesh& mesh, int k) {
  DofNumbering d;
  d.k = k;
  d.n_vertices = static_cast<int>(mesh.vertices.size());
  d.n_edges = static_cast<int>(mesh.edges.size());
  d.n_elements = static_cast<int>(mesh.elements.size());
  d.moments_per_element = ScaledMonomials::dim(k - 2);
  d.size = d.n_vertices + d.n_edges * (k - 1) + d.n_elements * d.moments_per_element;
  d.element_dofs.resize(d.n_elements);
  for (int e = 0; e < d.n_elements; ++e) {
    const Element& el = mesh.elements[e];
    std::vector<int>& map = d.element_dofs[e];
    for (const EdgeUse& u : el.loop) map.push_back(mesh.start_vertex(u));
    for (const EdgeUse& u : el.loop) {
      for (int j = 0; j < k - 1; ++j) map.push_back(d.edge_dof(u.edge, u.reversed ? k - 2 - j : j));
    }
    for (int a = 0; a < d.moments_per_element; ++a) map.push_back(d.moment_dof(e, a));
  }
  return d;
}

Eigen::VectorXd GlobalSystem::local(const Eigen::VectorXd& global, int element) const {
  const auto& map = dofs.element_dofs[element];
  Eigen::VectorXd v(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) v[i] = global[map[i]];
  return v;
}

Eigen::VectorXd GlobalSystem::interpolate(const ScalarField& g) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  for (std::size_t e = 0; e < spaces.size(); ++e) {
    const Eigen::VectorXd v = spaces[e].interpolate(g);
    const auto& map = dofs.element_dofs[e];
    for (std::size_t i = 0; i < map.size(); ++i) out[map[i]] = v[i];
  }
  return out;
}

Eigen::VectorXd GlobalSystem::load(const ScalarField& f) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  for (std::size_t e = 0; e < loads.size(); ++e) {
    const Eigen::VectorXd v = loads[e](f);
    const auto& map = dofs.element_dofs[e];
    for (std::size_t i = 0; i < map.size(); ++i) out[map[i]] += v[i];
  }
  return out;
}

Eigen::VectorXd GlobalSystem::dirichlet_values(const ScalarField& g) const {
  Eigen::VectorXd v(dirichlet_points.size());
  for (std::size_t i = 0; i < dirichlet_points.size(); ++i) v[i] = g(dirichlet_points[i]);
  return v;
}

GlobalSystem assemble(std::shared_ptr<const Mesh> mesh_ptr, int k, const AssemblyOptions& options) {
  if (!mesh_ptr) throw Error("assemble: null mesh");
  const Mesh& mesh = *mesh_ptr;
  GlobalSystem sys;
  sys.mesh = mesh_ptr;
  sys.k = k;
  sys.dofs = number_dofs(mesh, k);
  const int ne = sys.dofs.n_elements;

  std::vector<std::unique_ptr<LocalSpace>> spaces(ne);
  std::vector<std::unique_ptr<LocalLoad>> loads(ne);
  std::vector<Eigen::MatrixXd> me(ne), ae(ne);
  parallel_for(ne, options.threads, [&](int e) {
    spaces[e] = std::make_unique<LocalSpace>(mesh, e, k);
    const Material mat = mesh.material(mesh.elements[e].region);
    me[e] = local_mass(*spaces[e], mat.rho);
    ae[e] = local_stiffness(*spaces[e], mat.mu);
    loads[e] = std::make_unique<LocalLoad>(mesh, *spaces[e]);
  });

  std::vector<Eigen::Triplet<double>> tm, ta, tc;
  for (int e = 0; e < ne; ++e) {
    const auto& map = sys.dofs.element_dofs[e];
    if (static_cast<int>(map.size()) != spaces[e]->size()) throw MeshError("inconsistent local DoF count");
    for (std::size_t i = 0; i < map.size(); ++i) {
      for (std::size_t j = 0; j < map.size(); ++j) {
        tm.emplace_back(map[i], map[j], me[e](i, j));
        ta.emplace_back(map[i], map[j], ae[e](i, j));
      }
    }
  }

  // Edge owner for boundary data: the unique element using a boundary edge.
  std::vector<int> owner(mesh.edges.size(), -1);
  for (int e = 0; e < ne; ++e) {
    for (const EdgeUse& u : mesh.elements[e].loop) owner[u.edge] = e;
  }
  auto edge_nodes = [&](int edge) {
    std::vector<int> idx{mesh.edges[edge].v0};
    for (int j = 0; j < k - 1; ++j) idx.push_back(sys.dofs.edge_dof(edge, j));
    idx.push_back(mesh.edges[edge].v1);
    return idx;
  };
  const EdgeRule& gl = gauss_lobatto(k + 1);
  std::vector<char> constrained(sys.dofs.size, 0);
  for (int edge = 0; edge < static_cast<int>(mesh.edges.size()); ++edge) {
    const Edge& ed = mesh.edges[edge];
    if (ed.tag == BoundaryTag::Absorbing) {
      const double rho = mesh.material(mesh.elements[owner[edge]].region).rho;
      const Eigen::MatrixXd ce = local_absorbing(ed.length, rho, k);
      const auto idx = edge_nodes(edge);
      for (int i = 0; i <= k; ++i) {
        for (int j = 0; j <= k; ++j) tc.emplace_back(idx[i], idx[j], ce(i, j));
      }
    }
    if (ed.tag == BoundaryTag::Dirichlet) {
      const auto idx = edge_nodes(edge);
      const EdgeMap trace = mesh.trace_map(edge);
      for (int i = 0; i <= k; ++i) {
        if (constrained[idx[i]]) continue;
        constrained[idx[i]] = 1;
        sys.dirichlet_dofs.push_back(idx[i]);
        if (i == 0) sys.dirichlet_points.push_back(mesh.vertices[ed.v0]);
        else if (i == k) sys.dirichlet_points.push_back(mesh.vertices[ed.v1]);
        else sys.dirichlet_points.push_back(trace.point(0.5 * (gl.nodes[i] + 1.0) * trace.length()));
      }
    }
  }

  const int n = sys.dofs.size;
  sys.M.resize(n, n);
  sys.A.resize(n, n);
  sys.C.resize(n, n);
  sys.M.setFromTriplets(tm.begin(), tm.end());
  sys.A.setFromTriplets(ta.begin(), ta.end());
  sys.C.setFromTriplets(tc.begin(), tc.end());
  sys.spaces.reserve(ne);
  sys.loads.reserve(ne);
  for (int e = 0; e < ne; ++e) {
    sys.spaces.push_back(std::move(*spaces[e]));
    sys.loads.push_back(std::move(*loads[e]));
  }
  return sys;
}

ConstrainedOperator::ConstrainedOperator(const SparseMatrix& k, const std::vector<int>& constrained)
    : constrained_(constrained) {
  const int n = static_cast<int>(k.rows());
  std::vector<int> position(n, -1);
  std::vector<char> is_constrained(n, 0);
  for (int d : constrained_) is_constrained[d] = 1;
  for (int i = 0; i < n; ++i) {
    if (!is_constrained[i]) {
      position[i] = static_cast<int>(free_.size());
      free_.push_back(i);
    }
  }
  std::vector<int> cpos(n, -1);
  for (std::size_t c = 0; c < constrained_.size(); ++c) cpos[constrained_[c]] = static_cast<int>(c);
  std::vector<Eigen::Triplet<double>> tff, tfd;
  for (int col = 0; col < k.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(k, col); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (position[r] < 0) continue;
      if (position[c] >= 0) tff.emplace_back(position[r], position[c], it.value());
      else tfd.emplace_back(position[r], cpos[c], it.value());
    }
  }
  kff_.resize(static_cast<int>(free_.size()), static_cast<int>(free_.size()));
  kfd_.resize(static_cast<int>(free_.size()), static_cast<int>(constrained_.size()));
  kff_.setFromTriplets(tff.begin(), tff.end());
  kfd_.setFromTriplets(tfd.begin(), tfd.end());
  solver_.compute(kff_);
}

Eigen::VectorXd ConstrainedOperator::solve(const Eigen::VectorXd& rhs, const Eigen::VectorXd& values) const {
  Eigen::VectorXd bf(free_.size());
  for (std::size_t i = 0; i < free_.size(); ++i) bf[i] = rhs[free_[i]];
  if (!constrained_.empty()) bf -= kfd_ * values;
  const Eigen::VectorXd xf = solver_.solve(bf);
  Eigen::VectorXd x(rhs.size());
  for (std::size_t i = 0; i < free_.size(); ++i) x[free_[i]] = xf[i];
  for (std::size_t c = 0; c < constrained_.size(); ++c) x[constrained_[c]] = values[c];
  return x;
}

ConstrainedOperator apply_dirichlet(const GlobalSystem& system, const SparseMatrix& k) {
  return ConstrainedOperator(k, system.dirichlet_dofs);
}

}  // namespace curvewave
