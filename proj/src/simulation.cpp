#include "curvewave/simulation.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include "curvewave/error.hpp"
#include "curvewave/expression.hpp"
#include "curvewave/forms.hpp"
#include "curvewave/time_integrator.hpp"
#include "curvewave/vtk.hpp"

namespace curvewave {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Vec2> boundary_polygon(const Mesh& mesh, const Element& el) {
  std::vector<Vec2> poly;
  for (const EdgeUse& use : el.loop) {
    const OrientedEdge edge = mesh.oriented(use);
    const int pieces = edge.map.curved() ? 32 : 1;
    for (int j = 0; j < pieces; ++j) poly.push_back(edge.point(edge.length() * j / pieces));
  }
  return poly;
}

bool inside(const std::vector<Vec2>& poly, const Vec2& p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) && p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
      in = !in;
  }
  return in;
}

}  // namespace

int locate_element(const Mesh& mesh, const Vec2& p) {
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const Element& el = mesh.elements[e];
    if ((p - el.centroid).norm() > el.diameter) continue;
    if (inside(boundary_polygon(mesh, el), p)) return static_cast<int>(e);
  }
  return -1;
}

std::map<std::string, double> region_energies(const GlobalSystem& system, const Eigen::VectorXd& velocity,
                                              const Eigen::VectorXd& displacement) {
  const Mesh& mesh = *system.mesh;
  std::map<int, double> by_id;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const Material mat = mesh.material(mesh.elements[e].region);
    const LocalSpace& s = system.spaces[e];
    const Eigen::VectorXd v = system.local(velocity, static_cast<int>(e));
    const Eigen::VectorXd p = system.local(displacement, static_cast<int>(e));
    by_id[mesh.elements[e].region] += v.dot(local_mass(s, mat.rho) * v) + p.dot(local_stiffness(s, mat.mu) * p);
  }
  std::map<std::string, double> out;
  for (const auto& [id, value] : by_id) {
    auto name = mesh.region_names.find(id);
    out[name == mesh.region_names.end() ? "region" + std::to_string(id) : name->second] += value;
  }
  return out;
}

SimulationResult run_simulation(const ScenarioConfig& config) {
  const auto t_assembly = Clock::now();
  Mesh mesh = build_mesh(config.mesh);
  if (config.geometry == GeometryMode::NoGeo) mesh = straighten(mesh);

  std::vector<std::string> issues;
  for (const auto& [name, material] : config.materials) {
    try {
      mesh.materials[mesh.region_id(name)] = material;
    } catch (const MeshError&) {
      std::string known;
      for (const auto& [id, n] : mesh.region_names) known += (known.empty() ? "" : ", ") + n;
      issues.push_back("materials." + name + ": no such region (mesh has " + known + ")");
    }
  }
  std::vector<int> probe_elements;
  for (std::size_t i = 0; i < config.probes.size(); ++i) {
    const int e = locate_element(mesh, config.probes[i]);
    if (e < 0) issues.push_back("probes[" + std::to_string(i) + "]: outside the mesh");
    probe_elements.push_back(e);
  }
  const long long n_steps = std::llround(config.final_time / config.dt);
  if (n_steps < 1 || std::abs(n_steps * config.dt - config.final_time) > 1e-9 * config.final_time)
    issues.push_back("T must be a positive integer multiple of dt");
  if (!issues.empty()) {
    std::string msg = "scenario '" + config.name + "' is inconsistent with its mesh:";
    for (const auto& i : issues) msg += "\n  " + i;
    throw ConfigError(msg);
  }

  const Expression dirichlet = Expression::parse(config.dirichlet, config.constants);
  const Expression source = Expression::parse(config.source, config.constants);
  const Expression p0_expr = Expression::parse(config.p0, config.constants);
  const Expression p1_expr = Expression::parse(config.p1, config.constants);

  auto mesh_ptr = std::make_shared<const Mesh>(std::move(mesh));
  AssemblyOptions options;
  options.threads = config.threads;
  GlobalSystem system = assemble(mesh_ptr, config.k, options);
  TimeStepper stepper(system, config.dt, config.scheme);

  SimulationResult result;
  result.dofs = system.size();
  result.elements = static_cast<int>(mesh_ptr->elements.size());
  result.assembly_seconds = seconds_since(t_assembly);

  std::vector<Eigen::RowVectorXd> probe_rows;
  for (std::size_t i = 0; i < config.probes.size(); ++i) {
    const LocalSpace& s = system.spaces[probe_elements[i]];
    probe_rows.push_back(s.basis().values(config.probes[i]).transpose() * s.pi0_star());
  }
  const auto probe_values = [&](const Eigen::VectorXd& p) {
    std::vector<double> out;
    for (std::size_t i = 0; i < probe_rows.size(); ++i)
      out.push_back(probe_rows[i].dot(system.local(p, probe_elements[i])));
    return out;
  };

  Forcing f;
  if (!source.is_zero())
    f = [&](double t) { return system.load([&](const Vec2& x) { return source(x.x(), x.y(), t); }); };
  DirichletData g;
  if (!dirichlet.is_zero() && !system.dirichlet_dofs.empty())
    g = [&](double t) { return system.dirichlet_values([&](const Vec2& x) { return dirichlet(x.x(), x.y(), t); }); };
  const Eigen::VectorXd p0 = system.interpolate([&](const Vec2& x) { return p0_expr(x.x(), x.y(), 0.0); });
  const Eigen::VectorXd p1 = system.interpolate([&](const Vec2& x) { return p1_expr(x.x(), x.y(), 0.0); });

  if (!config.output_dir.empty()) std::filesystem::create_directories(config.output_dir);
  const auto out_path = [&](const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
  };
  const auto snapshot = [&](int step, const Eigen::VectorXd& p) {
    Snapshot s;
    s.step = step;
    s.time = step * config.dt;
    s.max_abs = p.size() ? p.cwiseAbs().maxCoeff() : 0.0;
    if (config.write_snapshots) {
      s.path = out_path("snap_" + std::to_string(step) + ".vtk");
      write_vtk(s.path, system, p, s.time);
    }
    result.snapshots.push_back(s);
  };

  const auto t_solve = Clock::now();
  snapshot(0, p0);
  WaveState state = stepper.startup(p0, p1, f, g, config.startup);
  const auto record = [&]() {
    const double t = state.time();
    result.times.push_back(t);
    result.energies.push_back(stepper.energy(state));
    result.probes.push_back(probe_values(state.current));
    if (!state.current.allFinite()) result.finite = false;
    if (result.finite) result.max_abs = std::max(result.max_abs, state.current.cwiseAbs().maxCoeff());
  };
  result.max_abs = p0.size() ? p0.cwiseAbs().maxCoeff() : 0.0;
  record();
  int step = 1;
  const auto stride_hit = [&](int s) { return config.snapshot_stride > 0 && s % config.snapshot_stride == 0; };
  if (stride_hit(step) && step != n_steps) snapshot(step, state.current);
  while (step < n_steps && result.finite) {
    stepper.step(state, f, g);
    ++step;
    record();
    if (stride_hit(step) && step != n_steps) snapshot(step, state.current);
  }
  if (result.finite) snapshot(step, state.current);
  result.steps = step;
  result.final_time = step * config.dt;
  result.solve_seconds = seconds_since(t_solve);

  const Eigen::VectorXd v = (state.current - state.previous) / config.dt;
  Eigen::VectorXd stiff = state.current;
  if (config.scheme == StepScheme::Newmark) stiff = 0.5 * (state.current + state.previous);
  if (result.finite) result.region_energy = region_energies(system, v, stiff);

  std::ostringstream csv;
  csv.imbue(std::locale::classic());
  csv.precision(12);
  csv << "t,energy";
  for (std::size_t i = 0; i < config.probes.size(); ++i) csv << ",probe_" << i;
  csv << '\n';
  for (std::size_t r = 0; r < result.times.size(); ++r) {
    csv << result.times[r] << ',' << result.energies[r];
    for (double pv : result.probes[r]) csv << ',' << pv;
    csv << '\n';
  }
  std::ofstream file(out_path("energy.csv"));
  if (!file) throw Error("cannot write " + out_path("energy.csv"));
  file << csv.str();
  if (!result.finite) throw SolverError("scenario '" + config.name + "' produced non-finite values at step " +
                                        std::to_string(step));
  return result;
}

}  // namespace curvewave
