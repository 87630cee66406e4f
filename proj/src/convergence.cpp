#include "curvewave/convergence.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <locale>
#include <mutex>
#include <sstream>

#include "curvewave/error.hpp"
#include "curvewave/generators.hpp"
#include "curvewave/manufactured.hpp"
#include "curvewave/time_integrator.hpp"

namespace curvewave {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace

ErrorReport run_manufactured(const Mesh& mesh, double r_inner, double r_outer, const ManufacturedRun& run) {
  const RingSolution exact(r_inner, r_outer);
  const auto t0 = Clock::now();
  auto mesh_ptr = std::make_shared<const Mesh>(run.mode == GeometryMode::NoGeo ? straighten(mesh) : mesh);
  AssemblyOptions options;
  options.threads = run.threads;
  const GlobalSystem system = assemble(mesh_ptr, run.k, options);
  const TimeStepper stepper(system, run.dt, run.scheme);
  ErrorReport report;
  report.assembly_seconds = seconds_since(t0);

  const auto t1 = Clock::now();
  const Eigen::VectorXd p0 = system.interpolate([&](const Vec2& x) { return exact.value(x, 0.0); });
  const Eigen::VectorXd p1 = system.interpolate([&](const Vec2& x) { return exact.velocity(x, 0.0); });
  const Forcing f = [&](double t) { return system.load([&](const Vec2& x) { return exact.forcing(x, t); }); };
  const DirichletData g = [&](double t) {
    return system.dirichlet_values([&](const Vec2& x) { return exact.value(x, t); });
  };
  WaveState state = stepper.startup(p0, p1, f, g, run.startup);
  for (int i = 1; i < run.steps; ++i) stepper.step(state, f, g);
  report.solve_seconds = seconds_since(t1);

  const double t = state.time();
  const NormError l2 = l2_error(system, state.current, [&](const Vec2& x) { return exact.value(x, t); });
  const NormError h1 = h1_error(system, state.current, [&](const Vec2& x) { return exact.gradient(x, t); });
  report.mode = to_string(run.mode);
  report.k = run.k;
  report.h = mesh_ptr->h();
  report.l2 = l2.error;
  report.h1 = h1.error;
  report.l2_absolute = l2.absolute;
  report.h1_absolute = h1.absolute;
  report.dofs = system.size();
  return report;
}

std::vector<Mesh> study_meshes(const StudyConfig& config) {
  std::vector<Mesh> meshes;
  if (config.family == "quad") {
    for (const auto& s : config.quad_sizes) meshes.push_back(build_ring_quad(s[0], s[1], config.r_inner, config.r_outer));
  } else {
    for (int n : config.poly_counts)
      meshes.push_back(
          build_ring_voronoi(read_seed_file(seed_file_path(config.seeds_dir, n)), config.r_inner, config.r_outer));
  }
  return meshes;
}

StudyResult convergence_study(const StudyConfig& config) {
  const std::vector<Mesh> meshes = study_meshes(config);
  struct Task {
    int mesh, k;
    GeometryMode mode;
  };
  std::vector<Task> tasks;
  for (int k : config.k)
    for (GeometryMode mode : config.modes)
      for (int m = 0; m < static_cast<int>(meshes.size()); ++m) tasks.push_back({m, k, mode});

  std::vector<ErrorReport> reports(tasks.size());
  std::vector<std::string> failures(tasks.size());
  std::vector<char> done(tasks.size(), 0);
  parallel_for(static_cast<int>(tasks.size()), config.threads, [&](int i) {
    const Task& task = tasks[i];
    ManufacturedRun run;
    run.k = task.k;
    run.mode = task.mode;
    run.dt = config.dt;
    run.steps = config.steps;
    run.startup = config.startup;
    run.scheme = config.scheme;
    run.threads = 1;
    try {
      reports[i] = run_manufactured(meshes[task.mesh], config.r_inner, config.r_outer, run);
      reports[i].family = config.family;
      reports[i].mesh_index = task.mesh;
      done[i] = 1;
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  StudyResult result;
  std::ostringstream errors;
  errors.imbue(std::locale::classic());
  errors.precision(10);
  errors << "family,mode,k,mesh,h,L2,H1,n,assembly_s,solve_s\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!done[i]) continue;
    const ErrorReport& r = reports[i];
    result.reports.push_back(r);
    errors << r.family << ',' << r.mode << ',' << r.k << ',' << r.mesh_index << ',' << r.h << ',' << r.l2 << ','
           << r.h1 << ',' << r.dofs << ',' << r.assembly_seconds << ',' << r.solve_seconds << '\n';
  }
  std::filesystem::create_directories(config.output_dir);
  const auto path = [&](const char* name) { return (std::filesystem::path(config.output_dir) / name).string(); };
  write_text(path("errors.csv"), errors.str());

  std::string failed;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (!done[i])
      failed += "\n  mesh " + std::to_string(tasks[i].mesh) + " k=" + std::to_string(tasks[i].k) + " " +
                to_string(tasks[i].mode) + ": " + failures[i];
  if (!failed.empty()) throw SolverError("convergence study '" + config.name + "' aborted:" + failed);

  std::ostringstream rates;
  rates.imbue(std::locale::classic());
  rates.precision(6);
  rates << "family,mode,k,norm,successive,fit,expected,tolerance,passed\n";
  for (int k : config.k) {
    for (GeometryMode mode : config.modes) {
      std::vector<ErrorReport> family;
      for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].k == k && tasks[i].mode == mode) family.push_back(reports[i]);
      const RateTable table = rate_table(family, config.fit_window);
      result.rates.push_back(table);
      const bool saturated = mode == GeometryMode::NoGeo && k >= 2;
      for (const char* norm : {"L2", "H1"}) {
        const bool l2 = norm[0] == 'L';
        RateCheck check;
        check.family = config.family;
        check.mode = to_string(mode);
        check.k = k;
        check.norm = norm;
        check.observed = l2 ? table.l2_fit : table.h1_fit;
        const std::vector<double>& successive = l2 ? table.l2_successive : table.h1_successive;
        if (saturated) {
          check.expected = l2 ? 0.0 : config.saturation_slope;
          check.tolerance = l2 ? 0.0 : config.saturation_tolerance;
        } else {
          check.expected = l2 ? k + 1.0 : k;
          check.tolerance = config.slope_tolerance;
        }
        const bool checked = !(saturated && l2);
        check.passed = !checked || std::abs(check.observed - check.expected) <= check.tolerance;
        std::string s;
        for (std::size_t j = 0; j < successive.size(); ++j) {
          std::ostringstream v;
          v.imbue(std::locale::classic());
          v.precision(4);
          v << successive[j];
          s += (j ? ";" : "") + v.str();
        }
        rates << check.family << ',' << check.mode << ',' << k << ',' << norm << ',' << s << ',' << check.observed
              << ',';
        if (checked)
          rates << check.expected << ',' << check.tolerance << ',' << (check.passed ? "yes" : "no") << '\n';
        else
          rates << ",,\n";
        if (checked) result.checks.push_back(check);
      }
    }
  }
  write_text(path("rates.csv"), rates.str());
  return result;
}

}  // namespace curvewave
