#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "curvewave/config.hpp"
#include "curvewave/convergence.hpp"
#include "curvewave/error.hpp"
#include "curvewave/generators.hpp"
#include "curvewave/mesh_io.hpp"
#include "curvewave/simulation.hpp"

using namespace curvewave;

namespace {

void summarize(const Mesh& mesh) {
  int curved = 0;
  for (const Edge& e : mesh.edges) curved += e.curve >= 0;
  std::printf("vertices %zu  edges %zu (curved %d)  elements %zu  h %.6g  area %.15g\n", mesh.vertices.size(),
              mesh.edges.size(), curved, mesh.elements.size(), mesh.h(), mesh.total_area());
  for (const auto& [id, name] : mesh.region_names) {
    int count = 0;
    double area = 0.0;
    for (const Element& el : mesh.elements)
      if (el.region == id) {
        ++count;
        area += el.area;
      }
    const Material m = mesh.material(id);
    std::printf("  region %d %-12s elements %6d  area %.12g  rho %g  mu %g\n", id, name.c_str(), count, area, m.rho,
                m.mu);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element acoustic wave solver on curved polygonal meshes"};
  app.require_subcommand(1);

  auto* mesh_cmd = app.add_subcommand("mesh", "generate a mesh file");
  std::string generator, output, seeds, write_seeds, fault;
  int nr = 4, nt = 8, count = 0, n = 81;
  double ri = 0.5, ro = 1.0, radius = 0.2, cx = 0.0, cy = 0.0;
  bool nogeo = false;
  mesh_cmd->add_option("generator", generator, "ring_quad | ring_voronoi | cut_circle | layered_fault")
      ->required()
      ->check(CLI::IsMember({"ring_quad", "ring_voronoi", "cut_circle", "layered_fault"}));
  mesh_cmd->add_option("-o,--output", output, "mesh file to write")->required();
  mesh_cmd->add_option("--nr", nr, "radial layers (ring_quad)");
  mesh_cmd->add_option("--nt", nt, "angular sectors (ring_quad)");
  mesh_cmd->add_option("--ri", ri, "inner radius");
  mesh_cmd->add_option("--ro", ro, "outer radius");
  mesh_cmd->add_option("--seeds", seeds, "seed file (ring_voronoi)");
  mesh_cmd->add_option("--count", count, "number of relaxed random seeds (ring_voronoi)");
  mesh_cmd->add_option("--write-seeds", write_seeds, "save the generated seeds");
  mesh_cmd->add_option("-n", n, "cells per side (cut_circle)");
  mesh_cmd->add_option("--radius", radius, "circle radius (cut_circle)");
  mesh_cmd->add_option("--cx", cx, "circle center x (cut_circle)");
  mesh_cmd->add_option("--cy", cy, "circle center y (cut_circle)");
  mesh_cmd->add_option("--spec", fault, "interface spec JSON (layered_fault)");
  mesh_cmd->add_flag("--nogeo", nogeo, "replace curved edges by chords");

  auto* run_cmd = app.add_subcommand("run", "run a wave scenario");
  std::string scenario_path, run_out;
  run_cmd->add_option("-c,--config", scenario_path, "scenario JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--output-dir", run_out, "override output_dir");

  auto* conv_cmd = app.add_subcommand("converge", "run a convergence study");
  std::string study_path, conv_out;
  conv_cmd->add_option("-c,--config", study_path, "study JSON")->required()->check(CLI::ExistingFile);
  conv_cmd->add_option("-o,--output-dir", conv_out, "override output_dir");

  auto* val_cmd = app.add_subcommand("validate", "mesh quality report");
  std::string val_path;
  MeshQualityThresholds thresholds;
  bool verbose = false;
  val_cmd->add_option("mesh", val_path, "mesh file")->required()->check(CLI::ExistingFile);
  val_cmd->add_option("--star", thresholds.star, "star-shapedness threshold");
  val_cmd->add_option("--edge", thresholds.edge, "edge ratio threshold");
  val_cmd->add_flag("-v,--verbose", verbose, "list flagged elements");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mesh_cmd) {
      Mesh mesh;
      if (generator == "ring_quad") {
        mesh = build_ring_quad(nr, nt, ri, ro);
      } else if (generator == "ring_voronoi") {
        if (seeds.empty() && count < 3) throw ConfigError("ring_voronoi needs --seeds or --count >= 3");
        const auto points = seeds.empty() ? ring_seeds(count, ri, ro) : read_seed_file(seeds);
        if (!write_seeds.empty()) write_seed_file(write_seeds, points);
        mesh = build_ring_voronoi(points, ri, ro);
      } else if (generator == "cut_circle") {
        mesh = build_cartesian_cut_circle(n, radius, Vec2(cx, cy));
      } else {
        mesh = build_layered_fault(fault.empty() ? default_layered_fault_spec() : read_layered_fault_spec(fault));
      }
      if (nogeo) mesh = straighten(mesh);
      write_mesh(output, mesh);
      summarize(mesh);
    } else if (*run_cmd) {
      ScenarioConfig config = load_scenario(scenario_path);
      if (!run_out.empty()) config.output_dir = run_out;
      const SimulationResult r = run_simulation(config);
      std::printf("%s: %d elements, %d dofs, %d steps to t=%g\n", config.name.c_str(), r.elements, r.dofs, r.steps,
                  r.final_time);
      std::printf("max |p| %.6g  final energy %.6g  snapshots %zu  assembly %.2fs  march %.2fs\n", r.max_abs,
                  r.energies.back(), r.snapshots.size(), r.assembly_seconds, r.solve_seconds);
      for (const auto& [name, e] : r.region_energy) std::printf("  energy[%s] %.6g\n", name.c_str(), e);
    } else if (*conv_cmd) {
      StudyConfig config = load_study(study_path);
      if (!conv_out.empty()) config.output_dir = conv_out;
      const StudyResult r = convergence_study(config);
      for (const ErrorReport& e : r.reports)
        std::printf("%s %-7s k=%d mesh %d h=%.4f n=%7d L2=%.4e H1=%.4e\n", e.family.c_str(), e.mode.c_str(), e.k,
                    e.mesh_index, e.h, e.dofs, e.l2, e.h1);
      bool ok = true;
      for (const RateCheck& c : r.checks) {
        std::printf("%s %-7s k=%d %s slope %.3f expected %.2f +- %.2f %s\n", c.family.c_str(), c.mode.c_str(), c.k,
                    c.norm.c_str(), c.observed, c.expected, c.tolerance, c.passed ? "ok" : "OUT OF RANGE");
        ok = ok && c.passed;
      }
      return ok ? 0 : 3;
    } else if (*val_cmd) {
      const Mesh mesh = read_mesh(val_path);
      summarize(mesh);
      const MeshQualityReport q = validate(mesh, thresholds);
      std::printf("min star ratio %.4g  min edge ratio %.4g  flagged %d (thresholds %g, %g)\n", q.min_star_ratio,
                  q.min_edge_ratio, q.flagged, thresholds.star, thresholds.edge);
      if (verbose)
        for (std::size_t e = 0; e < q.elements.size(); ++e)
          if (q.elements[e].flagged)
            std::printf("  element %zu star %.4g edge %.4g\n", e, q.elements[e].star_ratio, q.elements[e].edge_ratio);
      return q.flagged ? 2 : 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
