#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvewave/mesh.hpp"
#include "curvewave/time_integrator.hpp"

namespace curvewave {

enum class GeometryMode { WithGeo, NoGeo };

const char* to_string(GeometryMode mode);
GeometryMode geometry_mode_from_string(const std::string& s);

// Mesh source: a mesh file or one of the generators.
struct MeshSpec {
  std::string generator = "ring_quad";  // file | ring_quad | ring_voronoi | cut_circle | layered_fault
  std::string file;
  int nr = 4, nt = 8;
  double r_inner = 0.5, r_outer = 1.0;
  std::string seeds_file;
  int seed_count = 0;
  int n = 81;
  double radius = 0.2;
  Vec2 center = Vec2::Zero();
  std::string fault_spec;  // empty: bundled reconstruction
};

Mesh build_mesh(const MeshSpec& spec);

struct ScenarioConfig {
  std::string name = "scenario";
  MeshSpec mesh;
  GeometryMode geometry = GeometryMode::WithGeo;
  int k = 2;
  double dt = 1e-3;
  double final_time = 1.0;
  StartupMode startup = StartupMode::Taylor;
  StepScheme scheme = StepScheme::Paper;
  std::map<std::string, double> constants;
  std::map<std::string, Material> materials;  // by region name
  std::string dirichlet = "0";
  std::string source = "0";
  std::string p0 = "0";
  std::string p1 = "0";
  int snapshot_stride = 0;  // 0: initial and final snapshots only
  bool write_snapshots = true;
  std::vector<Vec2> probes;
  std::string output_dir = ".";
  int threads = 0;
};

struct StudyConfig {
  std::string name = "study";
  std::string family = "quad";  // quad | poly
  std::vector<std::array<int, 2>> quad_sizes{{4, 8}, {8, 16}, {16, 32}, {32, 64}};
  std::vector<int> poly_counts{32, 128, 512, 2048};
  std::string seeds_dir;  // empty: bundled seeds
  double r_inner = 0.5, r_outer = 1.0;
  std::vector<int> k{1, 2, 3};
  std::vector<GeometryMode> modes{GeometryMode::WithGeo, GeometryMode::NoGeo};
  double dt = 1e-8;
  int steps = 10;
  StartupMode startup = StartupMode::Taylor;
  StepScheme scheme = StepScheme::Paper;
  double slope_tolerance = 0.15;
  double saturation_slope = 1.5;
  double saturation_tolerance = 0.25;
  int fit_window = 3;
  std::string output_dir = ".";
  int threads = 0;
};

// Relative paths inside a config resolve against `base_dir`. Every problem
// found is reported in one ConfigError.
ScenarioConfig parse_scenario(const nlohmann::json& j, const std::string& base_dir = ".");
StudyConfig parse_study(const nlohmann::json& j, const std::string& base_dir = ".");
ScenarioConfig load_scenario(const std::string& path);
StudyConfig load_study(const std::string& path);

std::string seed_file_path(const std::string& seeds_dir, int count);

}  // namespace curvewave
