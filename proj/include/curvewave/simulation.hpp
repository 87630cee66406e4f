#pragma once

#include <map>
#include <string>
#include <vector>

#include "curvewave/config.hpp"
#include "curvewave/system.hpp"

namespace curvewave {

struct Snapshot {
  int step = 0;
  double time = 0.0;
  std::string path;
  double max_abs = 0.0;
};

struct SimulationResult {
  int steps = 0;
  double final_time = 0.0;
  int dofs = 0;
  int elements = 0;
  bool finite = true;
  double max_abs = 0.0;  // over all levels of the DoF vector
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<std::vector<double>> probes;  // per probe, per recorded time
  std::vector<Snapshot> snapshots;
  // Energy split by region name at the final level, same form as `energies`.
  std::map<std::string, double> region_energy;
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
};

// Builds the mesh, applies materials, validates region names and probe
// locations, then marches to T writing energy.csv and snap_<step>.vtk into
// output_dir.
SimulationResult run_simulation(const ScenarioConfig& config);

// Element containing p (curved boundaries sampled), or -1.
int locate_element(const Mesh& mesh, const Vec2& p);

// Energy restricted to the elements of each region, keyed by region name.
std::map<std::string, double> region_energies(const GlobalSystem& system, const Eigen::VectorXd& velocity,
                                              const Eigen::VectorXd& displacement);

}  // namespace curvewave
