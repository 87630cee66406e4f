#pragma once

#include <memory>
#include <string>
#include <vector>

#include "curvewave/config.hpp"
#include "curvewave/errors.hpp"

namespace curvewave {

struct ManufacturedRun {
  int k = 1;
  GeometryMode mode = GeometryMode::WithGeo;
  double dt = 1e-8;
  int steps = 10;
  StartupMode startup = StartupMode::Taylor;
  StepScheme scheme = StepScheme::Paper;
  int threads = 1;
};

// Marches the ring manufactured solution (rho = mu = 1) on `mesh` and
// reports errors at the final level t = steps * dt.
ErrorReport run_manufactured(const Mesh& mesh, double r_inner, double r_outer, const ManufacturedRun& run);

struct RateCheck {
  std::string family;
  std::string mode;
  int k = 1;
  std::string norm;  // L2 | H1
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct StudyResult {
  std::vector<ErrorReport> reports;
  std::vector<RateTable> rates;
  std::vector<RateCheck> checks;
};

// The study's mesh family in refinement order.
std::vector<Mesh> study_meshes(const StudyConfig& config);

// Runs every (mesh, k, mode) in parallel, writes errors.csv and rates.csv
// into output_dir. A failing sub-run aborts after the partial CSV is saved.
StudyResult convergence_study(const StudyConfig& config);

}  // namespace curvewave
