#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curvewave/system.hpp"

namespace curvewave {

using VectorField = std::function<Vec2(const Vec2&)>;

struct NormError {
  double error = 0.0;      // relative unless `absolute`
  double difference = 0.0;  // ||p_ex - Pi p_h||
  double reference = 0.0;   // ||p_ex||
  bool absolute = false;    // reference vanished, error is the plain difference
};

// ||p_ex - Pi0_k p_h|| / ||p_ex|| over the mesh, cell rules of degree 2k+2.
NormError l2_error(const GlobalSystem& system, const Eigen::VectorXd& p_h, const ScalarField& p_ex);
// ||grad p_ex - Pi0_{k-1} grad p_h|| / ||grad p_ex||.
NormError h1_error(const GlobalSystem& system, const Eigen::VectorXd& p_h, const VectorField& grad_ex);

struct ErrorReport {
  std::string family;
  std::string mode;  // withGeo | noGeo
  int k = 1;
  int mesh_index = 0;
  double h = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  bool l2_absolute = false;
  bool h1_absolute = false;
  int dofs = 0;
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct RateTable {
  std::string family;
  std::string mode;
  int k = 1;
  std::vector<double> h;
  std::vector<double> l2_successive;  // log(e_j / e_{j+1}) / log(h_j / h_{j+1})
  std::vector<double> h1_successive;
  double l2_fit = 0.0;  // least-squares slope over the last `fit_window` meshes
  double h1_fit = 0.0;
  int fit_window = 3;
};

// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Reports must belong to one (family, mode, k) sequence with h strictly
// decreasing; needs at least 3 meshes.
RateTable rate_table(const std::vector<ErrorReport>& reports, int fit_window = 3);

}  // namespace curvewave
