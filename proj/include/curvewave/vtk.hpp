#pragma once

#include <string>

#include "curvewave/system.hpp"

namespace curvewave {

// Legacy ASCII unstructured grid: each element as a triangle fan from its
// centroid over its boundary, curved edges subdivided. POINT_DATA "p" is
// Pi0_k p_h sampled at the fan vertices; CELL_DATA holds region and element.
void write_vtk(const std::string& path, const GlobalSystem& system, const Eigen::VectorXd& p_h, double time = 0.0);

}  // namespace curvewave
