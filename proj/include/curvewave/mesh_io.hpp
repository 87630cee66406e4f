#pragma once

#include <iosfwd>
#include <string>

#include "curvewave/mesh.hpp"

namespace curvewave {

// Plain-text "curvemesh v1" format, 17 significant digits, classic locale:
//
//   curvemesh v1
//   CURVES n        id segment ax ay bx by | id arc cx cy r theta0 theta1
//                   | id sampled m t_0 x_0 y_0 ... t_{m-1} x_{m-1} y_{m-1}
//   VERTICES n      id x y
//   EDGES n         id v0 v1 curve origin s0 s1 tag
//   ELEMENTS n      id count e_1 ... e_count   (e = +(edge+1) forward, -(edge+1) reversed)
//   REGIONS n       element region
//   MATERIALS n     region rho mu name
//   END
//
// Lines starting with '#' are ignored.
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh(const std::string& path, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::string& path);

}  // namespace curvewave
