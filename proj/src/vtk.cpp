#include "curvewave/vtk.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <locale>
#include <sstream>

#include "curvewave/error.hpp"

namespace curvewave {

void write_vtk(const std::string& path, const GlobalSystem& system, const Eigen::VectorXd& p_h, double time) {
  const Mesh& mesh = *system.mesh;
  std::vector<Vec2> points;
  std::vector<double> values;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> tri_element;

  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const Element& el = mesh.elements[e];
    const LocalSpace& s = system.spaces[e];
    const Eigen::VectorXd coeff = s.pi0_star() * system.local(p_h, static_cast<int>(e));
    const auto sample = [&](const Vec2& x) {
      points.push_back(x);
      values.push_back(s.basis().values(x).dot(coeff));
      return static_cast<int>(points.size()) - 1;
    };
    const int center = sample(el.centroid);
    const int first = static_cast<int>(points.size());
    for (const EdgeUse& use : el.loop) {
      const OrientedEdge edge = mesh.oriented(use);
      const int pieces = edge.map.curved() ? std::max(8, 2 * system.k) : std::max(1, system.k);
      for (int j = 0; j < pieces; ++j) sample(edge.point(edge.length() * j / pieces));
    }
    const int last = static_cast<int>(points.size());
    for (int i = first; i < last; ++i) {
      triangles.push_back({center, i, i + 1 < last ? i + 1 : first});
      tri_element.push_back(static_cast<int>(e));
    }
  }

  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(12);
  out << "# vtk DataFile Version 3.0\n";
  out << "curvewave field t=" << time << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  for (const Vec2& p : points) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << triangles.size() << ' ' << 4 * triangles.size() << '\n';
  for (const auto& t : triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << triangles.size() << '\n';
  for (std::size_t i = 0; i < triangles.size(); ++i) out << "5\n";
  out << "CELL_DATA " << triangles.size() << "\nSCALARS region int 1\nLOOKUP_TABLE default\n";
  for (int e : tri_element) out << mesh.elements[e].region << '\n';
  out << "SCALARS element int 1\nLOOKUP_TABLE default\n";
  for (int e : tri_element) out << e << '\n';
  out << "POINT_DATA " << points.size() << "\nSCALARS p double 1\nLOOKUP_TABLE default\n";
  for (double v : values) out << v << '\n';

  std::ofstream file(path);
  if (!file) throw Error("cannot open " + path + " for writing");
  file << out.str();
  if (!file) throw Error("failed writing " + path);
}

}  // namespace curvewave
