#include "curvewave/generators.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "curvewave/error.hpp"

namespace curvewave {

Mesh build_ring_quad(int nr, int nt, double r_inner, double r_outer) {
  if (nr < 1 || nt < 3) throw MeshError("ring_quad needs nr >= 1 and nt >= 3");
  if (!(r_inner > 0.0) || !(r_outer > r_inner)) throw MeshError("ring_quad needs 0 < r_inner < r_outer");
  MeshBuilder b(1e-12 * r_outer);
  const double two_pi = 2.0 * std::numbers::pi;
  const int inner = b.add_curve(Curve::arc(Vec2::Zero(), r_inner, 0.0, two_pi));
  const int outer = b.add_curve(Curve::arc(Vec2::Zero(), r_outer, 0.0, two_pi));
  auto radius = [&](int j) { return j == nr ? r_outer : r_inner + j * (r_outer - r_inner) / nr; };
  std::vector<int> ids((nr + 1) * nt);
  for (int j = 0; j <= nr; ++j) {
    for (int l = 0; l < nt; ++l) {
      const double th = two_pi * l / nt;
      ids[j * nt + l] = b.vertex(radius(j) * Vec2(std::cos(th), std::sin(th)));
    }
  }
  auto v = [&](int j, int l) { return ids[j * nt + (l % nt)]; };
  auto arc_s = [&](int curve, int l) { return b.mesh().curves[curve].length() * l / nt; };
  std::vector<EdgeUse> inner_edges(nt), outer_edges(nt);
  for (int l = 0; l < nt; ++l) {
    inner_edges[l] = b.curved_edge(v(0, l), v(0, l + 1), inner, arc_s(inner, l), arc_s(inner, l + 1), BoundaryTag::Dirichlet);
    outer_edges[l] = b.curved_edge(v(nr, l), v(nr, l + 1), outer, arc_s(outer, l), arc_s(outer, l + 1), BoundaryTag::Dirichlet);
  }
  for (int j = 0; j < nr; ++j) {
    for (int l = 0; l < nt; ++l) {
      std::vector<EdgeUse> loop;
      loop.push_back(b.straight_edge(v(j, l), v(j + 1, l), BoundaryTag::Internal));
      if (j + 1 == nr) loop.push_back(outer_edges[l]);
      else loop.push_back(b.straight_edge(v(j + 1, l), v(j + 1, l + 1), BoundaryTag::Internal));
      loop.push_back(b.straight_edge(v(j + 1, l + 1), v(j, l + 1), BoundaryTag::Internal));
      if (j == 0) loop.push_back({inner_edges[l].edge, true});
      else loop.push_back(b.straight_edge(v(j, l + 1), v(j, l), BoundaryTag::Internal));
      b.add_element(std::move(loop), 0);
    }
  }
  Mesh mesh = b.finish();
  mesh.region_names[0] = "domain";
  mesh.materials[0] = Material{};
  return mesh;
}

std::vector<Vec2> read_seed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open seed file " + path);
  in.imbue(std::locale::classic());
  std::vector<Vec2> seeds;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    double x, y;
    if (!(ls >> x >> y)) throw MeshError("malformed seed line: " + line);
    seeds.emplace_back(x, y);
  }
  return seeds;
}

void write_seed_file(const std::string& path, const std::vector<Vec2>& seeds) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write seed file " + path);
  out.imbue(std::locale::classic());
  out << "# " << seeds.size() << " seeds\n" << std::setprecision(17);
  for (const Vec2& s : seeds) out << s.x() << ' ' << s.y() << '\n';
}

Mesh build_cartesian_cut_circle(int n, double radius, const Vec2& center) {
  if (n < 4) throw MeshError("cut_circle needs n >= 4");
  if (!(radius > 0.0) || std::abs(center.x()) + radius >= 1.0 || std::abs(center.y()) + radius >= 1.0) {
    throw MeshError("circle must lie strictly inside (-1,1)^2");
  }
  CutGridSpec spec;
  spec.nx = spec.ny = n;
  spec.interfaces = {{center, radius}};
  spec.left = BoundaryTag::Dirichlet;
  spec.right = BoundaryTag::Absorbing;
  spec.bottom = spec.top = BoundaryTag::Neumann;
  return build_cut_grid(spec);
}

std::string default_data_dir() {
#ifdef CURVEWAVE_DATA_DIR
  return CURVEWAVE_DATA_DIR;
#else
  return "data";
#endif
}

LayeredFaultSpec read_layered_fault_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open fault spec " + path);
  LayeredFaultSpec spec;
  try {
    nlohmann::json j;
    in >> j;
    spec.nx = j.value("nx", 64);
    spec.ny = j.value("ny", 32);
    for (const auto& c : j.at("interfaces")) {
      spec.interfaces.push_back({Vec2(c.at("center").at(0).get<double>(), c.at("center").at(1).get<double>()),
                                 c.at("radius").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw MeshError("fault spec " + path + ": " + e.what());
  }
  return spec;
}

LayeredFaultSpec default_layered_fault_spec() {
  return read_layered_fault_spec(default_data_dir() + "/listric_fault.json");
}

Mesh build_layered_fault(const LayeredFaultSpec& spec) {
  CutGridSpec grid;
  grid.lower = Vec2(-1.0, -0.5);
  grid.upper = Vec2(1.0, 0.5);
  grid.nx = spec.nx;
  grid.ny = spec.ny;
  grid.interfaces = spec.interfaces;
  grid.left = grid.right = grid.bottom = grid.top = BoundaryTag::Absorbing;
  grid.inside_name = "mid";
  return build_cut_grid(grid);
}

}  // namespace curvewave
