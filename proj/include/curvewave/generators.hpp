#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvewave/mesh.hpp"

namespace curvewave {

// nr x nt annular sectors; inner and outer sides are exact arcs tagged
// Dirichlet, radial and circumferential interior sides are chords.
Mesh build_ring_quad(int nr, int nt, double r_inner, double r_outer);

// Bounded Voronoi cells of the seeds clipped to the annulus; clipped
// boundary pieces become exact arcs tagged Dirichlet.
Mesh build_ring_voronoi(const std::vector<Vec2>& seeds, double r_inner, double r_outer);

// Deterministic seeds: area-uniform samples from a fixed-seed generator,
// then `lloyd_iterations` Lloyd steps on the annulus.
std::vector<Vec2> ring_seeds(int count, double r_inner, double r_outer, std::uint64_t seed = 20240607,
                             int lloyd_iterations = 3);

std::vector<Vec2> read_seed_file(const std::string& path);
void write_seed_file(const std::string& path, const std::vector<Vec2>& seeds);

struct CircleInterface {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

struct CutGridSpec {
  Vec2 lower{-1.0, -1.0};
  Vec2 upper{1.0, 1.0};
  int nx = 4;
  int ny = 4;
  std::vector<CircleInterface> interfaces;
  BoundaryTag left = BoundaryTag::Neumann;
  BoundaryTag right = BoundaryTag::Neumann;
  BoundaryTag bottom = BoundaryTag::Neumann;
  BoundaryTag top = BoundaryTag::Neumann;
  // Region labels by parity of the number of circles containing a point.
  std::string outside_name = "background";
  std::string inside_name = "inclusion";
};

// Cartesian grid whose cells crossed by a circle are split into two parts
// sharing one exact arc edge (tagged Interface).
Mesh build_cut_grid(const CutGridSpec& spec);

// n x n grid on (-1,1)^2 cut by one circle; left Dirichlet, right
// Absorbing, top and bottom Neumann.
Mesh build_cartesian_cut_circle(int n, double radius, const Vec2& center);

struct LayeredFaultSpec {
  int nx = 64;
  int ny = 32;
  std::vector<CircleInterface> interfaces;
};

// Interface arcs reconstructed for the listric-fault scenario.
LayeredFaultSpec default_layered_fault_spec();
LayeredFaultSpec read_layered_fault_spec(const std::string& path);

// (-1,1) x (-0.5,0.5) grid, all outer edges Absorbing, region "mid"
// between the interfaces.
Mesh build_layered_fault(const LayeredFaultSpec& spec);

std::string default_data_dir();

}  // namespace curvewave
