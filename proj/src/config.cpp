#include "curvewave/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "curvewave/error.hpp"
#include "curvewave/expression.hpp"
#include "curvewave/generators.hpp"
#include "curvewave/mesh_io.hpp"

namespace curvewave {

using nlohmann::json;

const char* to_string(GeometryMode mode) { return mode == GeometryMode::WithGeo ? "withGeo" : "noGeo"; }

GeometryMode geometry_mode_from_string(const std::string& s) {
  if (s == "withGeo") return GeometryMode::WithGeo;
  if (s == "noGeo") return GeometryMode::NoGeo;
  throw ConfigError("unknown geometry mode '" + s + "' (expected withGeo or noGeo)");
}

namespace {

class Checker {
 public:
  explicit Checker(std::string base_dir) : base_(std::move(base_dir)) {}

  void issue(const std::string& path, const std::string& message) { issues_.push_back(path + ": " + message); }

  void allowed(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    std::set<std::string> known(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!known.count(it.key())) issue(path + "." + it.key(), "unknown key");
  }

  template <typename T>
  void read(const json& obj, const std::string& path, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      issue(path + "." + key, "wrong type");
    }
  }

  void positive(double v, const std::string& path) {
    if (!(v > 0.0)) issue(path, "must be positive");
  }

  Vec2 point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      issue(path, "expected [x, y]");
      return Vec2::Zero();
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  std::string resolve(const std::string& p) const {
    if (p.empty()) return p;
    const std::filesystem::path path(p);
    return path.is_absolute() ? p : (std::filesystem::path(base_) / path).lexically_normal().string();
  }

  void expression(const std::string& text, const std::map<std::string, double>& constants, const std::string& path) {
    try {
      Expression::parse(text, constants);
    } catch (const ConfigError& e) {
      issue(path, e.what());
    }
  }

  template <typename E, typename F>
  void parse_enum(const json& obj, const std::string& path, const char* key, E& out, F parse) {
    std::string text;
    if (obj.find(key) == obj.end()) return;
    read(obj, path, key, text);
    try {
      out = parse(text);
    } catch (const ConfigError& e) {
      issue(path + "." + key, e.what());
    }
  }

  void finish(const std::string& what) const {
    if (issues_.empty()) return;
    std::ostringstream msg;
    msg << what << " has " << issues_.size() << " problem(s):";
    for (const auto& i : issues_) msg << "\n  " << i;
    throw ConfigError(msg.str());
  }

 private:
  std::string base_;
  std::vector<std::string> issues_;
};

MeshSpec parse_mesh(const json& j, Checker& c, const std::string& path) {
  MeshSpec m;
  if (!j.is_object()) {
    c.issue(path, "expected an object");
    return m;
  }
  c.allowed(j, path,
            {"generator", "file", "nr", "nt", "r_inner", "r_outer", "seeds", "seed_count", "n", "radius", "center",
             "fault_spec"});
  c.read(j, path, "generator", m.generator);
  if (j.contains("file")) {
    c.read(j, path, "file", m.file);
    m.file = c.resolve(m.file);
    if (!j.contains("generator")) m.generator = "file";
  }
  c.read(j, path, "nr", m.nr);
  c.read(j, path, "nt", m.nt);
  c.read(j, path, "r_inner", m.r_inner);
  c.read(j, path, "r_outer", m.r_outer);
  c.read(j, path, "seeds", m.seeds_file);
  m.seeds_file = c.resolve(m.seeds_file);
  c.read(j, path, "seed_count", m.seed_count);
  c.read(j, path, "n", m.n);
  c.read(j, path, "radius", m.radius);
  if (j.contains("center")) m.center = c.point(j["center"], path + ".center");
  c.read(j, path, "fault_spec", m.fault_spec);
  m.fault_spec = c.resolve(m.fault_spec);

  if (m.generator == "file") {
    if (m.file.empty()) c.issue(path + ".file", "required for generator 'file'");
  } else if (m.generator == "ring_quad" || m.generator == "ring_voronoi") {
    if (!(m.r_inner > 0.0 && m.r_inner < m.r_outer)) c.issue(path, "need 0 < r_inner < r_outer");
    if (m.generator == "ring_quad" && (m.nr < 2 || m.nt < 3)) c.issue(path, "ring_quad needs nr >= 2 and nt >= 3");
    if (m.generator == "ring_voronoi" && m.seeds_file.empty() && m.seed_count < 3)
      c.issue(path, "ring_voronoi needs 'seeds' or 'seed_count' >= 3");
  } else if (m.generator == "cut_circle") {
    if (m.n < 4) c.issue(path + ".n", "must be at least 4");
    c.positive(m.radius, path + ".radius");
  } else if (m.generator != "layered_fault") {
    c.issue(path + ".generator", "unknown generator '" + m.generator + "'");
  }
  return m;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string parent_dir(const std::string& path) {
  const auto p = std::filesystem::path(path).parent_path();
  return p.empty() ? "." : p.string();
}

}  // namespace

Mesh build_mesh(const MeshSpec& spec) {
  if (spec.generator == "file") return read_mesh(spec.file);
  if (spec.generator == "ring_quad") return build_ring_quad(spec.nr, spec.nt, spec.r_inner, spec.r_outer);
  if (spec.generator == "ring_voronoi") {
    const auto seeds = spec.seeds_file.empty() ? ring_seeds(spec.seed_count, spec.r_inner, spec.r_outer)
                                               : read_seed_file(spec.seeds_file);
    return build_ring_voronoi(seeds, spec.r_inner, spec.r_outer);
  }
  if (spec.generator == "cut_circle") return build_cartesian_cut_circle(spec.n, spec.radius, spec.center);
  if (spec.generator == "layered_fault")
    return build_layered_fault(spec.fault_spec.empty() ? default_layered_fault_spec()
                                                       : read_layered_fault_spec(spec.fault_spec));
  throw ConfigError("unknown generator '" + spec.generator + "'");
}

std::string seed_file_path(const std::string& seeds_dir, int count) {
  const std::string dir = seeds_dir.empty() ? default_data_dir() + "/seeds" : seeds_dir;
  return dir + "/ring_" + std::to_string(count) + ".txt";
}

ScenarioConfig parse_scenario(const json& j, const std::string& base_dir) {
  Checker c(base_dir);
  ScenarioConfig s;
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  c.allowed(j, "scenario",
            {"name", "mesh", "geometry", "k", "dt", "T", "startup", "scheme", "constants", "materials", "boundary",
             "source", "initial", "snapshot_stride", "write_snapshots", "probes", "output_dir", "threads"});
  c.read(j, "scenario", "name", s.name);
  if (j.contains("mesh"))
    s.mesh = parse_mesh(j["mesh"], c, "scenario.mesh");
  else
    c.issue("scenario.mesh", "required");
  c.parse_enum(j, "scenario", "geometry", s.geometry, geometry_mode_from_string);
  c.read(j, "scenario", "k", s.k);
  if (s.k < 1 || s.k > 8) c.issue("scenario.k", "must lie in [1, 8]");
  c.read(j, "scenario", "dt", s.dt);
  c.positive(s.dt, "scenario.dt");
  c.read(j, "scenario", "T", s.final_time);
  c.positive(s.final_time, "scenario.T");
  c.parse_enum(j, "scenario", "startup", s.startup, startup_mode_from_string);
  c.parse_enum(j, "scenario", "scheme", s.scheme, step_scheme_from_string);

  if (j.contains("constants")) {
    const json& cj = j["constants"];
    if (!cj.is_object()) c.issue("scenario.constants", "expected an object");
    else
      for (auto it = cj.begin(); it != cj.end(); ++it) {
        if (!it->is_number()) c.issue("scenario.constants." + it.key(), "expected a number");
        else s.constants[it.key()] = it->get<double>();
      }
  }
  if (j.contains("materials")) {
    const json& mj = j["materials"];
    if (!mj.is_object()) c.issue("scenario.materials", "expected an object");
    else
      for (auto it = mj.begin(); it != mj.end(); ++it) {
        const std::string path = "scenario.materials." + it.key();
        if (!it->is_object()) {
          c.issue(path, "expected {rho, mu}");
          continue;
        }
        c.allowed(*it, path, {"rho", "mu"});
        Material m;
        c.read(*it, path, "rho", m.rho);
        c.read(*it, path, "mu", m.mu);
        c.positive(m.rho, path + ".rho");
        c.positive(m.mu, path + ".mu");
        s.materials[it.key()] = m;
      }
  }
  if (j.contains("boundary")) {
    const json& bj = j["boundary"];
    if (!bj.is_object()) {
      c.issue("scenario.boundary", "expected an object");
    } else {
      c.allowed(bj, "scenario.boundary", {"dirichlet", "neumann", "absorbing"});
      c.read(bj, "scenario.boundary", "dirichlet", s.dirichlet);
      for (const char* key : {"neumann", "absorbing"}) {
        std::string text = "0";
        c.read(bj, "scenario.boundary", key, text);
        try {
          if (!Expression::parse(text, s.constants).is_zero())
            c.issue(std::string("scenario.boundary.") + key, "only homogeneous data is supported");
        } catch (const ConfigError& e) {
          c.issue(std::string("scenario.boundary.") + key, e.what());
        }
      }
    }
  }
  c.read(j, "scenario", "source", s.source);
  if (j.contains("initial")) {
    const json& ij = j["initial"];
    if (!ij.is_object()) c.issue("scenario.initial", "expected an object");
    else {
      c.allowed(ij, "scenario.initial", {"p0", "p1"});
      c.read(ij, "scenario.initial", "p0", s.p0);
      c.read(ij, "scenario.initial", "p1", s.p1);
    }
  }
  c.expression(s.dirichlet, s.constants, "scenario.boundary.dirichlet");
  c.expression(s.source, s.constants, "scenario.source");
  c.expression(s.p0, s.constants, "scenario.initial.p0");
  c.expression(s.p1, s.constants, "scenario.initial.p1");

  c.read(j, "scenario", "snapshot_stride", s.snapshot_stride);
  if (s.snapshot_stride < 0) c.issue("scenario.snapshot_stride", "must be non-negative");
  c.read(j, "scenario", "write_snapshots", s.write_snapshots);
  if (j.contains("probes")) {
    const json& pj = j["probes"];
    if (!pj.is_array()) c.issue("scenario.probes", "expected a list of [x, y]");
    else
      for (std::size_t i = 0; i < pj.size(); ++i)
        s.probes.push_back(c.point(pj[i], "scenario.probes[" + std::to_string(i) + "]"));
  }
  c.read(j, "scenario", "output_dir", s.output_dir);
  c.read(j, "scenario", "threads", s.threads);
  if (s.threads < 0) c.issue("scenario.threads", "must be non-negative");
  c.finish("scenario config");
  return s;
}

StudyConfig parse_study(const json& j, const std::string& base_dir) {
  Checker c(base_dir);
  StudyConfig s;
  if (!j.is_object()) throw ConfigError("study: expected a JSON object");
  c.allowed(j, "study",
            {"name", "family", "quad_sizes", "poly_counts", "seeds_dir", "r_inner", "r_outer", "k", "modes", "dt",
             "steps", "startup", "scheme", "tolerances", "output_dir", "threads"});
  c.read(j, "study", "name", s.name);
  c.read(j, "study", "family", s.family);
  if (s.family != "quad" && s.family != "poly") c.issue("study.family", "expected quad or poly");
  if (j.contains("quad_sizes")) {
    s.quad_sizes.clear();
    const json& q = j["quad_sizes"];
    if (!q.is_array()) c.issue("study.quad_sizes", "expected a list of [nr, nt]");
    else
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (!q[i].is_array() || q[i].size() != 2 || !q[i][0].is_number_integer() || !q[i][1].is_number_integer()) {
          c.issue("study.quad_sizes[" + std::to_string(i) + "]", "expected [nr, nt]");
          continue;
        }
        s.quad_sizes.push_back({q[i][0].get<int>(), q[i][1].get<int>()});
      }
  }
  c.read(j, "study", "poly_counts", s.poly_counts);
  c.read(j, "study", "seeds_dir", s.seeds_dir);
  s.seeds_dir = c.resolve(s.seeds_dir);
  c.read(j, "study", "r_inner", s.r_inner);
  c.read(j, "study", "r_outer", s.r_outer);
  if (!(s.r_inner > 0.0 && s.r_inner < s.r_outer)) c.issue("study", "need 0 < r_inner < r_outer");
  c.read(j, "study", "k", s.k);
  if (s.k.empty()) c.issue("study.k", "must not be empty");
  for (int k : s.k)
    if (k < 1 || k > 8) c.issue("study.k", "entries must lie in [1, 8]");
  if (j.contains("modes")) {
    std::vector<std::string> names;
    c.read(j, "study", "modes", names);
    s.modes.clear();
    for (const auto& n : names) {
      try {
        s.modes.push_back(geometry_mode_from_string(n));
      } catch (const ConfigError& e) {
        c.issue("study.modes", e.what());
      }
    }
    if (s.modes.empty()) c.issue("study.modes", "must not be empty");
  }
  c.read(j, "study", "dt", s.dt);
  c.positive(s.dt, "study.dt");
  c.read(j, "study", "steps", s.steps);
  if (s.steps < 1) c.issue("study.steps", "must be at least 1");
  c.parse_enum(j, "study", "startup", s.startup, startup_mode_from_string);
  c.parse_enum(j, "study", "scheme", s.scheme, step_scheme_from_string);
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    c.allowed(t, "study.tolerances", {"slope", "saturation_slope", "saturation", "fit_window"});
    c.read(t, "study.tolerances", "slope", s.slope_tolerance);
    c.read(t, "study.tolerances", "saturation_slope", s.saturation_slope);
    c.read(t, "study.tolerances", "saturation", s.saturation_tolerance);
    c.read(t, "study.tolerances", "fit_window", s.fit_window);
  }
  const int members = s.family == "quad" ? static_cast<int>(s.quad_sizes.size()) : static_cast<int>(s.poly_counts.size());
  if (members < 3) c.issue("study", "a family needs at least 3 meshes");
  if (s.fit_window < 2 || s.fit_window > members) c.issue("study.tolerances.fit_window", "must lie in [2, family size]");
  c.read(j, "study", "output_dir", s.output_dir);
  c.read(j, "study", "threads", s.threads);
  if (s.threads < 0) c.issue("study.threads", "must be non-negative");
  c.finish("study config");
  return s;
}

ScenarioConfig load_scenario(const std::string& path) { return parse_scenario(read_json(path), parent_dir(path)); }

StudyConfig load_study(const std::string& path) { return parse_study(read_json(path), parent_dir(path)); }

}  // namespace curvewave
