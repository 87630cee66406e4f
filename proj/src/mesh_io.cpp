#include "curvewave/mesh_io.hpp"

#include <fstream>
#include <locale>
#include <sstream>

#include "curvewave/error.hpp"

namespace curvewave {

namespace {

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next non-empty, non-comment line as a classic-locale stream.
  std::istringstream& line() {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_no_;
      const auto first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos || text[first] == '#') continue;
      current_.clear();
      current_.str(text);
      current_.imbue(std::locale::classic());
      return current_;
    }
    fail("unexpected end of file");
  }

  template <typename T>
  T get(std::istringstream& s, const char* what) {
    T v{};
    if (!(s >> v)) fail(std::string("expected ") + what);
    return v;
  }

  int section(const std::string& name) {
    auto& s = line();
    const std::string word = get<std::string>(s, "section name");
    if (word != name) fail("expected section " + name + ", found " + word);
    const int n = get<int>(s, "section count");
    if (n < 0) fail("negative count in section " + name);
    return n;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw MeshError("mesh file line " + std::to_string(line_no_) + ": " + message);
  }

 private:
  std::istream& in_;
  std::istringstream current_;
  int line_no_ = 0;
};

void check_id(Reader& r, int id, int expected) {
  if (id != expected) r.fail("ids must be consecutive from 0, expected " + std::to_string(expected));
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(17);
  s << "curvemesh v1\n";
  s << "CURVES " << mesh.curves.size() << "\n";
  for (std::size_t i = 0; i < mesh.curves.size(); ++i) {
    const Curve& c = mesh.curves[i];
    s << i << ' ';
    if (const auto* seg = c.as_segment()) {
      s << "segment " << seg->a.x() << ' ' << seg->a.y() << ' ' << seg->b.x() << ' ' << seg->b.y();
    } else if (const auto* arc = c.as_arc()) {
      s << "arc " << arc->center.x() << ' ' << arc->center.y() << ' ' << arc->radius << ' ' << arc->theta0 << ' '
        << arc->theta1;
    } else {
      const auto* sm = c.as_sampled();
      s << "sampled " << sm->params.size();
      for (std::size_t j = 0; j < sm->params.size(); ++j)
        s << ' ' << sm->params[j] << ' ' << sm->points[j].x() << ' ' << sm->points[j].y();
    }
    s << '\n';
  }
  s << "VERTICES " << mesh.vertices.size() << "\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    s << i << ' ' << mesh.vertices[i].x() << ' ' << mesh.vertices[i].y() << '\n';
  s << "EDGES " << mesh.edges.size() << "\n";
  for (std::size_t i = 0; i < mesh.edges.size(); ++i) {
    const Edge& e = mesh.edges[i];
    s << i << ' ' << e.v0 << ' ' << e.v1 << ' ' << e.curve << ' ' << e.origin_curve << ' ' << e.s0 << ' ' << e.s1
      << ' ' << to_string(e.tag) << '\n';
  }
  s << "ELEMENTS " << mesh.elements.size() << "\n";
  for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
    const Element& el = mesh.elements[i];
    s << i << ' ' << el.loop.size();
    for (const EdgeUse& u : el.loop) s << ' ' << (u.reversed ? -(u.edge + 1) : u.edge + 1);
    s << '\n';
  }
  s << "REGIONS " << mesh.elements.size() << "\n";
  for (std::size_t i = 0; i < mesh.elements.size(); ++i) s << i << ' ' << mesh.elements[i].region << '\n';
  s << "MATERIALS " << mesh.materials.size() << "\n";
  for (const auto& [region, mat] : mesh.materials) {
    auto name = mesh.region_names.find(region);
    s << region << ' ' << mat.rho << ' ' << mat.mu << ' '
      << (name == mesh.region_names.end() ? "region" + std::to_string(region) : name->second) << '\n';
  }
  s << "END\n";
  out << s.str();
}

void write_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open " + path + " for writing");
  write_mesh(out, mesh);
  if (!out) throw MeshError("failed writing " + path);
}

Mesh read_mesh(std::istream& in) {
  Reader r(in);
  {
    auto& s = r.line();
    const auto magic = r.get<std::string>(s, "header");
    const auto version = r.get<std::string>(s, "version");
    if (magic != "curvemesh" || version != "v1") r.fail("not a curvemesh v1 file");
  }
  Mesh mesh;
  const int nc = r.section("CURVES");
  for (int i = 0; i < nc; ++i) {
    auto& s = r.line();
    check_id(r, r.get<int>(s, "curve id"), i);
    const auto kind = r.get<std::string>(s, "curve kind");
    if (kind == "segment") {
      const double ax = r.get<double>(s, "ax"), ay = r.get<double>(s, "ay");
      const double bx = r.get<double>(s, "bx"), by = r.get<double>(s, "by");
      mesh.curves.push_back(Curve::segment({ax, ay}, {bx, by}));
    } else if (kind == "arc") {
      const double cx = r.get<double>(s, "cx"), cy = r.get<double>(s, "cy");
      const double rad = r.get<double>(s, "radius");
      const double t0 = r.get<double>(s, "theta0"), t1 = r.get<double>(s, "theta1");
      mesh.curves.push_back(Curve::arc({cx, cy}, rad, t0, t1));
    } else if (kind == "sampled") {
      const int m = r.get<int>(s, "sample count");
      std::vector<double> params(m);
      std::vector<Vec2> points(m);
      for (int j = 0; j < m; ++j) {
        params[j] = r.get<double>(s, "parameter");
        points[j].x() = r.get<double>(s, "x");
        points[j].y() = r.get<double>(s, "y");
      }
      mesh.curves.push_back(Curve::sampled(std::move(params), std::move(points)));
    } else {
      r.fail("unknown curve kind " + kind);
    }
  }
  const int nv = r.section("VERTICES");
  for (int i = 0; i < nv; ++i) {
    auto& s = r.line();
    check_id(r, r.get<int>(s, "vertex id"), i);
    const double x = r.get<double>(s, "x"), y = r.get<double>(s, "y");
    mesh.vertices.emplace_back(x, y);
  }
  const int ne = r.section("EDGES");
  for (int i = 0; i < ne; ++i) {
    auto& s = r.line();
    check_id(r, r.get<int>(s, "edge id"), i);
    Edge e;
    e.v0 = r.get<int>(s, "v0");
    e.v1 = r.get<int>(s, "v1");
    e.curve = r.get<int>(s, "curve");
    e.origin_curve = r.get<int>(s, "origin");
    e.s0 = r.get<double>(s, "s0");
    e.s1 = r.get<double>(s, "s1");
    const auto tag = r.get<std::string>(s, "tag");
    try {
      e.tag = boundary_tag_from_string(tag);
    } catch (const Error& err) {
      r.fail(err.what());
    }
    mesh.edges.push_back(e);
  }
  const int nel = r.section("ELEMENTS");
  for (int i = 0; i < nel; ++i) {
    auto& s = r.line();
    check_id(r, r.get<int>(s, "element id"), i);
    const int count = r.get<int>(s, "loop size");
    Element el;
    for (int j = 0; j < count; ++j) {
      const int code = r.get<int>(s, "signed edge");
      if (code == 0 || std::abs(code) > ne) r.fail("edge reference out of range");
      el.loop.push_back({std::abs(code) - 1, code < 0});
    }
    mesh.elements.push_back(std::move(el));
  }
  const int nreg = r.section("REGIONS");
  if (nreg != nel) r.fail("REGIONS must list every element");
  for (int i = 0; i < nreg; ++i) {
    auto& s = r.line();
    const int id = r.get<int>(s, "element id");
    check_id(r, id, i);
    mesh.elements[i].region = r.get<int>(s, "region");
  }
  const int nm = r.section("MATERIALS");
  for (int i = 0; i < nm; ++i) {
    auto& s = r.line();
    const int region = r.get<int>(s, "region");
    Material m;
    m.rho = r.get<double>(s, "rho");
    m.mu = r.get<double>(s, "mu");
    if (!(m.rho > 0.0) || !(m.mu > 0.0)) r.fail("material coefficients must be positive");
    mesh.materials[region] = m;
    mesh.region_names[region] = r.get<std::string>(s, "region name");
  }
  {
    auto& s = r.line();
    if (r.get<std::string>(s, "END") != "END") r.fail("expected END");
  }
  mesh.finalize();
  return mesh;
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open " + path);
  return read_mesh(in);
}

}  // namespace curvewave
