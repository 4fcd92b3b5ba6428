#include "boussinesq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bouss {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary_edges)) {
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int v : triangles_[t]) {
      if (v < 0 || v >= nv) {
        throw MeshError("triangle " + std::to_string(t) + ": vertex index " + std::to_string(v) +
                        " out of range");
      }
    }
    if (!(signed_area(t) > 0.0)) {
      throw MeshError("triangle " + std::to_string(t) +
                      ": non-positive signed area (inverted or degenerate)");
    }
  }

  std::unordered_map<std::uint64_t, int> index;
  index.reserve(triangles_.size() * 2);
  std::vector<int> owners;
  tri_edges_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int le = 0; le < 3; ++le) {
      const int a = tri[le];
      const int b = tri[(le + 1) % 3];
      auto [it, inserted] = index.try_emplace(edge_key(a, b), static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({std::min(a, b), std::max(a, b)});
        owners.push_back(0);
      }
      const int e = it->second;
      if (++owners[e] > 2) {
        throw MeshError("triangle " + std::to_string(t) + ": non-manifold edge (" +
                        std::to_string(a) + "," + std::to_string(b) + ")");
      }
      tri_edges_[t][le] = e;
    }
  }

  edge_tags_.assign(edges_.size(), -1);
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    const auto& be = boundary_[i];
    auto it = index.find(edge_key(be.a, be.b));
    if (it == index.end()) {
      throw MeshError("boundary edge " + std::to_string(i) + ": (" + std::to_string(be.a) + "," +
                      std::to_string(be.b) + ") is not an edge of any triangle");
    }
    const int e = it->second;
    if (owners[e] != 1) {
      throw MeshError("boundary edge " + std::to_string(i) + ": edge is interior");
    }
    if (edge_tags_[e] != -1) {
      throw MeshError("boundary edge " + std::to_string(i) + ": listed twice");
    }
    edge_tags_[e] = be.tag;
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (owners[e] == 1 && edge_tags_[e] == -1) {
      throw MeshError("edge (" + std::to_string(edges_[e][0]) + "," + std::to_string(edges_[e][1]) +
                      ") lies on the boundary but carries no tag");
    }
  }
}

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += signed_area(t);
  return sum;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (const auto& e : edges_) {
    const Point& a = vertices_[e[0]];
    const Point& b = vertices_[e[1]];
    h = std::max(h, std::hypot(b.x - a.x, b.y - a.y));
  }
  return h;
}

std::vector<int> Mesh::tags() const {
  std::set<int> s;
  for (const auto& be : boundary_) s.insert(be.tag);
  return {s.begin(), s.end()};
}

std::vector<int> Mesh::boundary_vertices() const {
  std::set<int> s;
  for (const auto& be : boundary_) {
    s.insert(be.a);
    s.insert(be.b);
  }
  return {s.begin(), s.end()};
}

Mesh generate_rectangle_mesh(double lx, double ly, int nx, int ny) {
  if (nx < 1 || ny < 1) throw MeshError("rectangle mesh needs at least one cell per side");
  if (!(lx > 0.0) || !(ly > 0.0)) throw MeshError("rectangle mesh needs positive side lengths");

  const int stride = nx + 1;
  auto id = [stride](int i, int j) { return i + j * stride; };

  std::vector<Point> verts;
  verts.reserve(static_cast<std::size_t>(stride) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Exact endpoints so the boundary sits at 0 and l.
      const double x = (i == nx) ? lx : lx * i / nx;
      const double y = (j == ny) ? ly : ly * j / ny;
      verts.push_back({x, y});
    }
  }

  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      tris.push_back({v00, v10, v11});
      tris.push_back({v00, v11, v01});
    }
  }

  std::vector<BoundaryEdge> bnd;
  bnd.reserve(2 * static_cast<std::size_t>(nx + ny));
  for (int i = 0; i < nx; ++i) bnd.push_back({id(i, 0), id(i + 1, 0), kTagBottom});
  for (int j = 0; j < ny; ++j) bnd.push_back({id(nx, j), id(nx, j + 1), kTagRight});
  for (int i = nx; i > 0; --i) bnd.push_back({id(i, ny), id(i - 1, ny), kTagTop});
  for (int j = ny; j > 0; --j) bnd.push_back({id(0, j), id(0, j - 1), kTagLeft});

  return Mesh(std::move(verts), std::move(tris), std::move(bnd));
}

Mesh generate_unit_square_mesh(int n) {
  if (n < 1) throw MeshError("unit square mesh needs n >= 1, got " + std::to_string(n));
  return generate_rectangle_mesh(1.0, 1.0, n, n);
}

Mesh barycentric_refine(const Mesh& mesh) {
  std::vector<Point> verts = mesh.vertices();
  const int nv = static_cast<int>(verts.size());
  std::vector<std::array<int, 3>> tris;
  tris.reserve(3 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point& a = verts[tri[0]];
    const Point& b = verts[tri[1]];
    const Point& c = verts[tri[2]];
    verts.push_back({(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0});
    const int m = nv + static_cast<int>(t);
    tris.push_back({tri[0], tri[1], m});
    tris.push_back({tri[1], tri[2], m});
    tris.push_back({tri[2], tri[0], m});
  }
  return Mesh(std::move(verts), std::move(tris), mesh.boundary_edges());
}

namespace {

// Line reader that skips blanks and '#' comments and tracks line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return std::istringstream(line);
    }
    throw MeshError("line " + std::to_string(lineno_ + 1) + ": unexpected end of file, expected " +
                    what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw MeshError("line " + std::to_string(lineno_) + ": " + msg);
  }

  template <typename... Ts>
  void read(std::istringstream& ss, const char* what, Ts&... out) {
    if (!((ss >> out) && ...)) fail(std::string("malformed ") + what);
    std::string rest;
    if (ss >> rest) fail(std::string("trailing data after ") + what);
  }

 private:
  std::istream& in_;
  int lineno_ = 0;
};

Mesh parse_stream(std::istream& in) {
  LineReader reader(in);
  long long nv = 0, nt = 0, nb = 0;
  {
    auto ss = reader.next("header");
    reader.read(ss, "header 'NV NT NB'", nv, nt, nb);
    if (nv < 0 || nt < 0 || nb < 0) reader.fail("negative count in header");
  }
  std::vector<Point> verts(static_cast<std::size_t>(nv));
  for (auto& p : verts) {
    auto ss = reader.next("vertex");
    reader.read(ss, "vertex 'x y'", p.x, p.y);
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) reader.fail("non-finite coordinate");
  }
  std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(nt));
  for (auto& t : tris) {
    auto ss = reader.next("triangle");
    reader.read(ss, "triangle 'i j k'", t[0], t[1], t[2]);
  }
  std::vector<BoundaryEdge> bnd(static_cast<std::size_t>(nb));
  for (auto& be : bnd) {
    auto ss = reader.next("boundary edge");
    reader.read(ss, "boundary edge 'i j tag'", be.a, be.b, be.tag);
    if (be.a < 0 || be.a >= nv || be.b < 0 || be.b >= nv) reader.fail("boundary vertex out of range");
  }
  return Mesh(std::move(verts), std::move(tris), std::move(bnd));
}

}  // namespace

Mesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  return parse_stream(in);
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshIoError("cannot open mesh file " + path.string());
  try {
    return parse_stream(in);
  } catch (const MeshError& e) {
    throw MeshError(path.string() + ": " + e.what());
  }
}

std::string format_mesh(const Mesh& mesh) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "# NV NT NB\n";
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << mesh.boundary_edges().size()
      << '\n';
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& be : mesh.boundary_edges()) out << be.a << ' ' << be.b << ' ' << be.tag << '\n';
  return out.str();
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshIoError("cannot write mesh file " + path.string());
  out << format_mesh(mesh);
  if (!out) throw MeshIoError("write failed for mesh file " + path.string());
}

}  // namespace bouss
