#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace bouss {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int tag = 0;
};

/// Raised for malformed mesh files and topology violations.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mesh file could not be opened or written.
class MeshIoError : public MeshError {
 public:
  using MeshError::MeshError;
};

/// Conforming triangle mesh with tagged boundary edges.
///
/// Construction validates every invariant: positive signed area per
/// triangle, at most two triangles per edge, and a boundary edge list that
/// matches the set of edges owned by exactly one triangle. Instances are
/// immutable afterwards, so they can be shared read-only across threads.
///
/// Derived topology is built once: the unique undirected edges, the three
/// edges of each triangle (local edge 0 = (v0,v1), 1 = (v1,v2), 2 = (v2,v0)),
/// and the tag of every boundary edge.
class Mesh {
 public:
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<BoundaryEdge> boundary_edges);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  /// Unique undirected edges, stored as (low, high) vertex pairs.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& triangle_edges() const { return tri_edges_; }
  /// Boundary tag of each edge, or -1 for interior edges.
  const std::vector<int>& edge_tags() const { return edge_tags_; }

  double signed_area(std::size_t t) const;
  double total_area() const;
  /// Largest triangle diameter (longest edge).
  double max_diameter() const;
  /// Sorted, distinct boundary tags.
  std::vector<int> tags() const;
  /// Sorted vertex indices touching the boundary.
  std::vector<int> boundary_vertices() const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<int> edge_tags_;
};

// Side tags used by the structured generators.
inline constexpr int kTagBottom = 1;
inline constexpr int kTagRight = 2;
inline constexpr int kTagTop = 3;
inline constexpr int kTagLeft = 4;

/// Uniform grid of nx-by-ny cells on [0,lx]x[0,ly], each cell cut along its
/// (0,0)-(1,1) diagonal. Sides are tagged bottom/right/top/left = 1/2/3/4.
Mesh generate_rectangle_mesh(double lx, double ly, int nx, int ny);

/// 2n^2 right triangles on the unit square.
Mesh generate_unit_square_mesh(int n);

/// Splits every triangle into three by its barycenter. New vertex for
/// triangle t has index num_vertices() + t; boundary edges are unchanged.
Mesh barycentric_refine(const Mesh& mesh);

/// Reads the native ASCII format:
///   NV NT NB / NV lines "x y" / NT lines "i j k" / NB lines "i j tag".
/// Lines starting with '#' are comments.
Mesh load_mesh(const std::filesystem::path& path);
Mesh parse_mesh(const std::string& text);

/// Writes the native format with 17 significant digits, so a read-back
/// reproduces coordinates bit for bit.
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);
std::string format_mesh(const Mesh& mesh);

}  // namespace bouss
