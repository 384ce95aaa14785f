#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ringgan/geometry/ring.hpp"

namespace ringgan::geometry {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;  // per vertex, unit length
  std::vector<std::array<std::uint32_t, 3>> triangles;

  bool empty() const { return triangles.empty(); }
  /// Appends `other`, offsetting its indices.
  void append(const TriMesh& other);
};

/// Throws ValidationError on out-of-range indices, mismatched normal count,
/// or a triangle with area at or below 1e-12.
void validate(const TriMesh& mesh);

/// True when every undirected edge is used by exactly two triangles.
bool is_watertight(const TriMesh& mesh);
double surface_area(const TriMesh& mesh);
/// Signed enclosed volume (positive for outward-facing winding).
double signed_volume(const TriMesh& mesh);

enum class MeshFormat { kObj, kStlBinary };

/// OBJ: `v`, `vn` and `f a//a b//b c//c` lines with 1-based indices.
/// STL: 80-byte header, uint32 count, 50 bytes per triangle, little endian;
/// facet normals are computed from the float32-rounded vertices.
std::vector<std::uint8_t> export_mesh(const TriMesh& mesh, MeshFormat format);

/// Binary STL reader; welds bit-identical vertex positions.
TriMesh parse_stl(std::span<const std::uint8_t> bytes);
/// Minimal OBJ reader for the subset export_mesh writes (plus plain `f a b c`).
TriMesh parse_obj(const std::string& text);

MeshFormat parse_mesh_format(const std::string& name);

}  // namespace ringgan::geometry
