#include "ringgan/geometry/mesh.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "ringgan/error.hpp"

namespace ringgan::geometry {
namespace {

static_assert(std::endian::native == std::endian::little, "STL writer assumes a little-endian host");

using Edge = std::pair<std::uint32_t, std::uint32_t>;

double to_f32(double x) { return static_cast<double>(static_cast<float>(x)); }

Vec3 rounded(const Vec3& v) { return Vec3(to_f32(v.x()), to_f32(v.y()), to_f32(v.z())); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, double v) {
  const auto f = static_cast<float>(v);
  put_u32(out, std::bit_cast<std::uint32_t>(f));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[off + i]) << (8 * i);
  return v;
}

float get_f32(std::span<const std::uint8_t> b, std::size_t off) { return std::bit_cast<float>(get_u32(b, off)); }

std::vector<std::uint8_t> export_stl(const TriMesh& mesh) {
  std::vector<std::uint8_t> out;
  out.reserve(84 + 50 * mesh.triangles.size());
  std::string header = "ringgan binary STL";
  header.resize(80, '\0');
  out.insert(out.end(), header.begin(), header.end());
  put_u32(out, static_cast<std::uint32_t>(mesh.triangles.size()));
  for (const auto& tri : mesh.triangles) {
    const Vec3 a = rounded(mesh.vertices[tri[0]]);
    const Vec3 b = rounded(mesh.vertices[tri[1]]);
    const Vec3 c = rounded(mesh.vertices[tri[2]]);
    const Vec3 raw = (b - a).cross(c - a);
    const Vec3 n = raw.norm() > 0.0 ? Vec3(raw.normalized()) : Vec3::Zero();
    for (const Vec3* v : {&n, &a, &b, &c}) {
      put_f32(out, v->x());
      put_f32(out, v->y());
      put_f32(out, v->z());
    }
    out.push_back(0);
    out.push_back(0);
  }
  return out;
}

std::vector<std::uint8_t> export_obj(const TriMesh& mesh) {
  std::ostringstream os;
  os.precision(9);
  os << "# ringgan mesh\n";
  for (const auto& v : mesh.vertices) {
    os << "v " << static_cast<float>(v.x()) << ' ' << static_cast<float>(v.y()) << ' ' << static_cast<float>(v.z())
       << '\n';
  }
  for (const auto& n : mesh.normals) {
    os << "vn " << static_cast<float>(n.x()) << ' ' << static_cast<float>(n.y()) << ' ' << static_cast<float>(n.z())
       << '\n';
  }
  const bool with_normals = mesh.normals.size() == mesh.vertices.size();
  for (const auto& tri : mesh.triangles) {
    os << 'f';
    for (const auto idx : tri) {
      os << ' ' << idx + 1;
      if (with_normals) os << "//" << idx + 1;
    }
    os << '\n';
  }
  const std::string text = os.str();
  return {text.begin(), text.end()};
}

}  // namespace

void TriMesh::append(const TriMesh& other) {
  const auto offset = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  normals.insert(normals.end(), other.normals.begin(), other.normals.end());
  for (auto tri : other.triangles) {
    for (auto& idx : tri) idx += offset;
    triangles.push_back(tri);
  }
}

void validate(const TriMesh& mesh) {
  if (!mesh.normals.empty() && mesh.normals.size() != mesh.vertices.size()) {
    throw ValidationError("TriMesh: normal count does not match vertex count");
  }
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& tri = mesh.triangles[i];
    for (const auto idx : tri) {
      if (idx >= mesh.vertices.size()) throw ValidationError("TriMesh: triangle " + std::to_string(i) + " index out of range");
    }
    const Vec3& a = mesh.vertices[tri[0]];
    const double area = 0.5 * (mesh.vertices[tri[1]] - a).cross(mesh.vertices[tri[2]] - a).norm();
    if (area <= 1e-12) throw ValidationError("TriMesh: triangle " + std::to_string(i) + " is degenerate");
  }
}

bool is_watertight(const TriMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  std::map<Edge, int> uses;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      std::uint32_t a = tri[k];
      std::uint32_t b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++uses[{a, b}];
    }
  }
  for (const auto& [edge, count] : uses) {
    if (count != 2) return false;
  }
  return true;
}

double surface_area(const TriMesh& mesh) {
  double area = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    area += 0.5 * (mesh.vertices[tri[1]] - a).cross(mesh.vertices[tri[2]] - a).norm();
  }
  return area;
}

double signed_volume(const TriMesh& mesh) {
  double volume = 0.0;
  for (const auto& tri : mesh.triangles) {
    volume += mesh.vertices[tri[0]].dot(mesh.vertices[tri[1]].cross(mesh.vertices[tri[2]])) / 6.0;
  }
  return volume;
}

std::vector<std::uint8_t> export_mesh(const TriMesh& mesh, MeshFormat format) {
  if (mesh.empty()) throw ValidationError("export_mesh: mesh has no triangles");
  for (const auto& tri : mesh.triangles) {
    for (const auto idx : tri) {
      if (idx >= mesh.vertices.size()) throw ValidationError("export_mesh: index out of range");
    }
  }
  return format == MeshFormat::kObj ? export_obj(mesh) : export_stl(mesh);
}

TriMesh parse_stl(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 84) throw IoError("parse_stl: shorter than the 84-byte preamble");
  const std::uint32_t count = get_u32(bytes, 80);
  if (bytes.size() != 84 + 50ULL * count) throw IoError("parse_stl: size does not match triangle count");
  TriMesh mesh;
  std::map<std::array<std::uint32_t, 3>, std::uint32_t> weld;
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::size_t base = 84 + 50ULL * t;
    std::array<std::uint32_t, 3> tri{};
    for (int v = 0; v < 3; ++v) {
      const std::size_t off = base + 12 + 12ULL * v;
      const std::array<std::uint32_t, 3> key{get_u32(bytes, off), get_u32(bytes, off + 4), get_u32(bytes, off + 8)};
      auto [it, inserted] = weld.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
      if (inserted) mesh.vertices.emplace_back(get_f32(bytes, off), get_f32(bytes, off + 4), get_f32(bytes, off + 8));
      tri[v] = it->second;
    }
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

TriMesh parse_obj(const std::string& text) {
  TriMesh mesh;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v" || tag == "vn") {
      double x = 0;
      double y = 0;
      double z = 0;
      if (!(ls >> x >> y >> z)) throw IoError("parse_obj: malformed '" + tag + "' line");
      (tag == "v" ? mesh.vertices : mesh.normals).emplace_back(x, y, z);
    } else if (tag == "f") {
      std::array<std::uint32_t, 3> tri{};
      for (auto& idx : tri) {
        std::string token;
        if (!(ls >> token)) throw IoError("parse_obj: face with fewer than 3 vertices");
        const long value = std::stol(token.substr(0, token.find('/')));
        if (value < 1) throw IoError("parse_obj: face index must be positive");
        idx = static_cast<std::uint32_t>(value - 1);
      }
      mesh.triangles.push_back(tri);
    }
  }
  return mesh;
}

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "obj") return MeshFormat::kObj;
  if (name == "stl") return MeshFormat::kStlBinary;
  throw ValidationError("unknown mesh format '" + name + "' (expected stl or obj)");
}

}  // namespace ringgan::geometry
