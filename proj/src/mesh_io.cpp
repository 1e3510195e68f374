#include <charconv>
#include <istream>
#include <ostream>

#include "fluxls/mesh.hpp"
#include "fluxls/number_format.hpp"

namespace fluxls {

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "VERTICES " << mesh.n_vertices() << "\n";
  out << "TRIANGLES " << mesh.n_triangles() << "\n";
  for (const auto& p : mesh.vertices()) out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  for (const auto& t : mesh.triangles()) {
    out << t.vertices[0] << ' ' << t.vertices[1] << ' ' << t.vertices[2] << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  std::string tag_v, tag_t;
  long long nv = -1, nt = -1;
  if (!(in >> tag_v >> nv >> tag_t >> nt) || tag_v != "VERTICES" || tag_t != "TRIANGLES" || nv < 0 ||
      nt < 0) {
    throw MeshError("mesh file: expected header 'VERTICES n' / 'TRIANGLES m'");
  }
  std::vector<Vec2> pts(static_cast<std::size_t>(nv));
  for (auto& p : pts) {
    if (!(in >> p.x >> p.y)) throw MeshError("mesh file: truncated vertex list");
  }
  std::vector<std::array<Index, 3>> tris(static_cast<std::size_t>(nt));
  for (auto& t : tris) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw MeshError("mesh file: truncated triangle list");
  }
  return build_mesh(pts, tris);
}

}  // namespace fluxls
