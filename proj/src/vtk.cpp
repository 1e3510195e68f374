#include "fluxls/vtk.hpp"

#include <fstream>
#include <stdexcept>

#include "fluxls/number_format.hpp"

namespace fluxls {

void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const double> u, std::span<const Vec2> sigma) {
  if (u.size() != static_cast<std::size_t>(mesh.n_triangles()) || sigma.size() != u.size()) {
    throw std::invalid_argument("write_vtk: cell data size does not match the mesh");
  }
  out << "# vtk DataFile Version 3.0\nfluxls solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices()) out << format_double(v.x) << ' ' << format_double(v.y) << " 0\n";
  out << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
  for (const auto& t : mesh.triangles()) {
    out << "3 " << t.vertices[0] << ' ' << t.vertices[1] << ' ' << t.vertices[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.n_triangles() << '\n';
  for (Index t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
  out << "CELL_DATA " << mesh.n_triangles() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
  for (double v : u) out << format_double(v) << '\n';
  out << "VECTORS sigma_avg double\n";
  for (const auto& s : sigma) out << format_double(s.x) << ' ' << format_double(s.y) << " 0\n";
}

void write_vtk(const std::string& path, const Mesh& mesh, std::span<const double> u, std::span<const Vec2> sigma) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_vtk(out, mesh, u, sigma);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace fluxls
