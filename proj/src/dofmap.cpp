#include "fluxls/spaces.hpp"

namespace fluxls {

DofMap make_dofmap(const Mesh& mesh, SpaceKind space) {
  DofMap map;
  map.space = space;
  map.local_size = local_dimension(space);
  const auto nt = static_cast<std::size_t>(mesh.n_triangles());
  map.cell_dofs.resize(nt * static_cast<std::size_t>(map.local_size));
  map.cell_signs.assign(map.cell_dofs.size(), 1);

  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(map.local_size);
    switch (space) {
      case SpaceKind::RT0:
        for (std::size_t i = 0; i < 3; ++i) {
          map.cell_dofs[base + i] = tri.edges[i];
          map.cell_signs[base + i] = tri.edge_signs[i];
        }
        break;
      case SpaceKind::RT1:
        for (std::size_t i = 0; i < 3; ++i) {
          map.cell_dofs[base + 2 * i] = 2 * tri.edges[i];
          map.cell_dofs[base + 2 * i + 1] = 2 * tri.edges[i] + 1;
          map.cell_signs[base + 2 * i] = tri.edge_signs[i];
          map.cell_signs[base + 2 * i + 1] = tri.edge_signs[i] * tri.edge_orientation[i];
        }
        map.cell_dofs[base + 6] = 2 * mesh.n_edges() + 2 * t;
        map.cell_dofs[base + 7] = 2 * mesh.n_edges() + 2 * t + 1;
        break;
      case SpaceKind::P0:
        map.cell_dofs[base] = t;
        break;
      case SpaceKind::P1dg:
        for (std::size_t i = 0; i < 3; ++i) map.cell_dofs[base + i] = 3 * t + static_cast<Index>(i);
        break;
      case SpaceKind::P1c:
        for (std::size_t i = 0; i < 3; ++i) map.cell_dofs[base + i] = tri.vertices[i];
        break;
    }
  }

  switch (space) {
    case SpaceKind::RT0: map.n_global = mesh.n_edges(); break;
    case SpaceKind::RT1: map.n_global = 2 * mesh.n_edges() + 2 * mesh.n_triangles(); break;
    case SpaceKind::P0: map.n_global = mesh.n_triangles(); break;
    case SpaceKind::P1dg: map.n_global = 3 * mesh.n_triangles(); break;
    case SpaceKind::P1c: map.n_global = mesh.n_vertices(); break;
  }

  if (is_flux_space(space)) {
    const int per_edge = space == SpaceKind::RT0 ? 1 : 2;
    for (Index e = 0; e < mesh.n_edges(); ++e) {
      if (mesh.edge(e).boundary_class != BoundaryClass::inflow) continue;
      for (int j = 0; j < per_edge; ++j) map.inflow_dofs.push_back(per_edge * e + j);
    }
  }
  return map;
}

}  // namespace fluxls
