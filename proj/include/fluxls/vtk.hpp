#pragma once

#include <ostream>
#include <span>
#include <string>

#include "fluxls/mesh.hpp"

namespace fluxls {

/// Legacy-VTK ASCII unstructured grid with cell scalar u and cell vector
/// sigma_avg.
void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const double> u, std::span<const Vec2> sigma);
/// Throws std::runtime_error when the file cannot be written.
void write_vtk(const std::string& path, const Mesh& mesh, std::span<const double> u, std::span<const Vec2> sigma);

}  // namespace fluxls
