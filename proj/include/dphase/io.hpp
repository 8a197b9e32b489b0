#pragma once

#include <string>
#include <vector>

#include "dphase/fem.hpp"
#include "dphase/mesh.hpp"

namespace dp {

/// %.17g formatting; doubles written this way parse back to identical bits.
std::string format_double(double v);

/// Legacy ASCII VTK unstructured grid carrying one point scalar field.
void write_vtk_scalar(const std::string& path, const Mesh& mesh, const FemFunction& u,
                      const std::string& field_name);

/// Point scalar field of a file produced by write_vtk_scalar; errors name the
/// missing section.
FemFunction read_vtk_scalar(const std::string& path);

/// Header line followed by preformatted rows.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dp
