#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "emfd/dualmesh.hpp"

namespace emfd {

/// Reads {"vertices": [[x,y],...], "triangles": [[i,j,k],...]} and builds the
/// dual pair. Derived keys written by write_mesh_json are accepted and
/// ignored; anything else is rejected.
DualMesh read_mesh_json(std::istream& in);
DualMesh read_mesh_json_file(const std::string& path);

/// Writes the primal arrays plus derived dual data (circumcenters, dual cell
/// areas). The output is importable by read_mesh_json.
void write_mesh_json(const DualMesh& mesh, std::ostream& out);
void write_mesh_json_file(const DualMesh& mesh, const std::string& path);

/// Legacy ASCII VTK unstructured grid with optional per-vertex and
/// per-triangle scalar fields.
void write_vtk(const DualMesh& mesh, std::ostream& out,
               const std::map<std::string, std::vector<double>>& point_data = {},
               const std::map<std::string, std::vector<double>>& cell_data = {});
void write_vtk_file(const DualMesh& mesh, const std::string& path,
                    const std::map<std::string, std::vector<double>>& point_data = {},
                    const std::map<std::string, std::vector<double>>& cell_data = {});

}  // namespace emfd
