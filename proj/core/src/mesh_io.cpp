#include "emfd/mesh_io.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "emfd/errors.hpp"

namespace emfd {

using nlohmann::json;

DualMesh read_mesh_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidMesh(std::string("mesh file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidMesh("mesh file must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "vertices" && key != "triangles" && key != "dual_vertices" && key != "dual_cell_area")
      throw InvalidMesh("unknown key in mesh file: \"" + key + "\"");
  }
  if (!j.contains("vertices") || !j.contains("triangles"))
    throw InvalidMesh("mesh file needs \"vertices\" and \"triangles\"");

  std::vector<Vec2> vertices;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw InvalidMesh("each vertex must be a pair of numbers");
    vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  std::vector<std::array<int, 3>> triangles;
  for (const auto& t : j.at("triangles")) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
        !t[2].is_number_integer())
      throw InvalidMesh("each triangle must be a triple of vertex indices");
    triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
  }
  return import_mesh(vertices, triangles);
}

DualMesh read_mesh_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidMesh("cannot open mesh file: " + path);
  return read_mesh_json(in);
}

void write_mesh_json(const DualMesh& mesh, std::ostream& out) {
  json j;
  json verts = json::array();
  for (const Vec2& v : mesh.primal.vertices) verts.push_back({v.x, v.y});
  json tris = json::array();
  for (const auto& t : mesh.primal.triangles) tris.push_back({t[0], t[1], t[2]});
  json duals = json::array();
  for (const Vec2& c : mesh.dual_vertices) duals.push_back({c.x, c.y});
  j["vertices"] = std::move(verts);
  j["triangles"] = std::move(tris);
  j["dual_vertices"] = std::move(duals);
  j["dual_cell_area"] = mesh.metrics.dual_cell_area;
  out << j.dump(1) << "\n";
}

void write_mesh_json_file(const DualMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file: " + path);
  write_mesh_json(mesh, out);
}

void write_vtk(const DualMesh& mesh, std::ostream& out,
               const std::map<std::string, std::vector<double>>& point_data,
               const std::map<std::string, std::vector<double>>& cell_data) {
  const PrimalMesh& m = mesh.primal;
  out << "# vtk DataFile Version 3.0\n";
  out << "emfd mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << m.n_vertices() << " double\n";
  char buf[96];
  for (const Vec2& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", v.x, v.y);
    out << buf;
  }
  out << "CELLS " << m.n_triangles() << " " << 4 * m.n_triangles() << "\n";
  for (const auto& t : m.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << m.n_triangles() << "\n";
  for (int t = 0; t < m.n_triangles(); ++t) out << "5\n";

  auto dump_fields = [&](const std::map<std::string, std::vector<double>>& fields, std::size_t expected,
                         const char* what) {
    for (const auto& [name, values] : fields) {
      if (values.size() != expected)
        throw Error(std::string(what) + " field \"" + name + "\" has wrong length");
      out << "SCALARS " << name << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
      }
    }
  };
  if (!point_data.empty()) {
    out << "POINT_DATA " << m.n_vertices() << "\n";
    dump_fields(point_data, static_cast<std::size_t>(m.n_vertices()), "point");
  }
  if (!cell_data.empty()) {
    out << "CELL_DATA " << m.n_triangles() << "\n";
    dump_fields(cell_data, static_cast<std::size_t>(m.n_triangles()), "cell");
  }
}

void write_vtk_file(const DualMesh& mesh, const std::string& path,
                    const std::map<std::string, std::vector<double>>& point_data,
                    const std::map<std::string, std::vector<double>>& cell_data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write VTK file: " + path);
  write_vtk(mesh, out, point_data, cell_data);
}

}  // namespace emfd
