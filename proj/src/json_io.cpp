#include "dirac_ocp/json_io.hpp"

#include "dirac_ocp/errors.hpp"

namespace dirac_ocp {

nlohmann::json to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("expected a JSON array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("expected a JSON array of rows");
  if (j.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != j[0].size())
      throw ParseError("ragged JSON matrix");
    for (std::size_t k = 0; k < j[i].size(); ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

nlohmann::json mesh_to_json(const TriMesh& mesh) {
  nlohmann::json out;
  out["vertices"] = to_json(mesh.vertices());
  nlohmann::json cells = nlohmann::json::array();
  for (int c = 0; c < mesh.cell_count(); ++c) {
    nlohmann::json cell = nlohmann::json::array();
    for (int k = 0; k < mesh.dim() + 1; ++k) cell.push_back(mesh.cells()(c, k));
    cells.push_back(std::move(cell));
  }
  out["cells"] = std::move(cells);
  nlohmann::json boundary = nlohmann::json::array();
  for (char b : mesh.boundary_vertex()) boundary.push_back(static_cast<bool>(b));
  out["boundary"] = std::move(boundary);
  return out;
}

nlohmann::json fe_function_to_json(const FeFunction& f) {
  nlohmann::json out;
  out["mesh_level"] = f.mesh->level();
  out["values"] = to_json(f.values);
  return out;
}

FeFunction fe_function_from_json(const nlohmann::json& j, MeshPtr mesh) {
  if (!j.contains("mesh_level") || !j.contains("values"))
    throw ParseError("FE function JSON needs 'mesh_level' and 'values'");
  if (j["mesh_level"].get<int>() != mesh->level())
    throw MeshMismatch("FE function was stored at level " +
                       std::to_string(j["mesh_level"].get<int>()) +
                       ", not at the provided mesh's level " +
                       std::to_string(mesh->level()));
  Eigen::VectorXd values = vector_from_json(j["values"]);
  if (values.size() != mesh->vertex_count())
    throw MeshMismatch("FE function value count does not match the mesh");
  return FeFunction{std::move(mesh), std::move(values)};
}

}  // namespace dirac_ocp
