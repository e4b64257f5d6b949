// JSON import/export of meshes, FE functions and small Eigen containers.
#pragma once

#include <json.hpp>

#include "dirac_ocp/fe_function.hpp"
#include "dirac_ocp/mesh.hpp"

namespace dirac_ocp {

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& m);  // array of rows
Eigen::VectorXd vector_from_json(const nlohmann::json& j);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

// {vertices: [[x,y],...], cells: [[i,j,k],...], boundary: [bool,...]}
nlohmann::json mesh_to_json(const TriMesh& mesh);

// {mesh_level: L, values: [...]}
nlohmann::json fe_function_to_json(const FeFunction& f);
FeFunction fe_function_from_json(const nlohmann::json& j, MeshPtr mesh);

}  // namespace dirac_ocp
