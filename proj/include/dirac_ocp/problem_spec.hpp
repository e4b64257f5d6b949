// Problem-definition files: a TOML format describing the domain, the ordered
// source set with box bounds, the cost data and solver tolerances, plus
// helpers that instantiate meshes and reduced problems from a spec.
#pragma once

#include <optional>
#include <string>

#include "dirac_ocp/control.hpp"
#include "dirac_ocp/nonlinearity.hpp"

namespace dirac_ocp {

struct DesiredState {
  enum class Kind { constant, expression, fe_file };
  Kind kind = Kind::constant;
  double value = 0.0;  // constant
  std::string expr;    // expression in x, y, z
  std::string path;    // FE function JSON, relative to the spec file
};

struct ProblemSpec {
  int dim = 2;
  Eigen::MatrixXd polygon;  // dim = 2: ccw vertices, n x 2
  Eigen::Vector3d box_lo = Eigen::Vector3d::Zero();  // dim = 3
  Eigen::Vector3d box_hi = Eigen::Vector3d::Ones();
  Eigen::MatrixXd sources;  // ell x dim, ordered
  Eigen::VectorXd lower, upper;
  double alpha = 0.1;
  DesiredState y_d;
  std::string nonlinearity = "cubic";
  double nonlinearity_scale = 1.0;
  SolverTolerances tol;
  unsigned long long seed = 0;
  // Optional study section.
  Eigen::VectorXd study_u;                 // empty: midpoint of the bounds
  std::optional<Eigen::MatrixXd> omega1;   // empty: centered half-scale domain
  std::string base_dir;                    // resolves relative fe_file paths

  bool operator==(const ProblemSpec& other) const;
};

// Parses and validates; throws ParseError on malformed TOML and
// ValidationError carrying the full violation list otherwise.
ProblemSpec parse_spec(const std::string& path);
ProblemSpec spec_from_toml(const std::string& text);

std::string emit_spec(const ProblemSpec& spec);

MeshPtr base_mesh(const ProblemSpec& spec);
// Refinement chain from the base mesh; level = number of refinements.
MeshPtr mesh_at_level(const ProblemSpec& spec, int level);

Nonlinearity spec_nonlinearity(const ProblemSpec& spec);
ScalarField desired_state_field(const ProblemSpec& spec);

// The fixed control used by state/adjoint/gradient studies.
Eigen::VectorXd study_control(const ProblemSpec& spec);

// Subdomain for local max-norm errors: the spec's override or the centered
// half-scale copy of the domain polygon.
Eigen::MatrixXd study_omega1(const ProblemSpec& spec);

ReducedProblem reduced_problem_at(const ProblemSpec& spec, MeshPtr mesh);

}  // namespace dirac_ocp
