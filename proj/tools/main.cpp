// dirac-ocp: solve, optimize and run convergence studies for box-constrained
// optimal control of a semilinear elliptic PDE forced by Dirac point sources.
//
//   dirac-ocp solve    --level N [--out DIR] SPEC.toml
//   dirac-ocp optimize --level N [--out DIR] SPEC.toml
//   dirac-ocp study    --quantities q1,q2 --levels A..B --reference R
//                      [--out DIR] [--threads K] SPEC.toml
//
// Exit codes: 0 success, 1 solver failure, 2 validation/parse failure.
// DIRAC_OCP_LOG in {error, info, debug} controls stderr verbosity.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dirac_ocp/harness.hpp"
#include "dirac_ocp/json_io.hpp"

namespace {

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("DIRAC_OCP_LOG");
  if (!env) return LogLevel::error;
  std::string v(env);
  if (v == "debug") return LogLevel::debug;
  if (v == "info") return LogLevel::info;
  return LogLevel::error;
}

void info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[dirac-ocp] " << msg << "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dirac_ocp::Error("cannot write '" + path.string() + "'");
  out << content;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

std::vector<int> parse_level_range(const std::string& text) {
  auto sep = text.find("..");
  std::vector<int> levels;
  if (sep == std::string::npos) {
    levels.push_back(std::stoi(text));
    return levels;
  }
  int a = std::stoi(text.substr(0, sep));
  int b = std::stoi(text.substr(sep + 2));
  for (int l = a; l <= b; ++l) levels.push_back(l);
  if (levels.empty()) throw dirac_ocp::Error("empty level range '" + text + "'");
  return levels;
}

int run(int argc, char** argv) {
  using namespace dirac_ocp;

  CLI::App app{"optimal control with Dirac point sources"};
  app.require_subcommand(1);

  std::string spec_path, out_dir = ".";
  int level = 4, threads = 1, reference = -1;
  std::string levels_arg = "3..6", quantities_arg = "state_l2,state_l1";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("spec", spec_path, "problem definition (TOML)")->required();
    cmd->add_option("--out", out_dir, "output directory (default: .)");
    cmd->add_option("--threads", threads, "worker threads (default: 1)");
  };

  CLI::App* cmd_solve = app.add_subcommand("solve", "solve the state equation");
  cmd_solve->add_option("--level", level, "refinement level (default: 4)");
  add_common(cmd_solve);

  CLI::App* cmd_optimize =
      app.add_subcommand("optimize", "solve the optimal control problem");
  cmd_optimize->add_option("--level", level, "refinement level (default: 4)");
  add_common(cmd_optimize);

  CLI::App* cmd_study = app.add_subcommand("study", "run convergence studies");
  cmd_study->add_option("--levels", levels_arg, "level range A..B (default: 3..6)");
  cmd_study->add_option("--reference", reference,
                        "reference level (default: max(levels) + 2)");
  cmd_study->add_option("--quantities", quantities_arg,
                        "comma list of state_l2,state_l1,adjoint_linf,"
                        "gradient_gap,control_err");
  add_common(cmd_study);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::filesystem::create_directories(out_dir);
  ProblemSpec spec = parse_spec(spec_path);
  info("parsed spec '" + spec_path + "'");

  if (cmd_solve->parsed()) {
    MeshPtr mesh = mesh_at_level(spec, level);
    StateSystem sys = make_state_system(mesh, spec_nonlinearity(spec), spec.sources);
    NewtonOptions opt;
    opt.tol_newton = spec.tol.newton;
    opt.tol_lin = spec.tol.lin;
    NewtonReport report;
    FeFunction y = solve_state(sys, study_control(spec), opt, &report);
    write_json(std::filesystem::path(out_dir) / "state.json", fe_function_to_json(y));
    write_json(std::filesystem::path(out_dir) / "mesh.json", mesh_to_json(*mesh));
    write_json(std::filesystem::path(out_dir) / "newton.json",
               nlohmann::json{{"iterations", report.iterations},
                              {"residual", report.residual},
                              {"damping_steps", report.damping_steps},
                              {"converged", report.converged}});
    info("state written to " + out_dir);
    return 0;
  }

  if (cmd_optimize->parsed()) {
    MeshPtr mesh = mesh_at_level(spec, level);
    ReducedProblem problem = reduced_problem_at(spec, mesh);
    std::ofstream trace(std::filesystem::path(out_dir) / "trace.jsonl");
    OcpOptions opt;
    opt.trace = [&](int it, double j, double residual, double step) {
      nlohmann::json line = {
          {"iter", it}, {"j", j}, {"proj_residual", residual}, {"step", step}};
      trace << line.dump() << "\n";
      if (log_level() >= LogLevel::debug) std::cerr << line.dump() << "\n";
    };
    Eigen::VectorXd u0 = project(Eigen::VectorXd::Zero(spec.sources.rows()),
                                 problem.bounds);
    OcpResult res = solve_ocp(problem, u0, opt);
    SoscReport sosc = check_sosc(problem, res.u, 10.0 * spec.tol.kkt,
                                 spec.alpha / 2.0, threads);

    nlohmann::json active = nlohmann::json::array();
    for (auto tag : res.kkt.active_set)
      active.push_back(tag == ActiveTag::lower   ? "lower"
                       : tag == ActiveTag::upper ? "upper"
                                                 : "free");
    nlohmann::json diag = {
        {"u", to_json(res.u)},
        {"j", res.j},
        {"iterations", res.iterations},
        {"psi", to_json(res.kkt.psi)},
        {"projection_residual", res.kkt.projection_residual},
        {"active_set", std::move(active)},
        {"sosc",
         {{"tau", sosc.tau},
          {"kappa_min", sosc.kappa_min},
          {"critical_set", sosc.critical_set},
          {"min_eigenvalue", sosc.min_eigenvalue ? nlohmann::json(*sosc.min_eigenvalue)
                                                 : nlohmann::json()},
          {"positive", sosc.positive}}}};
    write_json(std::filesystem::path(out_dir) / "control.json", diag);
    write_json(std::filesystem::path(out_dir) / "state.json",
               fe_function_to_json(res.state));
    write_json(std::filesystem::path(out_dir) / "adjoint.json",
               fe_function_to_json(res.adjoint));
    info("control written to " + out_dir + " (projection residual " +
         std::to_string(res.kkt.projection_residual) + ")");
    return 0;
  }

  // study
  StudyPlan plan;
  plan.spec = spec;
  plan.levels = parse_level_range(levels_arg);
  plan.reference_level = reference >= 0 ? reference : plan.levels.back() + 2;
  plan.threads = threads;
  std::stringstream qs(quantities_arg);
  std::string q;
  while (std::getline(qs, q, ',')) {
    auto quantity = quantity_from_name(q);
    if (!quantity)
      throw ValidationError({"unknown study quantity '" + q + "'"});
    plan.quantities.push_back(*quantity);
  }
  plan.log = [](const std::string& msg) { info(msg); };
  ConvergenceReport report = run_study(plan);
  write_file(std::filesystem::path(out_dir) / "study.csv", report_csv(report));
  write_json(std::filesystem::path(out_dir) / "study.json", report_json(report));
  info("study written to " + out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dirac_ocp::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dirac_ocp::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dirac_ocp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
