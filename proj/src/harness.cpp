#include "dirac_ocp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "dirac_ocp/norms.hpp"

namespace dirac_ocp {

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::state_l2: return "state_l2";
    case Quantity::state_l1: return "state_l1";
    case Quantity::adjoint_linf: return "adjoint_linf";
    case Quantity::gradient_gap: return "gradient_gap";
    case Quantity::control_err: return "control_err";
  }
  return "?";
}

std::optional<Quantity> quantity_from_name(const std::string& name) {
  for (Quantity q : {Quantity::state_l2, Quantity::state_l1, Quantity::adjoint_linf,
                     Quantity::gradient_gap, Quantity::control_err})
    if (quantity_name(q) == name) return q;
  return std::nullopt;
}

int log_exponent(Quantity q) {
  switch (q) {
    case Quantity::state_l2: return 0;
    case Quantity::state_l1: return 2;
    case Quantity::adjoint_linf: return 2;
    case Quantity::gradient_gap: return 3;
    case Quantity::control_err: return 3;
  }
  return 0;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& h_error,
                 const std::function<void(const std::string&)>& warn) {
  std::vector<std::pair<double, double>> log_pairs;
  for (const auto& [h, err] : h_error) {
    if (!(err > 0.0) || !(h > 0.0)) {
      if (warn)
        warn("dropping nonpositive sample (h=" + std::to_string(h) +
             ", err=" + std::to_string(err) + ") from the rate fit");
      continue;
    }
    log_pairs.emplace_back(std::log(h), std::log(err));
  }
  const int n = static_cast<int>(log_pairs.size());
  if (n < 3)
    throw InsufficientData("rate fit needs at least 3 positive samples, got " +
                           std::to_string(n));
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : log_pairs) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  RateFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (const auto& [x, y] : log_pairs) {
    double r = y - (fit.slope * x + fit.intercept);
    ss_res += r * r;
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

bool wants(const StudyPlan& plan, Quantity q) {
  return std::find(plan.quantities.begin(), plan.quantities.end(), q) !=
         plan.quantities.end();
}

void log_line(const StudyPlan& plan, const std::string& msg) {
  if (plan.log) plan.log(msg);
}

void validate_plan(const StudyPlan& plan, const Eigen::MatrixXd* omega1) {
  std::vector<std::string> bad;
  if (plan.levels.empty()) bad.push_back("study needs at least one level");
  if (!std::is_sorted(plan.levels.begin(), plan.levels.end()) ||
      std::adjacent_find(plan.levels.begin(), plan.levels.end()) !=
          plan.levels.end())
    bad.push_back("study levels must be strictly ascending");
  if (!plan.levels.empty() && plan.levels.front() < 0)
    bad.push_back("study levels must be nonnegative");
  if (!plan.levels.empty() && plan.reference_level < plan.levels.back() + 2)
    bad.push_back("reference level must be at least max(levels) + 2");
  if (plan.quantities.empty()) bad.push_back("study needs at least one quantity");
  if (plan.spec.dim == 3)
    for (Quantity q : plan.quantities)
      if (q != Quantity::state_l2)
        bad.push_back("quantity " + quantity_name(q) +
                      " is only available in two dimensions");
  if (omega1) {
    // D inside the closed subdomain, subdomain strictly inside the domain.
    for (int k = 0; k < plan.spec.sources.rows(); ++k)
      if (!point_in_convex_polygon(*omega1, plan.spec.sources(k, 0),
                                   plan.spec.sources(k, 1)))
        bad.push_back("source point " + std::to_string(k) +
                      " lies outside the omega1 subdomain");
    for (int i = 0; i < omega1->rows(); ++i) {
      Eigen::Vector2d v = omega1->row(i);
      bool inside = true;
      const auto& poly = plan.spec.polygon;
      for (int e = 0; e < poly.rows(); ++e) {
        Eigen::Vector2d a = poly.row(e);
        Eigen::Vector2d b = poly.row((e + 1) % poly.rows());
        Eigen::Vector2d ed = b - a;
        if (!(ed.x() * (v.y() - a.y()) - ed.y() * (v.x() - a.x()) >
              kGeomTol * std::max(1.0, ed.norm())))
          inside = false;
      }
      if (!inside)
        bad.push_back("omega1 vertex " + std::to_string(i) +
                      " is not strictly inside the domain");
    }
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

struct LevelData {
  MeshPtr mesh;
  FeFunction state;
  FeFunction adjoint;       // when needed
  Eigen::VectorXd psi;      // when needed
  Eigen::VectorXd control;  // control study
};

}  // namespace

ConvergenceReport run_study(const StudyPlan& plan) {
  const ProblemSpec& spec = plan.spec;
  const bool need_state = wants(plan, Quantity::state_l2) ||
                          wants(plan, Quantity::state_l1) ||
                          wants(plan, Quantity::adjoint_linf) ||
                          wants(plan, Quantity::gradient_gap);
  const bool need_adjoint =
      wants(plan, Quantity::adjoint_linf) || wants(plan, Quantity::gradient_gap);
  const bool need_control = wants(plan, Quantity::control_err);

  std::optional<Eigen::MatrixXd> omega1;
  if (spec.dim == 2) omega1 = study_omega1(spec);
  validate_plan(plan, omega1 ? &*omega1 : nullptr);

  const int ref = plan.reference_level;
  ConvergenceReport report;
  report.quantities = plan.quantities;
  report.levels = plan.levels;
  report.reference_level = ref;

  // Mesh ladder up to the reference level.
  std::vector<MeshPtr> mesh(ref + 1);
  mesh[0] = base_mesh(spec);
  for (int l = 1; l <= ref; ++l) mesh[l] = refine_uniform(mesh[l - 1]);
  report.reference_h = mesh[ref]->h();
  for (int l : plan.levels) report.h.push_back(mesh[l]->h());

  const Nonlinearity nl = spec_nonlinearity(spec);
  const ScalarField y_d = desired_state_field(spec);
  const Eigen::VectorXd u_fixed = study_control(spec);

  auto measured = [&](int l) {
    return std::find(plan.levels.begin(), plan.levels.end(), l) != plan.levels.end();
  };

  // ---- Fixed-control ladder: states (and adjoints where needed). ----
  std::map<int, LevelData> data;
  if (need_state) {
    FeFunction previous;
    for (int l = 0; l <= ref; ++l) {
      StateSystem sys = make_state_system(mesh[l], nl, spec.sources);
      NewtonOptions opt;
      opt.tol_newton = spec.tol.newton;
      opt.tol_lin = spec.tol.lin;
      FeFunction warm;
      if (l > 0) {
        warm = prolongate_to(previous, mesh[l]);
        opt.initial_guess = &warm;
      }
      NewtonReport nrep;
      FeFunction y;
      try {
        y = solve_state(sys, u_fixed, opt, &nrep);
      } catch (NonlinearSolveFailure& e) {
        throw NonlinearSolveFailure("state solve failed at level " +
                                        std::to_string(l) + ": " + e.what(),
                                    e.report());
      }
      log_line(plan, "state level " + std::to_string(l) + ": newton " +
                         std::to_string(nrep.iterations) + " its, residual " +
                         std::to_string(nrep.residual));
      const bool keep = measured(l) || l >= ref - 1;
      if (keep) {
        LevelData& ld = data[l];
        ld.mesh = mesh[l];
        ld.state = y;
        if (need_adjoint) {
          ld.adjoint = solve_adjoint(sys, y, y_d, spec.tol.lin);
          ld.psi.resize(u_fixed.size());
          for (int z = 0; z < u_fixed.size(); ++z)
            ld.psi(z) = source_value(ld.adjoint, sys.sources, z) +
                        spec.alpha * u_fixed(z);
        }
      }
      previous = std::move(y);
    }
  }

  // ---- Control ladder: full OCP solves, warm-started across levels. ----
  std::map<int, Eigen::VectorXd> control_at;
  if (need_control) {
    MeshPtr prev_mesh;
    Eigen::VectorXd u = project(Eigen::VectorXd::Zero(spec.sources.rows()),
                                ControlBounds{spec.lower, spec.upper});
    FeFunction prev_state;
    const int start = plan.levels.front();
    for (int l = start; l <= ref; ++l) {
      ReducedProblem problem = reduced_problem_at(spec, mesh[l]);
      OcpOptions opt;
      FeFunction warm;
      if (prev_mesh) {
        warm = prolongate_to(prev_state, mesh[l]);
        opt.warm_state = &warm;
      }
      OcpResult res;
      try {
        res = solve_ocp(problem, u, opt);
      } catch (OptimizerStalled& e) {
        throw OptimizerStalled("control solve stalled at level " +
                                   std::to_string(l) + ": " + e.what(),
                               e.diagnostics());
      }
      log_line(plan, "control level " + std::to_string(l) + ": " +
                         std::to_string(res.iterations) + " pg its, residual " +
                         std::to_string(res.kkt.projection_residual));
      if (measured(l) || l >= ref - 1) control_at[l] = res.u;
      u = res.u;
      prev_state = std::move(res.state);
      prev_mesh = mesh[l];
    }
    // Second-order report at the reference solution.
    ReducedProblem problem = reduced_problem_at(spec, mesh[ref]);
    report.sosc_at_reference = check_sosc(problem, control_at[ref],
                                          10.0 * spec.tol.kkt, spec.alpha / 2.0,
                                          plan.threads);
  }

  // ---- Errors against the reference. ----
  auto record = [&](Quantity q, int l, double err) {
    if (measured(l))
      report.errors[q].push_back(err);
    else if (l == ref - 1)
      report.reference_gap[q] = err;
  };
  std::vector<int> eval_levels;
  for (int l : plan.levels) eval_levels.push_back(l);
  if (std::find(eval_levels.begin(), eval_levels.end(), ref - 1) ==
      eval_levels.end())
    eval_levels.push_back(ref - 1);

  for (int l : eval_levels) {
    if (need_state) {
      const LevelData& ld = data.at(l);
      const LevelData& rd = data.at(ref);
      if (wants(plan, Quantity::state_l2) || wants(plan, Quantity::state_l1)) {
        ErrorNorms e = norm_errors(rd.state, ld.state, omega1);
        record(Quantity::state_l2, l, e.l2);
        record(Quantity::state_l1, l, e.l1);
      }
      if (wants(plan, Quantity::adjoint_linf)) {
        ErrorNorms e = norm_errors(rd.adjoint, ld.adjoint, omega1);
        record(Quantity::adjoint_linf, l, e.linf);
      }
      if (wants(plan, Quantity::gradient_gap))
        record(Quantity::gradient_gap, l,
               (ld.psi - rd.psi).lpNorm<Eigen::Infinity>());
    }
    if (need_control)
      record(Quantity::control_err, l,
             (control_at.at(l) - control_at.at(ref)).lpNorm<Eigen::Infinity>());
  }
  // ---- Rate fits. ----
  auto warn = [&](const std::string& msg) { log_line(plan, "warning: " + msg); };
  for (Quantity q : plan.quantities) {
    const auto& errs = report.errors[q];
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < errs.size(); ++i)
      pairs.emplace_back(report.h[i], errs[i]);
    try {
      report.rates[q] = fit_rate(pairs, warn);
    } catch (const InsufficientData&) {
      report.rates[q] = std::nullopt;
      warn("rate fit for " + quantity_name(q) + " skipped (insufficient data)");
    }
    const int m = log_exponent(q);
    if (m > 0) {
      std::vector<std::pair<double, double>> corrected;
      for (auto& [h, err] : pairs)
        corrected.emplace_back(h * h * std::pow(std::abs(std::log(h)), m), err);
      try {
        report.log_corrected_rates[q] = fit_rate(corrected, warn);
      } catch (const InsufficientData&) {
        report.log_corrected_rates[q] = std::nullopt;
      }
    } else {
      report.log_corrected_rates[q] = std::nullopt;
    }
  }
  return report;
}

namespace {

StudyPlan with_quantities(StudyPlan plan, std::vector<Quantity> qs) {
  plan.quantities = std::move(qs);
  return plan;
}

}  // namespace

ConvergenceReport run_state_study(StudyPlan plan) {
  return run_study(
      with_quantities(std::move(plan), {Quantity::state_l2, Quantity::state_l1}));
}

ConvergenceReport run_adjoint_study(StudyPlan plan) {
  return run_study(with_quantities(std::move(plan), {Quantity::adjoint_linf}));
}

ConvergenceReport run_gradient_gap_study(StudyPlan plan) {
  return run_study(with_quantities(std::move(plan), {Quantity::gradient_gap}));
}

ConvergenceReport run_control_study(StudyPlan plan) {
  return run_study(with_quantities(std::move(plan), {Quantity::control_err}));
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string report_csv(const ConvergenceReport& report) {
  static const Quantity columns[] = {Quantity::state_l2, Quantity::state_l1,
                                     Quantity::adjoint_linf, Quantity::gradient_gap,
                                     Quantity::control_err};
  std::string out = "level,h,state_l2,state_l1,adjoint_linf,gradient_gap,control_err\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    out += std::to_string(report.levels[i]) + "," + fmt(report.h[i]);
    for (Quantity q : columns) {
      out += ",";
      auto it = report.errors.find(q);
      if (it != report.errors.end() && i < it->second.size())
        out += fmt(it->second[i]);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json report_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["levels"] = report.levels;
  j["h"] = report.h;
  nlohmann::json errors, rates, corrected, refgap;
  auto fit_json = [](const std::optional<RateFit>& f) -> nlohmann::json {
    if (!f) return nullptr;
    return {{"slope", f->slope}, {"intercept", f->intercept}, {"r2", f->r2}};
  };
  for (Quantity q : report.quantities) {
    const std::string name = quantity_name(q);
    errors[name] = report.errors.count(q) ? nlohmann::json(report.errors.at(q))
                                          : nlohmann::json::array();
    rates[name] = fit_json(report.rates.count(q) ? report.rates.at(q) : std::nullopt);
    corrected[name] = fit_json(report.log_corrected_rates.count(q)
                                   ? report.log_corrected_rates.at(q)
                                   : std::nullopt);
    if (report.reference_gap.count(q)) refgap[name] = report.reference_gap.at(q);
  }
  j["errors"] = std::move(errors);
  j["rates"] = std::move(rates);
  j["log_corrected_rates"] = std::move(corrected);
  j["reference"] = {{"level", report.reference_level},
                    {"h", report.reference_h},
                    {"gap", std::move(refgap)}};
  if (report.sosc_at_reference) {
    const SoscReport& s = *report.sosc_at_reference;
    nlohmann::json sosc = {{"tau", s.tau},
                           {"kappa_min", s.kappa_min},
                           {"critical_set", s.critical_set},
                           {"positive", s.positive}};
    sosc["min_eigenvalue"] =
        s.min_eigenvalue ? nlohmann::json(*s.min_eigenvalue) : nlohmann::json();
    j["sosc_at_reference"] = std::move(sosc);
  }
  return j;
}

}  // namespace dirac_ocp
