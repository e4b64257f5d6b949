// Mesh-refinement studies. Ground truth is a fine-mesh reference solution
// (reference_level >= max(levels) + 2); coarse solutions are prolongated to
// the reference mesh for the norm-based quantities. Rates are least-squares
// slopes of log(error) against log(h), with a second fit against the
// log-corrected model h^2 |log h|^m for the log-polluted quantities.
#pragma once

#include <functional>
#include <map>
#include <optional>

#include <json.hpp>

#include "dirac_ocp/problem_spec.hpp"

namespace dirac_ocp {

enum class Quantity { state_l2, state_l1, adjoint_linf, gradient_gap, control_err };

std::string quantity_name(Quantity q);
std::optional<Quantity> quantity_from_name(const std::string& name);

// Exponent m of the declared log correction h^2 |log h|^m (0: no correction).
int log_exponent(Quantity q);

struct StudyPlan {
  ProblemSpec spec;
  std::vector<int> levels;   // ascending refinement levels to measure
  int reference_level = 0;   // >= max(levels) + 2
  std::vector<Quantity> quantities;
  int threads = 1;
  std::function<void(const std::string&)> log;  // progress messages, optional
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct ConvergenceReport {
  std::vector<Quantity> quantities;
  std::vector<int> levels;
  std::vector<double> h;
  std::map<Quantity, std::vector<double>> errors;
  // Fits are absent when fewer than 3 positive samples survived.
  std::map<Quantity, std::optional<RateFit>> rates;
  std::map<Quantity, std::optional<RateFit>> log_corrected_rates;
  int reference_level = 0;
  double reference_h = 0.0;
  // Error of level reference-1 against the reference: ground-truth
  // contamination is subdominant when this stays below a quarter of the
  // coarsest measured error.
  std::map<Quantity, double> reference_gap;
  std::optional<SoscReport> sosc_at_reference;  // control studies only
};

// Least squares of log(err) against log(h). Nonpositive errors are dropped
// (with a warning through `warn` when provided); fewer than 3 survivors throw
// InsufficientData.
RateFit fit_rate(const std::vector<std::pair<double, double>>& h_error,
                 const std::function<void(const std::string&)>& warn = {});

// Runs all requested quantities in one ladder sweep (shared state solves,
// Newton warm-started across levels). Throws ValidationError for invalid
// plans and propagates solver failures annotated with the failing level.
ConvergenceReport run_study(const StudyPlan& plan);

// Spec'd entry points: run_study restricted to one quantity family.
ConvergenceReport run_state_study(StudyPlan plan);        // state_l2 + state_l1
ConvergenceReport run_adjoint_study(StudyPlan plan);      // adjoint_linf
ConvergenceReport run_gradient_gap_study(StudyPlan plan); // gradient_gap
ConvergenceReport run_control_study(StudyPlan plan);      // control_err + SOSC

// CSV with columns level,h,state_l2,state_l1,adjoint_linf,gradient_gap,
// control_err; absent quantities stay blank. Deterministic formatting.
std::string report_csv(const ConvergenceReport& report);

nlohmann::json report_json(const ConvergenceReport& report);

}  // namespace dirac_ocp
