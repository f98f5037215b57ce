#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dopt/surplus.hpp"
#include "dopt/thresholds.hpp"

namespace dopt {

enum class RefineMethod {
  Auto,         // nested golden section on z_l = 0, Nelder-Mead elsewhere
  NelderMead,   // always Nelder-Mead from the best grid cell
  NestedGolden, // always nested 1-D searches around the best grid cell
  GridOnly,     // no refinement
};

std::string_view to_string(RefineMethod m);
RefineMethod parse_refine_method(std::string_view name);

struct OptimizerOptions {
  int grid = 61;     // points per axis, boundaries included
  double tol = 1e-6; // refinement tolerance on z_l and z_h
  RefineMethod method = RefineMethod::Auto;
  int threads = 1;   // grid rows evaluated concurrently; results do not depend on it
};

struct OptimizerDiagnostics {
  int grid = 0;
  long grid_evaluations = 0;
  long refine_evaluations = 0;
  std::string method;  // refinement actually used
  double grid_best = 0.0;
  double grid_best_z_l = 0.0;
  double grid_best_z_h = 0.0;
  // A boundary optimum and an interior candidate agree within 1e-9 relative.
  bool tie = false;
  // The best grid value is matched within 1e-10 by a non-adjacent cell.
  bool flat_objective = false;
  std::vector<std::string> warnings;
};

struct DelegationOutcome {
  Thresholds thresholds;
  double t_low = 0.0;   // delegation interval [t_low, t_high]
  double t_high = 0.0;
  SurplusBreakdown surplus;
  double pi_s = 0.0;    // full-delegation benchmark
  double percentile_zh = 0.0;
  OptimizerDiagnostics diagnostics;
};

/// Pi_w on the uniform grid z_i = i zbar / (n - 1), stored row-major as
/// values[i * n + j] for z_l = z_i, z_h = z_j. Cells with j < i and the row
/// z_l = zbar hold NaN. The diagonal holds pi_p.
std::vector<double> surplus_grid(const ModelParams& p, const SenderDist& d, int n, int threads = 1);

/// Maximizes Pi_w over 0 <= z_l <= z_h <= zbar and assembles the delegation
/// interval that implements the maximizer.
DelegationOutcome optimize(const ModelParams& p, const SenderDist& d,
                           const OptimizerOptions& opts = {});

/// Builds the outcome at a given (z_l, z_h) without searching.
DelegationOutcome evaluate_outcome(const ModelParams& p, const SenderDist& d, double z_l,
                                   double z_h);

}  // namespace dopt
