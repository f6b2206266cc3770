#pragma once

#include <span>
#include <vector>

#include "ccmv/opt_model.hpp"

namespace ccmv {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOptions {
  double feas_tol = 1e-7;   // absolute primal residual, after row scaling
  double opt_tol = 1e-9;    // reduced-cost threshold
  double pivot_tol = 1e-9;  // smallest usable ratio-test pivot
  int refactor_every = 50;
  long max_iterations = 2'000'000;
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;  // structural variables only
  // basis description: basic column per row (model columns first, then
  // slacks/artificials), and the bound state of every nonbasic column
  std::vector<int> basic_columns;
  std::vector<signed char> at_upper;
  long iterations = 0;
  double dual_bound = 0.0;
  double max_residual = 0.0;
};

// Dense revised simplex over bounded variables. The model's objective must
// be linear; with relax_integrality the binaries become [0,1] boxes,
// otherwise a model containing binaries is rejected. Deterministic: Dantzig
// pricing with index tie-break, Bland fallback under degeneracy.
LpSolution solve_lp(const OptimizationModel& model, bool relax_integrality, const LpOptions& opt = {});

/// Same, with per-variable bound overrides (used by branch and bound).
LpSolution solve_lp_bounded(const OptimizationModel& model, std::span<const double> lower,
                            std::span<const double> upper, const LpOptions& opt = {});

}  // namespace ccmv
