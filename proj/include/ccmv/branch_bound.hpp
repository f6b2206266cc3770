#pragma once

#include <iosfwd>
#include <vector>

#include "ccmv/opt_model.hpp"
#include "ccmv/simplex.hpp"

namespace ccmv {

enum class BbStatus { Optimal, FeasibleAtLimit, Infeasible };

struct BbLimits {
  double time_seconds = 3600.0;
  long max_nodes = 50'000'000;
  double integrality_tol = 1e-6;
  double rel_gap = 1e-9;  // stop when incumbent - bound <= rel_gap * max(1, |incumbent|)
};

struct BbSolution {
  BbStatus status = BbStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  double bound = 0.0;
  long nodes = 0;
  double wall_seconds = 0.0;
};

// Best-first search on LP-relaxation bounds for pure 0-1 linear models.
// Branches on the most fractional variable (ties by lowest index); node
// order is (bound, insertion sequence), so runs are reproducible.
// Optional node_log receives CSV rows: node,depth,bound,incumbent,gap.
BbSolution solve_binary_bb(const OptimizationModel& model, const BbLimits& limits = {},
                           std::ostream* node_log = nullptr);

}  // namespace ccmv
