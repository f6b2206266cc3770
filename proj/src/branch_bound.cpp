#include "ccmv/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>

#include "ccmv/errors.hpp"

namespace ccmv {

namespace {

struct Node {
  double bound;
  long seq;
  int depth;
  std::vector<std::pair<int, signed char>> fixings;  // (var, 0/1)

  bool operator<(const Node& other) const {  // priority_queue is a max-heap
    if (bound != other.bound) return bound > other.bound;
    return seq > other.seq;
  }
};

int most_fractional(const std::vector<double>& x, double tol) {
  int arg = -1;
  double best = tol;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double f = std::min(x[j], 1.0 - x[j]);
    if (f > best + 1e-15) {
      best = f;
      arg = static_cast<int>(j);
    }
  }
  return arg;
}

}  // namespace

BbSolution solve_binary_bb(const OptimizationModel& model, const BbLimits& limits, std::ostream* node_log) {
  for (const Variable& v : model.vars)
    if (v.kind != VarKind::Binary)
      raise(ErrorKind::UnsupportedModel, "branch and bound handles pure 0-1 models only");
  if (!model.obj_quad.empty())
    raise(ErrorKind::UnsupportedModel, "branch and bound needs a linear objective");

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const int n = static_cast<int>(model.vars.size());
  std::vector<double> lo(n), hi(n);

  BbSolution best;
  best.status = BbStatus::Infeasible;
  double incumbent = std::numeric_limits<double>::infinity();

  std::priority_queue<Node> open;
  open.push(Node{-std::numeric_limits<double>::infinity(), 0, 0, {}});
  long seq = 1;
  bool limit_hit = false;
  double fathomed_bound = std::numeric_limits<double>::infinity();
  double pending_bound = std::numeric_limits<double>::infinity();

  while (!open.empty()) {
    const Node node = open.top();
    open.pop();

    const double gap_abs = limits.rel_gap * std::max(1.0, std::abs(incumbent));
    if (node.bound >= incumbent - gap_abs) {  // fathomed by bound
      fathomed_bound = std::min(fathomed_bound, node.bound);
      continue;
    }
    if (best.nodes >= limits.max_nodes || elapsed() > limits.time_seconds) {
      limit_hit = true;
      pending_bound = node.bound;
      break;
    }

    for (int j = 0; j < n; ++j) {
      lo[j] = 0.0;
      hi[j] = 1.0;
    }
    for (const auto& [j, v] : node.fixings) lo[j] = hi[j] = static_cast<double>(v);

    ++best.nodes;
    LpSolution lp = solve_lp_bounded(model, lo, hi);
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status == LpStatus::Unbounded) raise(ErrorKind::Numerical, "unbounded relaxation in 0-1 model");

    if (node_log) {
      const double g = std::isfinite(incumbent) ? incumbent - lp.objective : std::numeric_limits<double>::quiet_NaN();
      (*node_log) << best.nodes << ',' << node.depth << ',' << lp.objective << ',' << incumbent << ',' << g << '\n';
    }

    if (lp.objective >= incumbent - gap_abs) continue;

    const int branch = most_fractional(lp.x, limits.integrality_tol);
    if (branch < 0) {
      // integral: candidate incumbent (round off LP fuzz)
      for (double& v : lp.x) v = std::round(v);
      const double obj = model.objective_at(lp.x);
      if (obj < incumbent - 0.0) {
        incumbent = obj;
        best.x = lp.x;
        best.objective = obj;
        best.status = BbStatus::Optimal;
      }
      continue;
    }

    Node down{lp.objective, seq++, node.depth + 1, node.fixings};
    down.fixings.emplace_back(branch, 0);
    Node up{lp.objective, seq++, node.depth + 1, node.fixings};
    up.fixings.emplace_back(branch, 1);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  double open_bound = std::min(pending_bound, fathomed_bound);
  while (!open.empty()) {
    open_bound = std::min(open_bound, open.top().bound);
    open.pop();
  }
  best.bound = std::min(open_bound, incumbent);
  best.wall_seconds = elapsed();
  if (limit_hit)
    best.status = BbStatus::FeasibleAtLimit;
  else if (std::isfinite(incumbent))
    best.status = BbStatus::Optimal;
  return best;
}

}  // namespace ccmv
