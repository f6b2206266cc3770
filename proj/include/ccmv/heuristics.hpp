#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ccmv/instance.hpp"

namespace ccmv {

/// Unnormalized subset objective: sum(sigma_eps2) + sigma_f2 * (sum beta)^2.
double subset_objective(const SingleFactorModel& model, std::span<const int> support);

// Contribution of j to obj(S): sigma_eps2_j + sigma_f2 * (beta_S^2 - (beta_S - beta_j)^2).
double delta_remove(const SingleFactorModel& model, std::span<const int> support, int j);

// obj(S u {i}) - obj(S u {j}) for i, j outside S; negative means i is the
// better insertion.
double delta_swap(const SingleFactorModel& model, std::span<const int> support, int i, int j);

struct SwapStep {
  int removed = -1;
  int inserted = -1;
  double objective_after = 0.0;  // normalized by 1/K^2 at the step's cardinality
};

struct HeuristicTrace {
  std::vector<SwapStep> steps;
  std::vector<int> support;  // final, sorted ascending
  int final_k = 0;
  double objective = 0.0;                 // normalized equal-weight objective
  std::vector<double> objective_history;  // initial value, then after each accepted step
};

// Constructive swap search seeded with the K smallest-beta assets. Swaps are
// accepted only on strict improvement; removal candidates are scanned in
// descending contribution order, so termination implies no single swap can
// improve the output.
HeuristicTrace algorithm1(const SingleFactorModel& model, int K);

// Cardinality-reducing pass: repeatedly drops the largest contributor while
// the equal-weight objective improves at the smaller cardinality.
HeuristicTrace algorithm2(const SingleFactorModel& model, std::span<const int> support);

/// CSV trace: iter,removed,inserted,objective.
void write_trace_csv(const HeuristicTrace& trace, std::ostream& out);

}  // namespace ccmv
