#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ccmv/instance.hpp"
#include "ccmv/model_builders.hpp"

namespace ccmv {

struct SubsetSolution {
  std::vector<int> support;  // sorted ascending
  std::vector<double> weights;
  double objective = 0.0;
  long long evaluated = 0;
};

/// C(n, k) saturated at cap+1 so callers can test the enumeration budget.
unsigned long long n_choose_k_capped(int n, int k, unsigned long long cap);

// Global equal-weight minimizer over all K-subsets. Ties go to the
// lexicographically smallest support. The default splits the enumeration
// across threads by leading index with an order-independent merge; the
// serial variant is the reference implementation.
SubsetSolution brute_force_ew(const SingleFactorModel& model, int K, long long n_cap = 50'000'000);
SubsetSolution brute_force_ew(const MultiFactorModel& model, int K, long long n_cap = 50'000'000);
SubsetSolution brute_force_ew_serial(const SingleFactorModel& model, int K, long long n_cap = 50'000'000);
SubsetSolution brute_force_ew_serial(const MultiFactorModel& model, int K, long long n_cap = 50'000'000);

// Long-only minimum variance on a fixed support: active-set on the
// nonnegativity constraints, dropping the most negative weight until the
// KKT solve is clean. Returns full-length weights (zeros off support).
std::vector<double> qp_support(const Eigen::MatrixXd& sigma, std::span<const int> support);
std::vector<double> qp_support(const MultiFactorModel& model, std::span<const int> support);

/// Exact minimizer over every support of size <= K with optimal weights.
SubsetSolution brute_force_ccmv(const MultiFactorModel& model, int K, long long n_cap = 50'000'000);

struct RelaxationSolution {
  std::vector<double> x;
  double objective = 0.0;
  double beta_sum = 0.0;  // sum of beta_i x_i at the optimum
  int fractional_count = 0;
};

// Box relaxation of the single-factor equal-weight problem: 1-D convex
// search over the achieved beta sum with an inner LP distributing x.
RelaxationSolution solve_relaxation_sf(const SingleFactorModel& model, int K);

/// Exhaustive k-clique maximizer for a MewcpInstance (ties: lex smallest).
SubsetSolution brute_force_mewcp(const MewcpInstance& instance, long long n_cap = 50'000'000);

}  // namespace ccmv
