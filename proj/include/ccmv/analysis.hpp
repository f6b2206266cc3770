#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "ccmv/instance.hpp"

namespace ccmv {

/// Labeled planar points; labels are the asset subsets the points came from.
struct PointSet2D {
  std::vector<std::array<double, 2>> points;
  std::vector<std::vector<int>> labels;
};

/// Per-asset risk plane: (beta_i * sigma_f, sigma_eps2_i).
PointSet2D build_A(const SingleFactorModel& instance);

/// All sums of K distinct points, labeled by the generating subset.
PointSet2D addition_set(const PointSet2D& a, int K, long long n_cap = 50'000'000);

// Counterclockwise hull via monotone chain; collinear interior points are
// dropped. Returns indices into the input.
std::vector<int> convex_hull(std::span<const std::array<double, 2>> points);

/// Indices (into points) of the lower chain, leftmost to rightmost.
std::vector<int> lower_hull(std::span<const std::array<double, 2>> points);

struct FrontierReport {
  bool on_frontier = false;
  double distance = 0.0;       // point-to-chain distance, absolute
  double scale = 0.0;          // coordinate scale used for the tolerance
  int n_supports = 0;          // 1 = vertex, 2 = edge combination
  std::vector<int> support_a;  // subsets of the supporting vertices
  std::vector<int> support_b;
  double theta = 0.0;  // convex coefficient on support_a
  int support_diff = 0;
  bool degenerate_collinear = false;
  int fractional_count = 0;
};

// Solves the box relaxation, maps the optimum to the addition-set plane and
// checks it sits on the lower frontier, expressed as a convex combination
// of at most two adjacent vertices.
FrontierReport verify_frontier(const SingleFactorModel& instance, int K, long long n_cap = 50'000'000);

struct MongeMatrixResult {
  Eigen::MatrixXd matrix;
  std::vector<int> order;  // row/col r holds asset order[r] (beta ascending)
};

/// M_ij = (sigma_eps2_i + sigma_eps2_j) / (2K) + sigma_f2 * beta_i * beta_j
/// over the beta-sorted assets.
MongeMatrixResult monge_matrix(const SingleFactorModel& instance, int K);

struct MongeReport {
  int n = 0;
  bool is_inverse_monge = false;
  double worst_violation = 0.0;     // max of M_il + M_jk - M_ik - M_jl
  std::array<int, 4> witness{};     // (i, j, k, l) attaining it
};

// Adjacent 2x2 check (equivalent to the full condition by telescoping),
// parallel over rows; the naive variant scans all quadruples and serves as
// the reference oracle.
MongeReport check_inverse_monge(const Eigen::MatrixXd& m, double tol);
MongeReport check_inverse_monge_naive(const Eigen::MatrixXd& m, double tol);

}  // namespace ccmv
