#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ccmv/instance.hpp"
#include "ccmv/opt_model.hpp"

namespace ccmv {

/// How the piecewise model treats the aggregate-beta segment variables.
/// PaperFaithful keeps only the upper linking row per factor (published row
/// counts); TwoSided adds a lower bracketing row per factor and prices each
/// segment at the worse of its two endpoints, which makes the approximation
/// an upper bound on the exact objective for every feasible point.
enum class ApproxMode { PaperFaithful, TwoSided };

// Uniform breakpoints: 4K+1 weight levels on [0,1] (override via n_w_breaks)
// and n_beta_breaks levels per factor spanning [min_i beta_il, max_i beta_il].
// A factor with constant loadings collapses to a single breakpoint.
SegmentGrid default_grids(const MultiFactorModel& model, int K, int n_w_breaks = 0, int n_beta_breaks = 500);

OptimizationModel build_ccmvfm(const MultiFactorModel& model, int K);
OptimizationModel build_ccmvfm_la(const MultiFactorModel& model, int K, const SegmentGrid& grid,
                                  ApproxMode mode = ApproxMode::PaperFaithful);
OptimizationModel build_ewccmvfm(const MultiFactorModel& model, int K);
OptimizationModel build_ewccmvfm_la(const MultiFactorModel& model, int K, const SegmentGrid& grid,
                                    ApproxMode mode = ApproxMode::PaperFaithful);
OptimizationModel build_ewccmvsf(const SingleFactorModel& model, int K);

/// Max-edge-weighted clique instance: pick k nodes maximizing the sum of
/// pairwise weights. Weights are defined for i < j only.
struct MewcpInstance {
  int n = 0;
  int k = 0;
  Eigen::MatrixXd edge_weight;  // upper triangle used
  double big_g = 0.0;           // shift making every edge weight positive
};

// Transforms an equal-weight model from build_ewccmvfm / build_ewccmvsf into
// a clique instance whose k-clique argmax is the equal-weight argmin.
MewcpInstance to_mewcp(const OptimizationModel& ew_model, int K);

// Worst-case gap between the piecewise objective (TwoSided pricing) and the
// exact objective at any fixed feasible point.
double approximation_error_bound(const MultiFactorModel& model, int K, const SegmentGrid& grid, bool with_w_grid);

void export_lp(const OptimizationModel& model, std::ostream& out);
void export_lp_file(const OptimizationModel& model, const std::string& path);

/// {"model","N","NF","K","n01","nc","m"} as a JSON object string.
std::string dimension_report(const OptimizationModel& model);

// Decoding helpers: map a solver point back to portfolio weights.
std::vector<double> weights_from_point(const OptimizationModel& model, const SegmentGrid* grid,
                                       std::span<const double> x);
std::vector<int> support_of_weights(std::span<const double> w, double tol = 1e-9);

}  // namespace ccmv
