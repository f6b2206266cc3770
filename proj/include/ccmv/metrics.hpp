#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccmv/prices.hpp"

namespace ccmv {

/// 100 * (obj - obj_ref) / obj_ref; empty when the reference is zero.
std::optional<double> pct_desv(double obj, double obj_ref);

/// sqrt(w' Sigma w); tiny negative quadratic forms are clipped, anything
/// below -1e-12 raises.
double portfolio_sd(std::span<const double> w, const Eigen::MatrixXd& sigma);

/// w'R / sd; empty when sd is zero.
std::optional<double> sharpe_ratio(std::span<const double> w, std::span<const double> mean_returns,
                                   const Eigen::MatrixXd& sigma);

double l1_distance(std::span<const double> w, std::span<const double> w_ref);
int overlap(std::span<const int> support, std::span<const int> support_ref);

/// Sample covariance of asset returns, 1/(T-1) convention.
Eigen::MatrixXd sample_covariance(const ReturnTable& returns);

/// Portfolio standard deviation straight from the return series; equals
/// portfolio_sd with the sample covariance.
double portfolio_sd_series(std::span<const double> w, const ReturnTable& returns);

struct SolutionReport {
  std::string model_name;
  double time_seconds = 0.0;
  double objective = 0.0;
  std::optional<double> pct_desv;
  int k_solution = 0;
  std::optional<int> k_overlap;  // assets shared with the reference solution
  std::optional<double> l1;
  std::optional<double> sd;
  std::optional<double> sd_pct_desv;
  std::optional<double> sr;
};

enum class TableFormat { Csv, Markdown };

// One row per report; objective and SD printed with 5 decimals, '.' decimal
// separator regardless of locale.
std::string emit_table(std::span<const SolutionReport> reports, TableFormat format);

}  // namespace ccmv
