#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "ccmv/instance.hpp"
#include "ccmv/prices.hpp"

namespace ccmv {

// Single-index regression against the demeaned index return. Sample moments
// use the 1/(T-1) convention; negative residual variances are clipped to 0.
// The default entry point runs the per-asset loop in parallel when OpenMP is
// enabled; the serial variant is the reference the tests compare against.
SingleFactorModel fit_single_index(const ReturnTable& returns);
SingleFactorModel fit_single_index_serial(const ReturnTable& returns);

// First m principal components of the centered asset-return matrix via the
// T x T Gram matrix. Factors come out uncorrelated (diagonal factor_cov);
// each loading vector is sign-flipped so its largest-magnitude entry is
// positive.
MultiFactorModel fit_pca_factors(const ReturnTable& returns, int m);

/// Sigma_r = B' Sigma_F B + diag(sigma_eps2).
Eigen::MatrixXd implied_covariance(const MultiFactorModel& model);
Eigen::MatrixXd implied_covariance(const SingleFactorModel& model);

// Estimate emitters: loadings CSV (asset,beta_1..beta_m,alpha,sigma_eps2)
// and the factor covariance as a bare matrix CSV.
void write_loadings_csv(const MultiFactorModel& model, std::ostream& out);
void write_factor_cov_csv(const MultiFactorModel& model, std::ostream& out);

/// Scatter export: asset,beta_sigma_f,sigma_eps2 (the per-asset risk plane).
void write_scatter_csv(const SingleFactorModel& instance, std::ostream& out);

}  // namespace ccmv
