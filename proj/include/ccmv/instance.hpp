#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ccmv {

/// Single-factor estimates: r_i = alpha_i + beta_i * f + eps_i with
/// E(f)=0, E(f^2)=sigma_f2, E(eps_i^2)=sigma_eps2[i].
struct SingleFactorModel {
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<double> sigma_eps2;
  double sigma_f2 = 1.0;
  std::string source_name;

  int n() const { return static_cast<int>(beta.size()); }
};

/// Multi-factor estimates: loadings(l, i) is the loading of asset i on
/// factor l; factor_cov is the m x m factor covariance.
struct MultiFactorModel {
  Eigen::MatrixXd loadings;    // m x n
  Eigen::MatrixXd factor_cov;  // m x m, symmetric PSD
  std::vector<double> sigma_eps2;
  std::vector<double> alpha;
  bool uncorrelated = false;
  std::string source_name;

  int n() const { return static_cast<int>(loadings.cols()); }
  int m() const { return static_cast<int>(loadings.rows()); }
};

MultiFactorModel as_multi(const SingleFactorModel& sf);

/// Equal-weight objective of a K-subset: (1/K^2) (B' Sigma_F B + sum sigma_eps2)
/// with B_l = sum of loadings over the subset.
double ew_objective(const MultiFactorModel& model, std::span<const int> support);
double ew_objective(const SingleFactorModel& model, std::span<const int> support);

// Merges per-dataset single-factor estimates into one instance on common
// coordinates: beta pre-scaled by each dataset's sigma_f, sigma_f2 = 1.
SingleFactorModel concat_instances(const std::vector<SingleFactorModel>& instances);

// Re-pairs the instance so beta is ascending and sigma_eps2 descending;
// the resulting point set is mutually Pareto non-dominated.
SingleFactorModel build_adhoc(const SingleFactorModel& instance);

// CSV with header asset,beta,alpha,sigma_eps2; '#' lines carry metadata
// (sigma_f2, source). Round-trips through read_instance_csv.
void write_instance_csv(const SingleFactorModel& instance, std::ostream& out);
SingleFactorModel read_instance_csv(std::istream& in);
SingleFactorModel read_instance_csv_file(const std::string& path);

}  // namespace ccmv
