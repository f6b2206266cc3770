#include "ccmv/factor_fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ccmv/errors.hpp"
#include "ccmv/log.hpp"

namespace ccmv {

namespace {

struct AssetFit {
  double beta, alpha, sigma_eps2;
  bool clipped = false;
};

// One asset's regression against the centered factor; fixed summation order
// so results are identical no matter which thread runs it.
AssetFit fit_one_asset(const ReturnTable& r, const std::vector<double>& f, double var_f, int asset) {
  const int T = r.n_periods_returns;
  double mean = 0.0;
  for (int t = 0; t < T; ++t) mean += r.asset_returns[t][asset];
  mean /= T;

  double cov = 0.0, var = 0.0;
  for (int t = 0; t < T; ++t) {
    const double d = r.asset_returns[t][asset] - mean;
    cov += d * f[t];
    var += d * d;
  }
  cov /= (T - 1);
  var /= (T - 1);

  AssetFit out;
  out.beta = cov / var_f;
  out.alpha = mean;
  const double resid = var - out.beta * out.beta * var_f;
  out.sigma_eps2 = std::max(0.0, resid);
  out.clipped = resid < 0.0;
  return out;
}

struct CenteredFactor {
  std::vector<double> f;  // index returns minus their mean
  double var_f = 0.0;
};

CenteredFactor center_index(const ReturnTable& r) {
  const int T = r.n_periods_returns;
  if (T < 3) raise(ErrorKind::InsufficientData, "need at least 3 return periods");
  CenteredFactor c;
  c.f.resize(T);
  double mean = 0.0;
  for (double v : r.index_returns) mean += v;
  mean /= T;
  double var = 0.0;
  for (int t = 0; t < T; ++t) {
    c.f[t] = r.index_returns[t] - mean;
    var += c.f[t] * c.f[t];
  }
  c.var_f = var / (T - 1);
  if (c.var_f <= 0.0) raise(ErrorKind::DegenerateFactor, "index returns are constant");
  return c;
}

SingleFactorModel assemble(const ReturnTable& r, const CenteredFactor& c, bool parallel) {
  const int n = r.n_assets;
  SingleFactorModel m;
  m.sigma_f2 = c.var_f;
  m.source_name = r.source_name;
  m.beta.resize(n);
  m.alpha.resize(n);
  m.sigma_eps2.resize(n);

  long clipped = 0;
#pragma omp parallel for schedule(static) reduction(+ : clipped) if (parallel && n > 64)
  for (int i = 0; i < n; ++i) {
    const AssetFit fit = fit_one_asset(r, c.f, c.var_f, i);
    m.beta[i] = fit.beta;
    m.alpha[i] = fit.alpha;
    m.sigma_eps2[i] = fit.sigma_eps2;
    if (fit.clipped) ++clipped;
  }
  if (clipped > 0)
    log_warning(std::to_string(clipped) + " negative residual variances clipped to 0");
  return m;
}

}  // namespace

SingleFactorModel fit_single_index(const ReturnTable& returns) {
  return assemble(returns, center_index(returns), true);
}

SingleFactorModel fit_single_index_serial(const ReturnTable& returns) {
  return assemble(returns, center_index(returns), false);
}

MultiFactorModel fit_pca_factors(const ReturnTable& returns, int m) {
  const int T = returns.n_periods_returns;
  const int n = returns.n_assets;
  if (m < 1 || m > std::min(n, T - 1))
    raise(ErrorKind::Argument, "factor count " + std::to_string(m) + " outside [1, min(n, T-1)]");

  // Centered return matrix X (T x n), then dual PCA on the T x T Gram X X'.
  Eigen::MatrixXd X(T, n);
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int t = 0; t < T; ++t) mean += returns.asset_returns[t][i];
    mean /= T;
    for (int t = 0; t < T; ++t) X(t, i) = returns.asset_returns[t][i] - mean;
  }

  const Eigen::MatrixXd gram = X * X.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) raise(ErrorKind::Numerical, "Gram eigendecomposition failed");

  // SelfAdjointEigenSolver sorts ascending; take the top m.
  MultiFactorModel model;
  model.loadings.setZero(m, n);
  model.factor_cov.setZero(m, m);
  model.alpha.resize(n);
  model.sigma_eps2.assign(n, 0.0);
  model.uncorrelated = true;
  model.source_name = returns.source_name;

  const double top = std::max(eig.eigenvalues()(T - 1), 0.0);
  for (int l = 0; l < m; ++l) {
    const double lambda = std::max(eig.eigenvalues()(T - 1 - l), 0.0);
    const double s = std::sqrt(lambda);  // singular value of X
    model.factor_cov(l, l) = lambda / (T - 1);
    if (s <= 1e-14 * std::sqrt(std::max(top, 1e-300))) continue;  // rank-deficient: zero factor

    Eigen::VectorXd v = X.transpose() * eig.eigenvectors().col(T - 1 - l) / s;
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    if (v(arg) < 0.0) v = -v;
    model.loadings.row(l) = v.transpose();
  }

  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int t = 0; t < T; ++t) mean += returns.asset_returns[t][i];
    model.alpha[i] = mean / T;

    const double var = X.col(i).squaredNorm() / (T - 1);
    double explained = 0.0;
    for (int l = 0; l < m; ++l) explained += model.loadings(l, i) * model.loadings(l, i) * model.factor_cov(l, l);
    model.sigma_eps2[i] = std::max(0.0, var - explained);
  }
  return model;
}

Eigen::MatrixXd implied_covariance(const MultiFactorModel& model) {
  Eigen::MatrixXd sigma = model.loadings.transpose() * model.factor_cov * model.loadings;
  for (int i = 0; i < model.n(); ++i) sigma(i, i) += model.sigma_eps2[i];
  // fold symmetry exactly
  sigma = 0.5 * (sigma + Eigen::MatrixXd(sigma.transpose()));
  return sigma;
}

Eigen::MatrixXd implied_covariance(const SingleFactorModel& model) { return implied_covariance(as_multi(model)); }

void write_loadings_csv(const MultiFactorModel& model, std::ostream& out) {
  char buf[40];
  out << "asset";
  for (int l = 0; l < model.m(); ++l) out << ",beta_" << (l + 1);
  out << ",alpha,sigma_eps2\n";
  for (int i = 0; i < model.n(); ++i) {
    out << i;
    for (int l = 0; l < model.m(); ++l) {
      std::snprintf(buf, sizeof buf, "%.17g", model.loadings(l, i));
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", model.alpha.empty() ? 0.0 : model.alpha[i]);
    out << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.17g", model.sigma_eps2[i]);
    out << ',' << buf << '\n';
  }
}

void write_factor_cov_csv(const MultiFactorModel& model, std::ostream& out) {
  char buf[40];
  for (int l = 0; l < model.m(); ++l) {
    for (int j = 0; j < model.m(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", model.factor_cov(l, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_scatter_csv(const SingleFactorModel& instance, std::ostream& out) {
  char buf[40];
  const double sf = std::sqrt(instance.sigma_f2);
  out << "asset,beta_sigma_f,sigma_eps2\n";
  for (int i = 0; i < instance.n(); ++i) {
    out << i;
    std::snprintf(buf, sizeof buf, "%.17g", instance.beta[i] * sf);
    out << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.17g", instance.sigma_eps2[i]);
    out << ',' << buf << '\n';
  }
}

}  // namespace ccmv
