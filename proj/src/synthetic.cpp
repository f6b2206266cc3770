#include "ccmv/synthetic.hpp"

#include <cmath>

#include "ccmv/errors.hpp"

namespace ccmv {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_double();
  while (u1 <= 1e-300) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

PriceTable generate_price_table(const PriceGenParams& p) {
  if (p.n_assets < 1 || p.n_periods < 2) raise(ErrorKind::Argument, "generate_price_table: degenerate shape");
  Rng rng(p.seed);

  const int n = p.n_assets, T = p.n_periods;
  std::vector<double> beta(n), idio_vol(n), alpha(n);
  for (int i = 0; i < n; ++i) {
    beta[i] = rng.uniform(p.beta_lo, p.beta_hi);
    // anti-correlation between loading and idiosyncratic risk, plus noise
    const double rel = (p.beta_hi - beta[i]) / (p.beta_hi - p.beta_lo);
    const double base = p.idio_vol_lo + (p.idio_vol_hi - p.idio_vol_lo) *
                                            std::min(1.0, std::max(0.0, p.idio_beta_slope * rel +
                                                                             (1.0 - p.idio_beta_slope) * rng.next_double()));
    idio_vol[i] = base;
    alpha[i] = rng.uniform(-0.0005, 0.001);
  }

  PriceTable table;
  table.n_assets = n;
  table.n_periods = T;
  table.source_name = "synthetic";
  table.index_prices.resize(T);
  table.asset_prices.assign(T, std::vector<double>(n));

  double index_level = 100.0;
  std::vector<double> level(n, 0.0);
  for (int i = 0; i < n; ++i) level[i] = rng.uniform(5.0, 500.0);

  for (int t = 0; t < T; ++t) {
    table.index_prices[t] = index_level;
    for (int i = 0; i < n; ++i) table.asset_prices[t][i] = level[i];
    if (t + 1 == T) break;
    const double f = p.index_drift + p.index_vol * rng.normal();
    index_level *= std::exp(f);
    for (int i = 0; i < n; ++i) {
      const double r = alpha[i] + beta[i] * f + idio_vol[i] * rng.normal();
      level[i] *= std::exp(r);
    }
  }
  return table;
}

SingleFactorModel random_sf_instance(Rng& rng, int n) {
  SingleFactorModel m;
  m.sigma_f2 = rng.uniform(0.3, 1.5);
  m.beta.resize(n);
  m.alpha.assign(n, 0.0);
  m.sigma_eps2.resize(n);
  for (int i = 0; i < n; ++i) {
    m.beta[i] = 1.0 + 0.45 * rng.normal();
    if (rng.next_double() < 0.12) m.beta[i] = -std::abs(m.beta[i]) * 0.5;
    m.sigma_eps2[i] = rng.uniform(0.05, 2.0);
  }
  m.source_name = "random";
  return m;
}

MultiFactorModel random_mf_model(Rng& rng, int n, int m, bool correlated) {
  MultiFactorModel model;
  model.loadings.resize(m, n);
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < n; ++i) model.loadings(l, i) = rng.uniform(-1.0, 1.5);
  model.factor_cov = Eigen::MatrixXd::Zero(m, m);
  if (correlated) {
    Eigen::MatrixXd g(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) g(a, b) = rng.normal();
    model.factor_cov = g * g.transpose() / m;
    for (int a = 0; a < m; ++a) model.factor_cov(a, a) += 0.05;
    model.uncorrelated = false;
  } else {
    for (int a = 0; a < m; ++a) model.factor_cov(a, a) = rng.uniform(0.2, 1.5);
    model.uncorrelated = true;
  }
  model.sigma_eps2.resize(n);
  model.alpha.assign(n, 0.0);
  for (int i = 0; i < n; ++i) model.sigma_eps2[i] = rng.uniform(0.05, 2.0);
  model.source_name = "random";
  return model;
}

}  // namespace ccmv
