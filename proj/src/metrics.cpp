#include "ccmv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ccmv/errors.hpp"

namespace ccmv {

std::optional<double> pct_desv(double obj, double obj_ref) {
  if (obj_ref == 0.0) return std::nullopt;
  return 100.0 * (obj - obj_ref) / obj_ref;
}

double portfolio_sd(std::span<const double> w, const Eigen::MatrixXd& sigma) {
  if (static_cast<Eigen::Index>(w.size()) != sigma.rows() || sigma.rows() != sigma.cols())
    raise(ErrorKind::Argument, "portfolio_sd: weight/covariance size mismatch");
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const double q = wv.dot(sigma * wv);
  if (q < -1e-12) raise(ErrorKind::Numerical, "portfolio_sd: negative quadratic form " + std::to_string(q));
  return std::sqrt(std::max(q, 0.0));
}

std::optional<double> sharpe_ratio(std::span<const double> w, std::span<const double> mean_returns,
                                   const Eigen::MatrixXd& sigma) {
  if (w.size() != mean_returns.size()) raise(ErrorKind::Argument, "sharpe_ratio: size mismatch");
  const double sd = portfolio_sd(w, sigma);
  if (sd == 0.0) return std::nullopt;
  double ret = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) ret += w[i] * mean_returns[i];
  return ret / sd;
}

double l1_distance(std::span<const double> w, std::span<const double> w_ref) {
  if (w.size() != w_ref.size()) raise(ErrorKind::Argument, "l1_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += std::abs(w[i] - w_ref[i]);
  return s;
}

int overlap(std::span<const int> support, std::span<const int> support_ref) {
  std::vector<int> a(support.begin(), support.end()), b(support_ref.begin(), support_ref.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<int> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return static_cast<int>(both.size());
}

Eigen::MatrixXd sample_covariance(const ReturnTable& returns) {
  const int T = returns.n_periods_returns;
  const int n = returns.n_assets;
  if (T < 2) raise(ErrorKind::InsufficientData, "sample_covariance: need at least 2 return periods");
  Eigen::MatrixXd x(T, n);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < T; ++t) x(t, i) = returns.asset_returns[t][i] - returns.mean_returns[i];
  Eigen::MatrixXd sigma = (x.transpose() * x) / (T - 1);
  sigma = 0.5 * (sigma + Eigen::MatrixXd(sigma.transpose()));
  return sigma;
}

double portfolio_sd_series(std::span<const double> w, const ReturnTable& returns) {
  if (static_cast<int>(w.size()) != returns.n_assets) raise(ErrorKind::Argument, "weight size mismatch");
  const int T = returns.n_periods_returns;
  std::vector<double> series(T, 0.0);
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < returns.n_assets; ++i) series[t] += w[i] * returns.asset_returns[t][i];
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= T;
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  return std::sqrt(var / (T - 1));
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string opt_fixed(const std::optional<double>& v, int decimals, const char* empty) {
  return v ? fixed(*v, decimals) : std::string(empty);
}

}  // namespace

std::string emit_table(std::span<const SolutionReport> reports, TableFormat format) {
  std::ostringstream os;
  if (format == TableFormat::Csv) {
    os << "model,time,obj,pct_desv,k,overlap,l1,sd,sd_pct_desv,sr\n";
    for (const auto& r : reports) {
      os << r.model_name << ',' << fixed(r.time_seconds, 2) << ',' << fixed(r.objective, 5) << ','
         << opt_fixed(r.pct_desv, 2, "") << ',' << r.k_solution << ','
         << (r.k_overlap ? std::to_string(*r.k_overlap) : std::string()) << ',' << opt_fixed(r.l1, 2, "") << ','
         << opt_fixed(r.sd, 5, "") << ',' << opt_fixed(r.sd_pct_desv, 2, "") << ',' << opt_fixed(r.sr, 5, "")
         << '\n';
    }
  } else {
    os << "| model | time | obj | %desv | K | L1 | SD | %desv | SR |\n";
    os << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
      os << "| " << r.model_name << " | " << fixed(r.time_seconds, 2) << " | " << fixed(r.objective, 5) << " | "
         << opt_fixed(r.pct_desv, 2, "-") << " | " << r.k_solution
         << (r.k_overlap ? " - " + std::to_string(*r.k_overlap) : std::string()) << " | " << opt_fixed(r.l1, 2, "-")
         << " | " << opt_fixed(r.sd, 5, "-") << " | " << opt_fixed(r.sd_pct_desv, 2, "-") << " | "
         << opt_fixed(r.sr, 5, "-") << " |\n";
    }
  }
  return os.str();
}

}  // namespace ccmv
