#include "ccmv/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ccmv/errors.hpp"
#include "ccmv/factor_fit.hpp"
#include "ccmv/simplex.hpp"

namespace ccmv {

namespace {

struct Best {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<int> support;

  // min by objective, ties by lexicographically smaller support; exact
  // comparisons keep the merge order-independent
  void consider(double obj, const std::vector<int>& subset) {
    if (obj < objective || (obj == objective && (support.empty() || subset < support))) {
      objective = obj;
      support = subset;
    }
  }
  void merge(const Best& other) {
    if (!other.support.empty()) consider(other.objective, other.support);
  }
};

// Enumerates k-combinations of {first..n-1} appended to a prefix, lex order.
template <typename Eval>
void enumerate_rec(int n, int k, int first, std::vector<int>& combo, const Eval& eval) {
  if (k == 0) {
    eval(combo);
    return;
  }
  for (int v = first; v <= n - k; ++v) {
    combo.push_back(v);
    enumerate_rec(n, k - 1, v + 1, combo, eval);
    combo.pop_back();
  }
}

double check_ew_cap(int n, int K, long long n_cap, const char* what) {
  if (K < 1 || K > n) raise(ErrorKind::Argument, "cardinality outside [1, n]");
  const unsigned long long cap = static_cast<unsigned long long>(n_cap);
  const unsigned long long count = n_choose_k_capped(n, K, cap);
  if (count > cap)
    raise(ErrorKind::CapExceeded, std::string(what) + ": C(n,K) exceeds evaluation cap of " +
                                      std::to_string(n_cap) + " (needs " + std::to_string(count) + "+)");
  return static_cast<double>(count);
}

template <typename Obj>
SubsetSolution ew_search_serial(int n, int K, const Obj& subset_obj, long long n_cap, const char* what) {
  check_ew_cap(n, K, n_cap, what);
  Best best;
  long long count = 0;
  std::vector<int> combo;
  combo.reserve(K);
  enumerate_rec(n, K, 0, combo, [&](const std::vector<int>& c) {
    ++count;
    best.consider(subset_obj(c), c);
  });
  SubsetSolution sol;
  sol.support = best.support;
  sol.objective = best.objective;
  sol.evaluated = count;
  sol.weights.assign(n, 0.0);
  for (int i : sol.support) sol.weights[i] = 1.0 / K;
  return sol;
}

template <typename Obj>
SubsetSolution ew_search_parallel(int n, int K, const Obj& subset_obj, long long n_cap, const char* what) {
  check_ew_cap(n, K, n_cap, what);
  Best best;
  long long count = 0;

#pragma omp parallel
  {
    Best local;
    long long local_count = 0;
    std::vector<int> combo;
    combo.reserve(K);
#pragma omp for schedule(dynamic, 1) nowait
    for (int lead = 0; lead <= n - K; ++lead) {
      combo.assign(1, lead);
      enumerate_rec(n, K - 1, lead + 1, combo, [&](const std::vector<int>& c) {
        ++local_count;
        local.consider(subset_obj(c), c);
      });
    }
#pragma omp critical
    {
      best.merge(local);
      count += local_count;
    }
  }

  SubsetSolution sol;
  sol.support = best.support;
  sol.objective = best.objective;
  sol.evaluated = count;
  sol.weights.assign(n, 0.0);
  for (int i : sol.support) sol.weights[i] = 1.0 / K;
  return sol;
}

}  // namespace

unsigned long long n_choose_k_capped(int n, int k, unsigned long long cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long c = 1;
  for (int i = 1; i <= k; ++i) {
    const double projected = static_cast<double>(c) * (n - k + i) / i;
    if (projected > static_cast<double>(cap) * 2.0 + 1.0) return cap + 1;
    c = c * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
    if (c > cap) return cap + 1;
  }
  return c;
}

SubsetSolution brute_force_ew_serial(const SingleFactorModel& model, int K, long long n_cap) {
  const auto obj = [&](const std::vector<int>& c) { return ew_objective(model, c); };
  return ew_search_serial(model.n(), K, obj, n_cap, "brute_force_ew");
}

SubsetSolution brute_force_ew_serial(const MultiFactorModel& model, int K, long long n_cap) {
  const auto obj = [&](const std::vector<int>& c) { return ew_objective(model, c); };
  return ew_search_serial(model.n(), K, obj, n_cap, "brute_force_ew");
}

SubsetSolution brute_force_ew(const SingleFactorModel& model, int K, long long n_cap) {
  const auto obj = [&](const std::vector<int>& c) { return ew_objective(model, c); };
  return ew_search_parallel(model.n(), K, obj, n_cap, "brute_force_ew");
}

SubsetSolution brute_force_ew(const MultiFactorModel& model, int K, long long n_cap) {
  const auto obj = [&](const std::vector<int>& c) { return ew_objective(model, c); };
  return ew_search_parallel(model.n(), K, obj, n_cap, "brute_force_ew");
}

std::vector<double> qp_support(const Eigen::MatrixXd& sigma, std::span<const int> support) {
  if (support.empty()) raise(ErrorKind::Argument, "qp_support: empty support");
  const int n = static_cast<int>(sigma.rows());
  for (int i : support)
    if (i < 0 || i >= n) raise(ErrorKind::Argument, "qp_support: index out of range");

  std::vector<int> active(support.begin(), support.end());
  std::sort(active.begin(), active.end());

  std::vector<double> w(n, 0.0);
  while (true) {
    const int k = static_cast<int>(active.size());
    if (k == 1) {
      w.assign(n, 0.0);
      w[active[0]] = 1.0;
      return w;
    }

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) kkt(a, b) = 2.0 * sigma(active[a], active[b]);
      kkt(a, k) = 1.0;
      kkt(k, a) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    rhs[k] = 1.0;

    Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    if (!((kkt * sol - rhs).cwiseAbs().maxCoeff() <= 1e-8)) {
      // singular system: ridge retry on the covariance block
      Eigen::MatrixXd reg = kkt;
      for (int a = 0; a < k; ++a) reg(a, a) += 2.0 * 1e-12;
      sol = reg.partialPivLu().solve(rhs);
      if (!((reg * sol - rhs).cwiseAbs().maxCoeff() <= 1e-8))
        raise(ErrorKind::Numerical, "qp_support: singular KKT system");
    }

    int worst = -1;
    double worst_w = -1e-10;
    for (int a = 0; a < k; ++a)
      if (sol[a] < worst_w) {
        worst_w = sol[a];
        worst = a;
      }
    if (worst >= 0) {
      active.erase(active.begin() + worst);
      continue;
    }

    w.assign(n, 0.0);
    double total = 0.0;
    for (int a = 0; a < k; ++a) {
      w[active[a]] = std::max(sol[a], 0.0);
      total += w[active[a]];
    }
    for (double& v : w) v /= total;
    return w;
  }
}

std::vector<double> qp_support(const MultiFactorModel& model, std::span<const int> support) {
  return qp_support(implied_covariance(model), support);
}

SubsetSolution brute_force_ccmv(const MultiFactorModel& model, int K, long long n_cap) {
  const int n = model.n();
  if (K < 1 || K > n) raise(ErrorKind::Argument, "cardinality outside [1, n]");
  unsigned long long total = 0;
  for (int k = 1; k <= K; ++k) {
    total += n_choose_k_capped(n, k, static_cast<unsigned long long>(n_cap));
    if (total > static_cast<unsigned long long>(n_cap))
      raise(ErrorKind::CapExceeded, "brute_force_ccmv: support enumeration exceeds cap of " + std::to_string(n_cap));
  }

  const Eigen::MatrixXd sigma = implied_covariance(model);
  Best best;
  long long count = 0;
  std::vector<double> best_weights;
  std::vector<int> combo;
  for (int k = 1; k <= K; ++k) {
    combo.clear();
    enumerate_rec(n, k, 0, combo, [&](const std::vector<int>& c) {
      ++count;
      const std::vector<double> w = qp_support(sigma, c);
      double obj = 0.0;
      for (int a : c)
        for (int b : c) obj += w[a] * sigma(a, b) * w[b];
      const bool better =
          obj < best.objective || (obj == best.objective && (best.support.empty() || c < best.support));
      if (better) best_weights = w;
      best.consider(obj, c);
    });
  }

  SubsetSolution sol;
  sol.support = best.support;
  sol.objective = best.objective;
  sol.weights = best_weights;
  sol.evaluated = count;
  return sol;
}

RelaxationSolution solve_relaxation_sf(const SingleFactorModel& model, int K) {
  const int n = model.n();
  if (K < 1 || K > n) raise(ErrorKind::Argument, "cardinality outside [1, n]");

  std::vector<double> beta_sorted = model.beta;
  std::sort(beta_sorted.begin(), beta_sorted.end());
  double b_lo = 0.0, b_hi = 0.0;
  for (int i = 0; i < K; ++i) {
    b_lo += beta_sorted[i];
    b_hi += beta_sorted[n - 1 - i];
  }

  // inner LP: cheapest idiosyncratic mass at a fixed achieved beta sum
  OptimizationModel lp;
  lp.name = "relaxation-inner";
  lp.n_assets = n;
  lp.cardinality = K;
  for (int i = 0; i < n; ++i) lp.add_var("x_" + std::to_string(i), VarKind::Continuous, 0.0, 1.0);
  {
    std::vector<std::pair<int, double>> card(n), link(n);
    for (int i = 0; i < n; ++i) {
      card[i] = {i, 1.0};
      link[i] = {i, model.beta[i]};
    }
    lp.add_con("card", std::move(card), ConstraintSense::Eq, static_cast<double>(K));
    lp.add_con("beta", std::move(link), ConstraintSense::Eq, 0.0);
  }
  for (int i = 0; i < n; ++i) lp.obj_linear[i] = model.sigma_eps2[i];
  lp.finalize();

  const double inv_k2 = 1.0 / (static_cast<double>(K) * K);
  const auto value_at = [&](double b) -> std::pair<double, LpSolution> {
    lp.cons[1].rhs = std::clamp(b, b_lo, b_hi);
    LpSolution s = solve_lp(lp, false);
    if (s.status != LpStatus::Optimal)
      raise(ErrorKind::Numerical, "relaxation inner LP failed inside the achievable bracket");
    return {inv_k2 * (model.sigma_f2 * b * b + s.objective), std::move(s)};
  };

  double a = b_lo, b = b_hi;
  if (b - a > 0.0) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = value_at(c).first, fd = value_at(d).first;
    for (int it = 0; it < 200 && (b - a) > 1e-10 * (b_hi - b_lo); ++it) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = value_at(c).first;
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = value_at(d).first;
      }
    }
  }

  const double b_star = 0.5 * (a + b);
  auto [obj, inner] = value_at(b_star);

  RelaxationSolution out;
  out.x = inner.x;
  out.objective = obj;
  out.beta_sum = b_star;
  for (double v : inner.x)
    if (v > 1e-6 && v < 1.0 - 1e-6) ++out.fractional_count;
  return out;
}

SubsetSolution brute_force_mewcp(const MewcpInstance& instance, long long n_cap) {
  const int n = instance.n;
  const int k = instance.k;
  check_ew_cap(n, k, n_cap, "brute_force_mewcp");

  // maximize: flip sign and reuse the min-merge with lex tie-break
  Best best;
  long long count = 0;
  std::vector<int> combo;
  combo.reserve(k);
  const auto eval = [&](const std::vector<int>& c) {
    ++count;
    double w = 0.0;
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b) w += instance.edge_weight(c[a], c[b]);
    best.consider(-w, c);
  };
  enumerate_rec(n, k, 0, combo, eval);

  SubsetSolution sol;
  sol.support = best.support;
  sol.objective = -best.objective;
  sol.evaluated = count;
  sol.weights.assign(n, 0.0);
  for (int i : sol.support) sol.weights[i] = 1.0 / k;
  return sol;
}

}  // namespace ccmv
