#include "ccmv/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "ccmv/errors.hpp"

namespace ccmv {

namespace {

double beta_sum_of(const SingleFactorModel& m, std::span<const int> s) {
  double b = 0.0;
  for (int i : s) b += m.beta[i];
  return b;
}

bool contains(std::span<const int> s, int v) { return std::find(s.begin(), s.end(), v) != s.end(); }

double normalized(double unnorm, int k) { return unnorm / (static_cast<double>(k) * k); }

}  // namespace

double subset_objective(const SingleFactorModel& model, std::span<const int> support) {
  double idio = 0.0;
  for (int i : support) idio += model.sigma_eps2[i];
  const double b = beta_sum_of(model, support);
  return idio + model.sigma_f2 * b * b;
}

double delta_remove(const SingleFactorModel& model, std::span<const int> support, int j) {
  if (!contains(support, j)) raise(ErrorKind::Argument, "delta_remove: j not in support");
  const double b = beta_sum_of(model, support);
  const double b_without = b - model.beta[j];
  return model.sigma_eps2[j] + model.sigma_f2 * (b * b - b_without * b_without);
}

double delta_swap(const SingleFactorModel& model, std::span<const int> support, int i, int j) {
  if (contains(support, i) || contains(support, j)) raise(ErrorKind::Argument, "delta_swap: i or j already in S");
  const double b = beta_sum_of(model, support);
  const double bi = b + model.beta[i];
  const double bj = b + model.beta[j];
  return model.sigma_eps2[i] - model.sigma_eps2[j] + model.sigma_f2 * (bi * bi - bj * bj);
}

HeuristicTrace algorithm1(const SingleFactorModel& model, int K) {
  const int n = model.n();
  if (K < 1 || K > n) raise(ErrorKind::Argument, "cardinality outside [1, n]");

  // start from the K smallest betas, ties by index
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return model.beta[a] < model.beta[b]; });
  std::vector<int> support(order.begin(), order.begin() + K);
  std::sort(support.begin(), support.end());

  std::vector<char> selected(n, 0);
  for (int i : support) selected[i] = 1;

  HeuristicTrace trace;
  double obj = subset_objective(model, support);
  trace.objective_history.push_back(normalized(obj, K));

  while (true) {
    const double beta_s = beta_sum_of(model, support);
    const double tol = 1e-12 * (1.0 + std::abs(obj));

    // removal candidates by descending contribution (argmax first)
    std::vector<std::pair<double, int>> removals;
    removals.reserve(K);
    for (int j : support) {
      const double bw = beta_s - model.beta[j];
      removals.emplace_back(model.sigma_eps2[j] + model.sigma_f2 * (beta_s * beta_s - bw * bw), j);
    }
    std::sort(removals.begin(), removals.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });

    bool swapped = false;
    for (const auto& [gain, j_out] : removals) {
      const double b_rem = beta_s - model.beta[j_out];
      // best insertion for this removal: smallest resulting objective, ties by index
      int i_in = -1;
      double best_add = 0.0;
      for (int i = 0; i < n; ++i) {
        if (selected[i]) continue;
        const double b_new = b_rem + model.beta[i];
        const double add = model.sigma_eps2[i] + model.sigma_f2 * (b_new * b_new - b_rem * b_rem);
        if (i_in < 0 || add < best_add) {
          best_add = add;
          i_in = i;
        }
      }
      if (i_in < 0) break;  // K == n, nothing outside
      if (gain - best_add > tol) {
        selected[j_out] = 0;
        selected[i_in] = 1;
        support.erase(std::find(support.begin(), support.end(), j_out));
        support.insert(std::lower_bound(support.begin(), support.end(), i_in), i_in);
        obj = obj - gain + best_add;
        trace.steps.push_back({j_out, i_in, normalized(obj, K)});
        trace.objective_history.push_back(normalized(obj, K));
        swapped = true;
        break;
      }
    }
    if (!swapped) break;
  }

  trace.support = support;
  trace.final_k = K;
  trace.objective = normalized(subset_objective(model, support), K);
  return trace;
}

HeuristicTrace algorithm2(const SingleFactorModel& model, std::span<const int> support) {
  std::vector<int> s(support.begin(), support.end());
  std::sort(s.begin(), s.end());

  HeuristicTrace trace;
  int k = static_cast<int>(s.size());
  if (k == 0) raise(ErrorKind::Argument, "algorithm2: empty support");
  double obj = subset_objective(model, s);
  trace.objective_history.push_back(normalized(obj, k));

  while (k >= 2) {
    const double beta_s = beta_sum_of(model, s);
    int worst = -1;
    double worst_gain = 0.0;
    for (int j : s) {
      const double bw = beta_s - model.beta[j];
      const double gain = model.sigma_eps2[j] + model.sigma_f2 * (beta_s * beta_s - bw * bw);
      if (worst < 0 || gain > worst_gain) {
        worst_gain = gain;
        worst = j;
      }
    }

    const double obj_smaller = obj - worst_gain;
    const double ratio = (static_cast<double>(k) * k) / (static_cast<double>(k - 1) * (k - 1));
    const double tol = 1e-12 * (1.0 + std::abs(obj));
    if (obj > ratio * obj_smaller + tol) {
      s.erase(std::find(s.begin(), s.end(), worst));
      --k;
      obj = obj_smaller;
      trace.steps.push_back({worst, -1, normalized(obj, k)});
      trace.objective_history.push_back(normalized(obj, k));
    } else {
      break;
    }
  }

  trace.support = s;
  trace.final_k = k;
  trace.objective = normalized(subset_objective(model, s), k);
  return trace;
}

void write_trace_csv(const HeuristicTrace& trace, std::ostream& out) {
  char buf[40];
  out << "iter,removed,inserted,objective\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const SwapStep& s = trace.steps[i];
    std::snprintf(buf, sizeof buf, "%.17g", s.objective_after);
    out << (i + 1) << ',' << s.removed << ',' << (s.inserted < 0 ? std::string("-") : std::to_string(s.inserted))
        << ',' << buf << '\n';
  }
}

}  // namespace ccmv
