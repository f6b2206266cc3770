#include "ccmv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ccmv/errors.hpp"
#include "ccmv/exact.hpp"

namespace ccmv {

namespace {

// Orientation of (a->b, a->c); falls back to extended precision when the
// double cross product is too close to zero to trust.
double orient(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
  const double v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  const double mag = std::abs(b[0] - a[0]) * std::abs(c[1] - a[1]) + std::abs(b[1] - a[1]) * std::abs(c[0] - a[0]);
  if (std::abs(v) > 1e-12 * std::max(1.0, mag)) return v;
  const long double lv = (static_cast<long double>(b[0]) - a[0]) * (static_cast<long double>(c[1]) - a[1]) -
                         (static_cast<long double>(b[1]) - a[1]) * (static_cast<long double>(c[0]) - a[0]);
  return static_cast<double>(lv);
}

std::vector<int> sorted_by_xy(std::span<const std::array<double, 2>> pts) {
  std::vector<int> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    if (pts[a][1] != pts[b][1]) return pts[a][1] < pts[b][1];
    return a < b;
  });
  return idx;
}

double point_segment_distance(const std::array<double, 2>& p, const std::array<double, 2>& a,
                              const std::array<double, 2>& b, double& theta) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2, 0.0, 1.0);
  const double qx = a[0] + t * dx - p[0], qy = a[1] + t * dy - p[1];
  theta = 1.0 - t;  // convex weight on endpoint a
  return std::hypot(qx, qy);
}

}  // namespace

PointSet2D build_A(const SingleFactorModel& instance) {
  PointSet2D a;
  const double sf = std::sqrt(instance.sigma_f2);
  a.points.reserve(instance.n());
  a.labels.reserve(instance.n());
  for (int i = 0; i < instance.n(); ++i) {
    a.points.push_back({instance.beta[i] * sf, instance.sigma_eps2[i]});
    a.labels.push_back({i});
  }
  return a;
}

PointSet2D addition_set(const PointSet2D& a, int K, long long n_cap) {
  const int n = static_cast<int>(a.points.size());
  if (K < 1 || K > n) raise(ErrorKind::Argument, "addition_set: K outside [1, n]");
  const unsigned long long count = n_choose_k_capped(n, K, static_cast<unsigned long long>(n_cap));
  if (count > static_cast<unsigned long long>(n_cap))
    raise(ErrorKind::CapExceeded, "addition_set: C(n,K) exceeds cap of " + std::to_string(n_cap));

  PointSet2D out;
  out.points.reserve(count);
  out.labels.reserve(count);

  std::vector<int> combo(K);
  for (int i = 0; i < K; ++i) combo[i] = i;
  while (true) {
    double u = 0.0, v = 0.0;
    for (int i : combo) {
      u += a.points[i][0];
      v += a.points[i][1];
    }
    out.points.push_back({u, v});
    out.labels.push_back(combo);

    int pos = K - 1;
    while (pos >= 0 && combo[pos] == n - K + pos) --pos;
    if (pos < 0) break;
    ++combo[pos];
    for (int i = pos + 1; i < K; ++i) combo[i] = combo[i - 1] + 1;
  }
  return out;
}

std::vector<int> convex_hull(std::span<const std::array<double, 2>> points) {
  const int n = static_cast<int>(points.size());
  if (n == 0) raise(ErrorKind::Argument, "convex_hull: empty point set");
  if (n == 1) return {0};
  const std::vector<int> idx = sorted_by_xy(points);

  std::vector<int> hull(2 * n);
  int h = 0;
  for (int k = 0; k < n; ++k) {  // lower
    const int i = idx[k];
    while (h >= 2 && orient(points[hull[h - 2]], points[hull[h - 1]], points[i]) <= 0.0) --h;
    hull[h++] = i;
  }
  const int lower_size = h + 1;
  for (int k = n - 2; k >= 0; --k) {  // upper
    const int i = idx[k];
    while (h >= lower_size && orient(points[hull[h - 2]], points[hull[h - 1]], points[i]) <= 0.0) --h;
    hull[h++] = i;
  }
  hull.resize(std::max(h - 1, 1));  // last point equals the first
  return hull;
}

std::vector<int> lower_hull(std::span<const std::array<double, 2>> points) {
  const int n = static_cast<int>(points.size());
  if (n == 0) raise(ErrorKind::Argument, "lower_hull: empty point set");
  const std::vector<int> idx = sorted_by_xy(points);
  std::vector<int> chain;
  chain.reserve(n);
  for (int k = 0; k < n; ++k) {
    const int i = idx[k];
    while (chain.size() >= 2 &&
           orient(points[chain[chain.size() - 2]], points[chain.back()], points[i]) <= 0.0)
      chain.pop_back();
    chain.push_back(i);
  }
  return chain;
}

FrontierReport verify_frontier(const SingleFactorModel& instance, int K, long long n_cap) {
  const RelaxationSolution rel = solve_relaxation_sf(instance, K);
  const double sf = std::sqrt(instance.sigma_f2);
  double idio = 0.0;
  for (int i = 0; i < instance.n(); ++i) idio += instance.sigma_eps2[i] * rel.x[i];
  const std::array<double, 2> p{rel.beta_sum * sf, idio};

  const PointSet2D ak = addition_set(build_A(instance), K, n_cap);
  const std::vector<int> chain = lower_hull(ak.points);

  FrontierReport rep;
  rep.fractional_count = rel.fractional_count;

  double umin = ak.points[0][0], umax = umin, vmin = ak.points[0][1], vmax = vmin;
  for (const auto& q : ak.points) {
    umin = std::min(umin, q[0]);
    umax = std::max(umax, q[0]);
    vmin = std::min(vmin, q[1]);
    vmax = std::max(vmax, q[1]);
  }
  rep.scale = std::max({1.0, umax - umin, vmax - vmin});

  double best_dist = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  int best_seg = -1;
  if (chain.size() == 1) {
    best_dist = std::hypot(p[0] - ak.points[chain[0]][0], p[1] - ak.points[chain[0]][1]);
    best_theta = 1.0;
    best_seg = 0;
  }
  for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
    double theta = 0.0;
    const double d = point_segment_distance(p, ak.points[chain[s]], ak.points[chain[s + 1]], theta);
    if (d < best_dist) {
      best_dist = d;
      best_theta = theta;
      best_seg = static_cast<int>(s);
    }
  }

  rep.distance = best_dist;
  rep.on_frontier = best_dist <= 1e-7 * rep.scale;
  rep.theta = best_theta;

  const int va = chain[best_seg];
  const int vb = chain[std::min<std::size_t>(best_seg + 1, chain.size() - 1)];
  const double snap = 1e-7;
  if (best_theta >= 1.0 - snap || va == vb) {
    rep.n_supports = 1;
    rep.support_a = ak.labels[va];
    rep.support_diff = 0;
  } else if (best_theta <= snap) {
    rep.n_supports = 1;
    rep.support_a = ak.labels[vb];
    rep.support_diff = 0;
  } else {
    rep.n_supports = 2;
    rep.support_a = ak.labels[va];
    rep.support_b = ak.labels[vb];
    std::vector<int> only_a;
    std::set_difference(rep.support_a.begin(), rep.support_a.end(), rep.support_b.begin(), rep.support_b.end(),
                        std::back_inserter(only_a));
    rep.support_diff = static_cast<int>(only_a.size());
    if (rep.support_diff > 1) {
      // supports differing in more than one asset only arise when a third
      // addition-set point sits on the same edge (collinear frontier)
      for (std::size_t q = 0; q < ak.points.size(); ++q) {
        if (static_cast<int>(q) == va || static_cast<int>(q) == vb) continue;
        double th = 0.0;
        if (point_segment_distance(ak.points[q], ak.points[va], ak.points[vb], th) <= 1e-9 * rep.scale &&
            th > snap && th < 1.0 - snap) {
          rep.degenerate_collinear = true;
          break;
        }
      }
    }
  }
  return rep;
}

MongeMatrixResult monge_matrix(const SingleFactorModel& instance, int K) {
  const int n = instance.n();
  if (K < 1) raise(ErrorKind::Argument, "monge_matrix: K must be positive");
  MongeMatrixResult res;
  res.order.resize(n);
  std::iota(res.order.begin(), res.order.end(), 0);
  std::stable_sort(res.order.begin(), res.order.end(),
                   [&](int a, int b) { return instance.beta[a] < instance.beta[b]; });

  res.matrix.resize(n, n);
  const double inv_2k = 1.0 / (2.0 * K);
#pragma omp parallel for schedule(static) if (n > 256)
  for (int r = 0; r < n; ++r) {
    const int i = res.order[r];
    for (int c = 0; c < n; ++c) {
      const int j = res.order[c];
      res.matrix(r, c) =
          (instance.sigma_eps2[i] + instance.sigma_eps2[j]) * inv_2k + instance.sigma_f2 * instance.beta[i] * instance.beta[j];
    }
  }
  return res;
}

MongeReport check_inverse_monge(const Eigen::MatrixXd& m, double tol) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) raise(ErrorKind::Argument, "check_inverse_monge: square matrix required");
  MongeReport rep;
  rep.n = n;
  if (n < 2) {
    rep.is_inverse_monge = true;
    return rep;
  }

  std::vector<double> row_worst(n - 1, -std::numeric_limits<double>::infinity());
  std::vector<int> row_arg(n - 1, 0);
#pragma omp parallel for schedule(static) if (n > 256)
  for (int i = 0; i < n - 1; ++i) {
    double worst = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int k = 0; k < n - 1; ++k) {
      const double v = m(i, k + 1) + m(i + 1, k) - m(i, k) - m(i + 1, k + 1);
      if (v > worst) {
        worst = v;
        arg = k;
      }
    }
    row_worst[i] = worst;
    row_arg[i] = arg;
  }

  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n - 1; ++i)
    if (row_worst[i] > rep.worst_violation) {
      rep.worst_violation = row_worst[i];
      rep.witness = {i, i + 1, row_arg[i], row_arg[i] + 1};
    }
  rep.is_inverse_monge = rep.worst_violation <= tol;
  return rep;
}

MongeReport check_inverse_monge_naive(const Eigen::MatrixXd& m, double tol) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) raise(ErrorKind::Argument, "check_inverse_monge: square matrix required");
  MongeReport rep;
  rep.n = n;
  if (n < 2) {
    rep.is_inverse_monge = true;
    return rep;
  }
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          const double v = m(i, l) + m(j, k) - m(i, k) - m(j, l);
          if (v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.witness = {i, j, k, l};
          }
        }
  rep.is_inverse_monge = rep.worst_violation <= tol;
  return rep;
}

}  // namespace ccmv
