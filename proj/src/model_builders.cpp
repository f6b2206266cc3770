#include "ccmv/model_builders.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ccmv/errors.hpp"
#include "ccmv/log.hpp"

namespace ccmv {

namespace {

void check_cardinality(int K, int n) {
  if (K < 1 || K > n)
    raise(ErrorKind::Argument, "cardinality " + std::to_string(K) + " outside [1, " + std::to_string(n) + "]");
}

std::vector<double> uniform_breaks(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int s = 0; s < count; ++s) v[s] = lo + (hi - lo) * s / (count - 1);
  v.front() = lo;
  v.back() = hi;
  return v;
}

// Segment price for the y variable at breakpoint t: the breakpoint itself in
// the published formulation, the worse endpoint of the segment ending at t
// in two-sided mode.
double segment_coef(const std::vector<double>& breaks, int t, ApproxMode mode) {
  const double b1 = breaks[t];
  if (mode == ApproxMode::PaperFaithful) return b1 * b1;
  const double b0 = breaks[t > 0 ? t - 1 : 0];
  return std::max(b0 * b0, b1 * b1);
}

void require_uncorrelated_for_two_sided(const MultiFactorModel& model, ApproxMode mode) {
  if (mode == ApproxMode::TwoSided && !model.uncorrelated)
    raise(ErrorKind::UnsupportedModel, "two-sided pricing requires a diagonal factor covariance");
}

}  // namespace

SegmentGrid default_grids(const MultiFactorModel& model, int K, int n_w_breaks, int n_beta_breaks) {
  check_cardinality(K, model.n());
  if (n_w_breaks == 0) n_w_breaks = 4 * K + 1;
  if (n_w_breaks < 2 || n_beta_breaks < 2) raise(ErrorKind::Argument, "grids need at least 2 breakpoints");

  SegmentGrid grid;
  grid.w_breaks = uniform_breaks(0.0, 1.0, n_w_breaks);
  grid.beta_breaks.resize(model.m());
  for (int l = 0; l < model.m(); ++l) {
    const double lo = model.loadings.row(l).minCoeff();
    const double hi = model.loadings.row(l).maxCoeff();
    if (lo == hi) {
      log_warning("factor " + std::to_string(l) + " has constant loadings; beta grid collapsed");
      grid.beta_breaks[l] = {lo};
    } else {
      grid.beta_breaks[l] = uniform_breaks(lo, hi, n_beta_breaks);
    }
  }
  return grid;
}

OptimizationModel build_ccmvfm(const MultiFactorModel& model, int K) {
  const int n = model.n();
  check_cardinality(K, n);

  OptimizationModel out;
  out.name = "ccmvfm";
  out.n_assets = n;
  out.n_factors = model.m();
  out.cardinality = K;
  out.vars.reserve(2 * n);
  for (int i = 0; i < n; ++i) out.add_var("w_" + std::to_string(i), VarKind::Continuous, 0.0, 1.0);
  for (int i = 0; i < n; ++i) out.add_var("x_" + std::to_string(i), VarKind::Binary, 0.0, 1.0);

  std::vector<std::pair<int, double>> budget, card;
  for (int i = 0; i < n; ++i) budget.emplace_back(i, 1.0);
  for (int i = 0; i < n; ++i) card.emplace_back(n + i, 1.0);
  out.add_con("budget", std::move(budget), ConstraintSense::Eq, 1.0);
  out.add_con("card", std::move(card), ConstraintSense::Le, static_cast<double>(K));
  for (int i = 0; i < n; ++i)
    out.add_con("link_" + std::to_string(i), {{i, 1.0}, {n + i, -1.0}}, ConstraintSense::Le, 0.0);

  const Eigen::MatrixXd g = model.factor_cov * model.loadings;  // m x n
  out.obj_quad.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double q = model.loadings.col(i).dot(g.col(j));
      if (i == j)
        out.obj_quad.push_back({i, i, q + model.sigma_eps2[i]});
      else if (q != 0.0)
        out.obj_quad.push_back({i, j, 2.0 * q});
    }
  }
  out.finalize();
  return out;
}

OptimizationModel build_ccmvfm_la(const MultiFactorModel& model, int K, const SegmentGrid& grid, ApproxMode mode) {
  const int n = model.n();
  const int nf = model.m();
  check_cardinality(K, n);
  require_uncorrelated_for_two_sided(model, mode);
  if (static_cast<int>(grid.beta_breaks.size()) != nf)
    raise(ErrorKind::Argument, "grid factor count does not match model");

  const int S = static_cast<int>(grid.w_breaks.size());
  OptimizationModel out;
  out.name = "ccmvfm-la";
  out.n_assets = n;
  out.n_factors = nf;
  out.cardinality = K;

  // x_{i,s} blocks first, then the per-factor y blocks.
  const auto xid = [S](int i, int s) { return i * S + s; };
  out.vars.reserve(static_cast<std::size_t>(n) * S);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < S; ++s) out.add_var("x_" + std::to_string(i) + "_" + std::to_string(s), VarKind::Binary, 0.0, 1.0);
  std::vector<int> yoff(nf);
  for (int l = 0; l < nf; ++l) {
    yoff[l] = static_cast<int>(out.vars.size());
    for (int t = 0; t < static_cast<int>(grid.beta_breaks[l].size()); ++t)
      out.add_var("y_" + std::to_string(l) + "_" + std::to_string(t), VarKind::Binary, 0.0, 1.0);
  }

  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> sel(S);
    for (int s = 0; s < S; ++s) sel[s] = {xid(i, s), 1.0};
    out.add_con("sel_" + std::to_string(i), std::move(sel), ConstraintSense::Eq, 1.0);
  }
  for (int l = 0; l < nf; ++l) {
    std::vector<std::pair<int, double>> ysel(grid.beta_breaks[l].size());
    for (int t = 0; t < static_cast<int>(ysel.size()); ++t) ysel[t] = {yoff[l] + t, 1.0};
    out.add_con("ysel_" + std::to_string(l), std::move(ysel), ConstraintSense::Eq, 1.0);
  }
  {
    std::vector<std::pair<int, double>> card, budget;
    card.reserve(static_cast<std::size_t>(n) * (S - 1));
    budget.reserve(card.capacity());
    for (int i = 0; i < n; ++i)
      for (int s = 1; s < S; ++s) {
        card.emplace_back(xid(i, s), 1.0);
        budget.emplace_back(xid(i, s), grid.w_breaks[s]);
      }
    out.add_con("card", std::move(card), ConstraintSense::Le, static_cast<double>(K));
    out.add_con("budget", std::move(budget), ConstraintSense::Eq, 1.0);
  }
  for (int l = 0; l < nf; ++l) {
    std::vector<std::pair<int, double>> link;
    link.reserve(static_cast<std::size_t>(n) * (S - 1) + grid.beta_breaks[l].size());
    for (int i = 0; i < n; ++i)
      for (int s = 1; s < S; ++s) link.emplace_back(xid(i, s), model.loadings(l, i) * grid.w_breaks[s]);
    for (int t = 0; t < static_cast<int>(grid.beta_breaks[l].size()); ++t)
      link.emplace_back(yoff[l] + t, -grid.beta_breaks[l][t]);
    out.add_con("blink_" + std::to_string(l), std::move(link), ConstraintSense::Le, 0.0);
  }
  if (mode == ApproxMode::TwoSided) {
    for (int l = 0; l < nf; ++l) {
      std::vector<std::pair<int, double>> link;
      for (int i = 0; i < n; ++i)
        for (int s = 1; s < S; ++s) link.emplace_back(xid(i, s), -model.loadings(l, i) * grid.w_breaks[s]);
      const auto& bb = grid.beta_breaks[l];
      for (int t = 0; t < static_cast<int>(bb.size()); ++t)
        link.emplace_back(yoff[l] + t, bb[t > 0 ? t - 1 : 0]);
      out.add_con("blower_" + std::to_string(l), std::move(link), ConstraintSense::Le, 0.0);
    }
  }

  for (int i = 0; i < n; ++i)
    for (int s = 1; s < S; ++s)
      out.obj_linear[xid(i, s)] = model.sigma_eps2[i] * grid.w_breaks[s] * grid.w_breaks[s];

  if (model.uncorrelated) {
    for (int l = 0; l < nf; ++l)
      for (int t = 0; t < static_cast<int>(grid.beta_breaks[l].size()); ++t)
        out.obj_linear[yoff[l] + t] = model.factor_cov(l, l) * segment_coef(grid.beta_breaks[l], t, mode);
  } else {
    for (int l = 0; l < nf; ++l)
      for (int m2 = l; m2 < nf; ++m2) {
        const double s_lm = model.factor_cov(l, m2);
        if (s_lm == 0.0) continue;
        for (int t = 0; t < static_cast<int>(grid.beta_breaks[l].size()); ++t)
          for (int t2 = (l == m2 ? t : 0); t2 < static_cast<int>(grid.beta_breaks[m2].size()); ++t2) {
            const int a = yoff[l] + t, b = yoff[m2] + t2;
            const double prod = s_lm * grid.beta_breaks[l][t] * grid.beta_breaks[m2][t2];
            if (a == b)
              out.obj_quad.push_back({a, a, prod});
            else
              out.obj_quad.push_back({std::min(a, b), std::max(a, b), 2.0 * prod});
          }
      }
  }
  out.finalize();
  return out;
}

OptimizationModel build_ewccmvfm(const MultiFactorModel& model, int K) {
  const int n = model.n();
  check_cardinality(K, n);

  OptimizationModel out;
  out.name = "ewccmvfm";
  out.n_assets = n;
  out.n_factors = model.m();
  out.cardinality = K;
  for (int i = 0; i < n; ++i) out.add_var("x_" + std::to_string(i), VarKind::Binary, 0.0, 1.0);

  std::vector<std::pair<int, double>> card(n);
  for (int i = 0; i < n; ++i) card[i] = {i, 1.0};
  out.add_con("card", std::move(card), ConstraintSense::Eq, static_cast<double>(K));

  const double inv_k2 = 1.0 / (static_cast<double>(K) * K);
  const Eigen::MatrixXd g = model.factor_cov * model.loadings;
  out.obj_quad.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    out.obj_linear[i] = inv_k2 * (model.loadings.col(i).dot(g.col(i)) + model.sigma_eps2[i]);
    for (int j = i + 1; j < n; ++j) {
      const double q = model.loadings.col(i).dot(g.col(j));
      if (q != 0.0) out.obj_quad.push_back({i, j, 2.0 * inv_k2 * q});
    }
  }
  out.finalize();
  return out;
}

OptimizationModel build_ewccmvfm_la(const MultiFactorModel& model, int K, const SegmentGrid& grid, ApproxMode mode) {
  const int n = model.n();
  const int nf = model.m();
  check_cardinality(K, n);
  require_uncorrelated_for_two_sided(model, mode);
  if (static_cast<int>(grid.beta_breaks.size()) != nf)
    raise(ErrorKind::Argument, "grid factor count does not match model");

  OptimizationModel out;
  out.name = "ewccmvfm-la";
  out.n_assets = n;
  out.n_factors = nf;
  out.cardinality = K;
  for (int i = 0; i < n; ++i) out.add_var("x_" + std::to_string(i), VarKind::Binary, 0.0, 1.0);
  std::vector<int> yoff(nf);
  for (int l = 0; l < nf; ++l) {
    yoff[l] = static_cast<int>(out.vars.size());
    for (int t = 0; t < static_cast<int>(grid.beta_breaks[l].size()); ++t)
      out.add_var("y_" + std::to_string(l) + "_" + std::to_string(t), VarKind::Binary, 0.0, 1.0);
  }

  const double inv_k = 1.0 / K;
  {
    std::vector<std::pair<int, double>> card(n), budget(n);
    for (int i = 0; i < n; ++i) {
      card[i] = {i, 1.0};
      budget[i] = {i, inv_k};
    }
    out.add_con("card", std::move(card), ConstraintSense::Eq, static_cast<double>(K));
    out.add_con("budget", std::move(budget), ConstraintSense::Eq, 1.0);
  }
  for (int l = 0; l < nf; ++l) {
    std::vector<std::pair<int, double>> link;
    link.reserve(n + grid.beta_breaks[l].size());
    for (int i = 0; i < n; ++i) link.emplace_back(i, inv_k * model.loadings(l, i));
    for (int t = 0; t < static_cast<int>(grid.beta_breaks[l].size()); ++t)
      link.emplace_back(yoff[l] + t, -grid.beta_breaks[l][t]);
    out.add_con("blink_" + std::to_string(l), std::move(link), ConstraintSense::Le, 0.0);
  }
  for (int l = 0; l < nf; ++l) {
    std::vector<std::pair<int, double>> ysel(grid.beta_breaks[l].size());
    for (int t = 0; t < static_cast<int>(ysel.size()); ++t) ysel[t] = {yoff[l] + t, 1.0};
    out.add_con("ysel_" + std::to_string(l), std::move(ysel), ConstraintSense::Eq, 1.0);
  }
  if (mode == ApproxMode::TwoSided) {
    for (int l = 0; l < nf; ++l) {
      std::vector<std::pair<int, double>> link;
      for (int i = 0; i < n; ++i) link.emplace_back(i, -inv_k * model.loadings(l, i));
      const auto& bb = grid.beta_breaks[l];
      for (int t = 0; t < static_cast<int>(bb.size()); ++t) link.emplace_back(yoff[l] + t, bb[t > 0 ? t - 1 : 0]);
      out.add_con("blower_" + std::to_string(l), std::move(link), ConstraintSense::Le, 0.0);
    }
  }

  // The aggregate beta encoded by y lives on the average scale, so only the
  // idiosyncratic sum keeps the 1/K^2 normalization.
  const double inv_k2 = inv_k * inv_k;
  for (int i = 0; i < n; ++i) out.obj_linear[i] = inv_k2 * model.sigma_eps2[i];
  if (model.uncorrelated) {
    for (int l = 0; l < nf; ++l)
      for (int t = 0; t < static_cast<int>(grid.beta_breaks[l].size()); ++t)
        out.obj_linear[yoff[l] + t] = model.factor_cov(l, l) * segment_coef(grid.beta_breaks[l], t, mode);
  } else {
    for (int l = 0; l < nf; ++l)
      for (int m2 = l; m2 < nf; ++m2) {
        const double s_lm = model.factor_cov(l, m2);
        if (s_lm == 0.0) continue;
        for (int t = 0; t < static_cast<int>(grid.beta_breaks[l].size()); ++t)
          for (int t2 = (l == m2 ? t : 0); t2 < static_cast<int>(grid.beta_breaks[m2].size()); ++t2) {
            const int a = yoff[l] + t, b = yoff[m2] + t2;
            const double prod = s_lm * grid.beta_breaks[l][t] * grid.beta_breaks[m2][t2];
            if (a == b)
              out.obj_quad.push_back({a, a, prod});
            else
              out.obj_quad.push_back({std::min(a, b), std::max(a, b), 2.0 * prod});
          }
      }
  }
  out.finalize();
  return out;
}

OptimizationModel build_ewccmvsf(const SingleFactorModel& model, int K) {
  OptimizationModel out = build_ewccmvfm(as_multi(model), K);
  out.name = "ewccmvsf";
  return out;
}

MewcpInstance to_mewcp(const OptimizationModel& ew, int K) {
  if (K < 2) raise(ErrorKind::UnsupportedModel, "clique transform needs K >= 2");
  const int n = ew.n_assets;
  if (n < 2 || static_cast<int>(ew.vars.size()) != n || ew.cardinality != K)
    raise(ErrorKind::Argument, "to_mewcp expects an equal-weight model over asset binaries");
  for (const Variable& v : ew.vars)
    if (v.kind != VarKind::Binary) raise(ErrorKind::Argument, "to_mewcp expects a pure binary model");

  // Recover a_ij from the canonical objective: linear holds the diagonal,
  // off-diagonal quadratic entries carry 2*a_ij.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = ew.obj_linear[i];
  for (const QuadTerm& q : ew.obj_quad) {
    if (q.i == q.j)
      a(q.i, q.i) += q.coef;
    else {
      a(q.i, q.j) = q.coef / 2.0;
      a(q.j, q.i) = q.coef / 2.0;
    }
  }

  MewcpInstance inst;
  inst.n = n;
  inst.k = K;
  double g = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g = std::max(g, std::abs(a(i, j)) + (std::abs(a(i, i)) + std::abs(a(j, j))) / (K - 1));
  inst.big_g = 2.0 * g + 1.0;
  inst.edge_weight = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      inst.edge_weight(i, j) = inst.big_g - (2.0 * a(i, j) + (a(i, i) + a(j, j)) / (K - 1));
  return inst;
}

double approximation_error_bound(const MultiFactorModel& model, int K, const SegmentGrid& grid, bool with_w_grid) {
  double bound = 0.0;
  for (int l = 0; l < model.m(); ++l) {
    const auto& bb = grid.beta_breaks[l];
    if (bb.size() < 2) continue;
    const double span = bb.back() - bb.front();
    const double delta = span / (static_cast<double>(bb.size()) - 1);
    const double bmax = std::max(std::abs(bb.front()), std::abs(bb.back()));
    bound += model.factor_cov(l, l) * delta * (2.0 * bmax + delta);
  }
  if (with_w_grid && grid.w_breaks.size() >= 2) {
    const double dw = 1.0 / (static_cast<double>(grid.w_breaks.size()) - 1);
    double eps_sum = 0.0;
    for (double e : model.sigma_eps2) eps_sum += e;
    bound += eps_sum * dw * (2.0 + dw);  // sum_i sigma_eps2 * dw * (2 w_i + dw), w_i <= 1
  }
  (void)K;
  return bound;
}

namespace {

void write_coef(std::ostream& out, double coef, const std::string& name, bool first) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::abs(coef));
  if (first)
    out << (coef < 0 ? "- " : "") << buf << ' ' << name;
  else
    out << (coef < 0 ? " - " : " + ") << buf << ' ' << name;
}

}  // namespace

void export_lp(const OptimizationModel& model, std::ostream& out) {
  out << "\\ " << model.name << " N=" << model.n_assets << " K=" << model.cardinality << "\n";
  out << "Minimize\n obj: ";
  bool first = true;
  int on_line = 0;
  for (std::size_t i = 0; i < model.obj_linear.size(); ++i) {
    if (model.obj_linear[i] == 0.0) continue;
    write_coef(out, model.obj_linear[i], model.vars[i].name, first);
    first = false;
    if (++on_line % 8 == 0) out << "\n   ";
  }
  if (!model.obj_quad.empty()) {
    out << (first ? "[ " : " + [ ");
    bool qfirst = true;
    for (const QuadTerm& q : model.obj_quad) {
      // bracket contents are halved by convention, so coefficients double
      if (q.i == q.j)
        write_coef(out, 2.0 * q.coef, model.vars[q.i].name + " ^2", qfirst);
      else
        write_coef(out, 2.0 * q.coef, model.vars[q.i].name + " * " + model.vars[q.j].name, qfirst);
      qfirst = false;
      if (++on_line % 8 == 0) out << "\n   ";
    }
    out << " ] / 2";
    first = false;
  }
  if (first) out << "0 " << model.vars.at(0).name;
  out << "\nSubject To\n";
  for (const LinearConstraint& c : model.cons) {
    out << ' ' << c.name << ": ";
    bool cfirst = true;
    int terms = 0;
    for (const auto& [idx, coef] : c.terms) {
      if (coef == 0.0) continue;
      write_coef(out, coef, model.vars[idx].name, cfirst);
      cfirst = false;
      if (++terms % 8 == 0) out << "\n   ";
    }
    if (cfirst) out << "0 " << model.vars.at(0).name;
    const char* rel = c.sense == ConstraintSense::Le ? "<=" : c.sense == ConstraintSense::Ge ? ">=" : "=";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c.rhs);
    out << ' ' << rel << ' ' << buf << '\n';
  }
  bool any_bounds = false;
  for (const Variable& v : model.vars)
    if (v.kind == VarKind::Continuous) {
      if (!any_bounds) out << "Bounds\n";
      any_bounds = true;
      char lo[40], hi[40];
      std::snprintf(lo, sizeof lo, "%.17g", v.lower);
      std::snprintf(hi, sizeof hi, "%.17g", v.upper);
      out << ' ' << lo << " <= " << v.name << " <= " << hi << '\n';
    }
  bool any_bin = false;
  int on = 0;
  for (const Variable& v : model.vars)
    if (v.kind == VarKind::Binary) {
      if (!any_bin) out << "Binaries\n";
      any_bin = true;
      out << ' ' << v.name;
      if (++on % 12 == 0) out << '\n';
    }
  if (any_bin && on % 12 != 0) out << '\n';
  out << "End\n";
}

void export_lp_file(const OptimizationModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::Io, "cannot open " + path);
  export_lp(model, out);
  if (!out) raise(ErrorKind::Io, "write failed: " + path);
}

std::string dimension_report(const OptimizationModel& model) {
  std::ostringstream os;
  os << "{\"model\":\"" << model.name << "\",\"N\":" << model.n_assets << ",\"NF\":" << model.n_factors
     << ",\"K\":" << model.cardinality << ",\"n01\":" << model.dims.n01 << ",\"nc\":" << model.dims.nc
     << ",\"m\":" << model.dims.m << "}";
  return os.str();
}

std::vector<double> weights_from_point(const OptimizationModel& model, const SegmentGrid* grid,
                                       std::span<const double> x) {
  const int n = model.n_assets;
  std::vector<double> w(n, 0.0);
  if (model.name == "ccmvfm") {
    for (int i = 0; i < n; ++i) w[i] = x[i];
  } else if (model.name == "ccmvfm-la") {
    if (grid == nullptr) raise(ErrorKind::Argument, "grid required to decode a piecewise model");
    const int S = static_cast<int>(grid->w_breaks.size());
    for (int i = 0; i < n; ++i)
      for (int s = 1; s < S; ++s) w[i] += grid->w_breaks[s] * x[i * S + s];
  } else if (model.name == "ewccmvfm" || model.name == "ewccmvsf" || model.name == "ewccmvfm-la") {
    for (int i = 0; i < n; ++i) w[i] = x[i] / model.cardinality;
  } else {
    raise(ErrorKind::Argument, "unknown model name " + model.name);
  }
  return w;
}

std::vector<int> support_of_weights(std::span<const double> w, double tol) {
  std::vector<int> s;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > tol) s.push_back(static_cast<int>(i));
  return s;
}

}  // namespace ccmv
