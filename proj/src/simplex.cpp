#include "ccmv/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ccmv/errors.hpp"

namespace ccmv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum : signed char { kBasic = 0, kAtLower = 1, kAtUpper = 2 };

// Columns: [0, n_struct) model variables, then one slack per inequality row,
// then one artificial per row. Rows are scaled by 1/max|coef| up front.
class Simplex {
public:
  Simplex(const OptimizationModel& model, std::span<const double> lower, std::span<const double> upper,
          const LpOptions& opt)
      : opt_(opt) {
    n_struct_ = static_cast<int>(model.vars.size());
    m_ = static_cast<int>(model.cons.size());

    int n_slack = 0;
    for (const auto& c : model.cons)
      if (c.sense != ConstraintSense::Eq) ++n_slack;
    n_total_ = n_struct_ + n_slack + m_;

    A_.setZero(m_, n_total_);
    b_.resize(m_);
    lo_.resize(n_total_);
    hi_.resize(n_total_);
    cost_.setZero(n_total_);

    for (int j = 0; j < n_struct_; ++j) {
      lo_[j] = lower[j];
      hi_[j] = upper[j];
      if (!std::isfinite(lo_[j]) || !std::isfinite(hi_[j]))
        raise(ErrorKind::Argument, "simplex requires finite bounds on model variables");
      if (lo_[j] > hi_[j] + 1e-12) infeasible_bounds_ = true;
    }

    int slack = n_struct_;
    for (int r = 0; r < m_; ++r) {
      const auto& con = model.cons[r];
      double scale = std::abs(con.rhs);
      for (const auto& [j, v] : con.terms) scale = std::max(scale, std::abs(v));
      if (scale <= 0.0) scale = 1.0;
      row_scale_.push_back(1.0 / scale);
      for (const auto& [j, v] : con.terms) A_(r, j) += v / scale;
      b_[r] = con.rhs / scale;
      if (con.sense == ConstraintSense::Le) {
        A_(r, slack) = 1.0;
        lo_[slack] = 0.0;
        hi_[slack] = kInf;
        ++slack;
      } else if (con.sense == ConstraintSense::Ge) {
        A_(r, slack) = -1.0;
        lo_[slack] = 0.0;
        hi_[slack] = kInf;
        ++slack;
      }
    }
    art0_ = slack;
    for (int r = 0; r < m_; ++r) {
      lo_[art0_ + r] = 0.0;
      hi_[art0_ + r] = kInf;  // sign of the column is fixed at start-up
    }
  }

  LpSolution run(const OptimizationModel& model) {
    LpSolution sol;
    if (infeasible_bounds_) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }

    start_basis();
    // Phase 1: minimize the artificial sum.
    for (int r = 0; r < m_; ++r) cost_[art0_ + r] = 1.0;
    const LpStatus p1 = iterate();
    if (p1 != LpStatus::Optimal) raise(ErrorKind::Numerical, "phase-1 simplex failed to terminate");
    refactorize();
    if (objective_value() > 1e-6) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    drive_out_artificials();
    for (int r = 0; r < m_; ++r) {
      cost_[art0_ + r] = 0.0;
      hi_[art0_ + r] = 0.0;  // pinned for phase 2
    }

    // Phase 2: the model objective on structural columns.
    for (int j = 0; j < n_struct_; ++j) cost_[j] = model.obj_linear[j];
    const LpStatus p2 = iterate();
    refactorize();

    sol.status = p2;
    sol.iterations = iterations_;
    if (p2 != LpStatus::Optimal) return sol;

    sol.x.resize(n_struct_);
    for (int j = 0; j < n_struct_; ++j) sol.x[j] = value(j);
    sol.objective = model.obj_constant;
    for (int j = 0; j < n_struct_; ++j) sol.objective += model.obj_linear[j] * sol.x[j];

    sol.basic_columns = basis_;
    sol.at_upper.resize(n_total_);
    for (int j = 0; j < n_total_; ++j) sol.at_upper[j] = (state_[j] == kAtUpper) ? 1 : 0;

    // residual of the true system (artificial columns excluded) and the
    // dual bound from the final basis
    Eigen::VectorXd xfull(art0_);
    for (int j = 0; j < art0_; ++j) xfull[j] = value(j);
    sol.max_residual = (A_.leftCols(art0_) * xfull - b_).cwiseAbs().maxCoeff();
    if (sol.max_residual > opt_.feas_tol)
      raise(ErrorKind::Numerical, "simplex returned residual above tolerance");

    const Eigen::VectorXd y = dual_prices();
    double dual = y.dot(b_);
    for (int j = 0; j < n_total_; ++j) {
      if (state_[j] == kBasic) continue;
      const double d = cost_[j] - y.dot(A_.col(j));
      if (state_[j] == kAtLower && lo_[j] != 0.0) dual += d * lo_[j];
      if (state_[j] == kAtUpper) dual += d * hi_[j];
    }
    sol.dual_bound = dual + model.obj_constant;
    return sol;
  }

private:
  double value(int j) const {
    if (state_[j] == kAtLower) return lo_[j];
    if (state_[j] == kAtUpper) return hi_[j];
    for (int r = 0; r < m_; ++r)
      if (basis_[r] == j) return xb_[r];
    return 0.0;
  }

  double objective_value() const {
    double v = 0.0;
    for (int r = 0; r < m_; ++r) v += cost_[basis_[r]] * xb_[r];
    for (int j = 0; j < n_total_; ++j)
      if (state_[j] == kAtLower)
        v += cost_[j] * lo_[j];
      else if (state_[j] == kAtUpper)
        v += cost_[j] * hi_[j];
    return v;
  }

  Eigen::VectorXd dual_prices() const {
    Eigen::VectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = cost_[basis_[r]];
    return binv_.transpose() * cb;
  }

  void start_basis() {
    state_.assign(n_total_, kAtLower);
    for (int j = 0; j < n_struct_; ++j)
      if (!std::isfinite(lo_[j])) state_[j] = kAtUpper;  // unreachable today; keeps invariant clear

    Eigen::VectorXd residual = b_;
    for (int j = 0; j < art0_; ++j) {
      const double v = (state_[j] == kAtUpper) ? hi_[j] : lo_[j];
      if (v != 0.0) residual -= A_.col(j) * v;
    }
    basis_.resize(m_);
    xb_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      A_(r, art0_ + r) = residual[r] < 0.0 ? -1.0 : 1.0;
      basis_[r] = art0_ + r;
      state_[art0_ + r] = kBasic;
      xb_[r] = std::abs(residual[r]);
    }
    binv_.setIdentity(m_, m_);
    pivots_since_refactor_ = 0;
  }

  void refactorize() {
    Eigen::MatrixXd B(m_, m_);
    for (int r = 0; r < m_; ++r) B.col(r) = A_.col(basis_[r]);
    binv_ = B.partialPivLu().inverse();
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < n_total_; ++j) {
      if (state_[j] == kAtLower && lo_[j] != 0.0)
        rhs -= A_.col(j) * lo_[j];
      else if (state_[j] == kAtUpper && hi_[j] != 0.0)
        rhs -= A_.col(j) * hi_[j];
    }
    xb_ = binv_ * rhs;
    pivots_since_refactor_ = 0;
  }

  LpStatus iterate() {
    int degenerate_streak = 0;
    while (true) {
      if (++iterations_ > opt_.max_iterations) raise(ErrorKind::Numerical, "simplex iteration limit");

      const Eigen::VectorXd y = dual_prices();
      const bool bland = degenerate_streak > 50;

      int enter = -1;
      double best = opt_.opt_tol;
      for (int j = 0; j < n_total_; ++j) {
        if (state_[j] == kBasic || lo_[j] == hi_[j]) continue;
        const double d = cost_[j] - y.dot(A_.col(j));
        const bool eligible = (state_[j] == kAtLower && d < -opt_.opt_tol) ||
                              (state_[j] == kAtUpper && d > opt_.opt_tol);
        if (!eligible) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      const double dir = (state_[enter] == kAtLower) ? 1.0 : -1.0;
      const Eigen::VectorXd t = binv_ * A_.col(enter);

      // ratio test; the entering column can also just flip to its other bound
      double limit = hi_[enter] - lo_[enter];
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int r = 0; r < m_; ++r) {
        const double rate = -dir * t[r];  // d(x_basic[r]) / d(step)
        if (rate < -opt_.pivot_tol) {
          const double room = xb_[r] - lo_[basis_[r]];
          const double ratio = std::max(room, 0.0) / -rate;
          if (ratio < limit - 1e-12 ||
              (ratio < limit + 1e-12 && (leave_row < 0 || basis_[r] < basis_[leave_row]))) {
            limit = ratio;
            leave_row = r;
            leave_to_upper = false;
          }
        } else if (rate > opt_.pivot_tol && std::isfinite(hi_[basis_[r]])) {
          const double room = hi_[basis_[r]] - xb_[r];
          const double ratio = std::max(room, 0.0) / rate;
          if (ratio < limit - 1e-12 ||
              (ratio < limit + 1e-12 && (leave_row < 0 || basis_[r] < basis_[leave_row]))) {
            limit = ratio;
            leave_row = r;
            leave_to_upper = true;
          }
        }
      }
      if (!std::isfinite(limit)) return LpStatus::Unbounded;

      degenerate_streak = (limit <= 1e-12) ? degenerate_streak + 1 : 0;

      xb_ -= t * (dir * limit);
      if (leave_row < 0) {
        state_[enter] = (state_[enter] == kAtLower) ? kAtUpper : kAtLower;  // bound flip
        continue;
      }

      const int leaving = basis_[leave_row];
      state_[leaving] = leave_to_upper ? kAtUpper : kAtLower;
      const double enter_value = (dir > 0 ? lo_[enter] : hi_[enter]) + dir * limit;
      basis_[leave_row] = enter;
      state_[enter] = kBasic;

      const double pivot = t[leave_row];
      if (std::abs(pivot) < 1e-12) raise(ErrorKind::Numerical, "vanishing simplex pivot");
      binv_.row(leave_row) /= pivot;
      for (int r = 0; r < m_; ++r)
        if (r != leave_row) binv_.row(r) -= t[r] * binv_.row(leave_row);
      xb_[leave_row] = enter_value;

      if (++pivots_since_refactor_ >= opt_.refactor_every) refactorize();
    }
  }

  // After phase 1, pivot zero-valued artificials out of the basis where a
  // structural column can replace them; a fully zero row stays as-is.
  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < art0_) continue;
      const Eigen::RowVectorXd row = binv_.row(r) * A_.leftCols(art0_);
      int enter = -1;
      for (int j = 0; j < art0_; ++j)
        if (state_[j] != kBasic && std::abs(row[j]) > 1e-9) {
          enter = j;
          break;
        }
      if (enter < 0) continue;
      const Eigen::VectorXd t = binv_ * A_.col(enter);
      state_[basis_[r]] = kAtLower;
      const double entering_value = (state_[enter] == kAtUpper) ? hi_[enter] : lo_[enter];
      basis_[r] = enter;
      state_[enter] = kBasic;
      binv_.row(r) /= t[r];
      for (int i = 0; i < m_; ++i)
        if (i != r) binv_.row(i) -= t[i] * binv_.row(r);
      xb_[r] = entering_value;  // artificial held 0, so the pivot is degenerate
      refactorize();
    }
  }

  LpOptions opt_;
  int m_ = 0, n_struct_ = 0, n_total_ = 0, art0_ = 0;
  bool infeasible_bounds_ = false;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_, cost_;
  Eigen::VectorXd lo_, hi_;
  std::vector<double> row_scale_;
  std::vector<int> basis_;
  std::vector<signed char> state_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  long iterations_ = 0;
  int pivots_since_refactor_ = 0;
};

}  // namespace

LpSolution solve_lp_bounded(const OptimizationModel& model, std::span<const double> lower,
                            std::span<const double> upper, const LpOptions& opt) {
  if (!model.obj_quad.empty())
    raise(ErrorKind::UnsupportedModel, "LP solver cannot handle quadratic objective terms");
  if (lower.size() != model.vars.size() || upper.size() != model.vars.size())
    raise(ErrorKind::Argument, "bound override size mismatch");
  Simplex core(model, lower, upper, opt);
  return core.run(model);
}

LpSolution solve_lp(const OptimizationModel& model, bool relax_integrality, const LpOptions& opt) {
  if (!relax_integrality)
    for (const Variable& v : model.vars)
      if (v.kind == VarKind::Binary)
        raise(ErrorKind::UnsupportedModel, "binary variables present; pass relax_integrality or use branch and bound");
  std::vector<double> lo(model.vars.size()), hi(model.vars.size());
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    lo[j] = model.vars[j].lower;
    hi[j] = model.vars[j].upper;
  }
  return solve_lp_bounded(model, lo, hi, opt);
}

}  // namespace ccmv
