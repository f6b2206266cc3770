#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ccmv {

enum class VarKind { Binary, Continuous };
enum class ConstraintSense { Le, Eq, Ge };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 1.0;
};

struct LinearConstraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // sorted by variable index
  ConstraintSense sense = ConstraintSense::Eq;
  double rhs = 0.0;
};

/// Canonical quadratic term: i <= j; an off-diagonal entry carries the full
/// 2*q_ij weight (both ordered pairs folded), the diagonal carries q_ii.
struct QuadTerm {
  int i = 0, j = 0;
  double coef = 0.0;
};

struct ModelDims {
  int n01 = 0;  // binary variables
  int nc = 0;   // continuous variables
  int m = 0;    // linear constraints
};

/// Mixed 0-1 program: minimize quadratic + linear objective over linear
/// constraints and variable bounds. Immutable once finalized.
struct OptimizationModel {
  std::string name;
  std::vector<Variable> vars;
  std::vector<LinearConstraint> cons;
  std::vector<double> obj_linear;  // dense, one coefficient per variable
  std::vector<QuadTerm> obj_quad;  // canonical storage, sorted (i, j)
  double obj_constant = 0.0;

  int n_assets = 0;
  int n_factors = 0;
  int cardinality = 0;
  ModelDims dims;

  int add_var(std::string name, VarKind kind, double lower, double upper);
  void add_con(std::string name, std::vector<std::pair<int, double>> terms, ConstraintSense sense, double rhs);

  /// Sorts quadratic terms, recomputes dims, validates counts.
  void finalize();

  bool linear_objective() const { return obj_quad.empty(); }
  double objective_at(std::span<const double> x) const;
};

/// Breakpoint sets for the piecewise-linear approximations: w levels on
/// [0, 1] and per-factor beta levels spanning the loading range.
struct SegmentGrid {
  std::vector<double> w_breaks;                  // strictly increasing, 0 .. 1
  std::vector<std::vector<double>> beta_breaks;  // per factor, strictly increasing
};

std::ostream& operator<<(std::ostream&, const SegmentGrid&);

}  // namespace ccmv
