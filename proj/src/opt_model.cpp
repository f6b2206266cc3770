#include "ccmv/opt_model.hpp"

#include <algorithm>
#include <ostream>

#include "ccmv/errors.hpp"

namespace ccmv {

int OptimizationModel::add_var(std::string vname, VarKind kind, double lower, double upper) {
  vars.push_back(Variable{std::move(vname), kind, lower, upper});
  obj_linear.push_back(0.0);
  return static_cast<int>(vars.size()) - 1;
}

void OptimizationModel::add_con(std::string cname, std::vector<std::pair<int, double>> terms,
                                ConstraintSense sense, double rhs) {
  std::sort(terms.begin(), terms.end());
  cons.push_back(LinearConstraint{std::move(cname), std::move(terms), sense, rhs});
}

void OptimizationModel::finalize() {
  std::sort(obj_quad.begin(), obj_quad.end(),
            [](const QuadTerm& a, const QuadTerm& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (const QuadTerm& q : obj_quad)
    if (q.i > q.j || q.j >= static_cast<int>(vars.size()))
      raise(ErrorKind::Argument, "quadratic term outside canonical i<=j range");
  dims.n01 = dims.nc = 0;
  for (const Variable& v : vars) (v.kind == VarKind::Binary ? dims.n01 : dims.nc)++;
  dims.m = static_cast<int>(cons.size());
}

double OptimizationModel::objective_at(std::span<const double> x) const {
  if (x.size() != vars.size()) raise(ErrorKind::Argument, "point size does not match variable count");
  double v = obj_constant;
  for (std::size_t i = 0; i < x.size(); ++i) v += obj_linear[i] * x[i];
  for (const QuadTerm& q : obj_quad) v += q.coef * x[q.i] * x[q.j];
  return v;
}

std::ostream& operator<<(std::ostream& out, const SegmentGrid& g) {
  out << "SegmentGrid{|S_w|=" << g.w_breaks.size() << ", |S_beta|=[";
  for (std::size_t l = 0; l < g.beta_breaks.size(); ++l) out << (l ? "," : "") << g.beta_breaks[l].size();
  return out << "]}";
}

}  // namespace ccmv
