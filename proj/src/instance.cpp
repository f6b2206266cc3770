#include "ccmv/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ccmv/errors.hpp"

namespace ccmv {

MultiFactorModel as_multi(const SingleFactorModel& sf) {
  MultiFactorModel m;
  m.loadings.resize(1, sf.n());
  for (int i = 0; i < sf.n(); ++i) m.loadings(0, i) = sf.beta[i];
  m.factor_cov.resize(1, 1);
  m.factor_cov(0, 0) = sf.sigma_f2;
  m.sigma_eps2 = sf.sigma_eps2;
  m.alpha = sf.alpha;
  m.uncorrelated = true;
  m.source_name = sf.source_name;
  return m;
}

double ew_objective(const MultiFactorModel& model, std::span<const int> support) {
  const int k = static_cast<int>(support.size());
  if (k == 0) raise(ErrorKind::Argument, "empty support");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(model.m());
  double idio = 0.0;
  for (int i : support) {
    b += model.loadings.col(i);
    idio += model.sigma_eps2[i];
  }
  const double sys = b.dot(model.factor_cov * b);
  return (sys + idio) / (static_cast<double>(k) * k);
}

double ew_objective(const SingleFactorModel& model, std::span<const int> support) {
  const int k = static_cast<int>(support.size());
  if (k == 0) raise(ErrorKind::Argument, "empty support");
  double beta_sum = 0.0, idio = 0.0;
  for (int i : support) {
    beta_sum += model.beta[i];
    idio += model.sigma_eps2[i];
  }
  return (model.sigma_f2 * beta_sum * beta_sum + idio) / (static_cast<double>(k) * k);
}

SingleFactorModel concat_instances(const std::vector<SingleFactorModel>& instances) {
  if (instances.empty()) raise(ErrorKind::Argument, "concat_instances: empty instance list");
  SingleFactorModel out;
  out.sigma_f2 = 1.0;
  std::string name;
  for (const auto& inst : instances) {
    const double sf = std::sqrt(inst.sigma_f2);
    for (int i = 0; i < inst.n(); ++i) {
      out.beta.push_back(inst.beta[i] * sf);
      out.alpha.push_back(i < static_cast<int>(inst.alpha.size()) ? inst.alpha[i] : 0.0);
      out.sigma_eps2.push_back(inst.sigma_eps2[i]);
    }
    if (!inst.source_name.empty()) name += (name.empty() ? "" : "+") + inst.source_name;
  }
  out.source_name = name;
  return out;
}

SingleFactorModel build_adhoc(const SingleFactorModel& instance) {
  if (instance.n() == 0) raise(ErrorKind::Argument, "build_adhoc: empty instance");
  const int n = instance.n();

  std::vector<int> by_beta(n);
  std::iota(by_beta.begin(), by_beta.end(), 0);
  std::stable_sort(by_beta.begin(), by_beta.end(),
                   [&](int a, int b) { return instance.beta[a] < instance.beta[b]; });

  std::vector<double> eps_desc = instance.sigma_eps2;
  std::sort(eps_desc.begin(), eps_desc.end(), std::greater<>());

  SingleFactorModel out;
  out.sigma_f2 = instance.sigma_f2;
  out.source_name = instance.source_name.empty() ? "adhoc" : instance.source_name + "-adhoc";
  out.beta.resize(n);
  out.alpha.resize(n);
  out.sigma_eps2 = std::move(eps_desc);
  for (int k = 0; k < n; ++k) {
    out.beta[k] = instance.beta[by_beta[k]];
    out.alpha[k] = instance.alpha.empty() ? 0.0 : instance.alpha[by_beta[k]];
  }
  return out;
}

void write_instance_csv(const SingleFactorModel& instance, std::ostream& out) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", instance.sigma_f2);
  out << "# sigma_f2=" << buf << '\n';
  if (!instance.source_name.empty()) out << "# source=" << instance.source_name << '\n';
  out << "asset,beta,alpha,sigma_eps2\n";
  for (int i = 0; i < instance.n(); ++i) {
    out << i;
    std::snprintf(buf, sizeof buf, "%.17g", instance.beta[i]);
    out << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.17g", instance.alpha.empty() ? 0.0 : instance.alpha[i]);
    out << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.17g", instance.sigma_eps2[i]);
    out << ',' << buf << '\n';
  }
}

SingleFactorModel read_instance_csv(std::istream& in) {
  SingleFactorModel inst;
  std::string line;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (line.find("sigma_f2") != std::string::npos && eq != std::string::npos)
        inst.sigma_f2 = std::stod(line.substr(eq + 1));
      else if (line.find("source") != std::string::npos && eq != std::string::npos)
        inst.source_name = line.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      if (line.rfind("asset,", 0) != 0)
        raise(ErrorKind::Format, "instance CSV: expected header at line " + std::to_string(lineno));
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ss, field, ',')) {
      try {
        vals.push_back(std::stod(field));
      } catch (const std::exception&) {
        raise(ErrorKind::Parse, "instance CSV: bad field '" + field + "' at line " + std::to_string(lineno));
      }
    }
    if (vals.size() != 4)
      raise(ErrorKind::Format, "instance CSV: expected 4 fields at line " + std::to_string(lineno));
    inst.beta.push_back(vals[1]);
    inst.alpha.push_back(vals[2]);
    inst.sigma_eps2.push_back(vals[3]);
  }
  if (inst.n() == 0) raise(ErrorKind::Format, "instance CSV: no data rows");
  return inst;
}

SingleFactorModel read_instance_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::Io, "cannot open " + path);
  return read_instance_csv(in);
}

}  // namespace ccmv
