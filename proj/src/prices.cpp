#include "ccmv/prices.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ccmv/errors.hpp"

namespace ccmv {

namespace {

// Reads every whitespace-separated token, parsing as double. Reports the
// 1-based token position on failure.
std::vector<double> read_tokens(std::istream& in) {
  std::vector<double> values;
  std::string tok;
  std::size_t pos = 0;
  while (in >> tok) {
    ++pos;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      raise(ErrorKind::Parse, "non-numeric token '" + tok + "' at position " + std::to_string(pos));
    }
    if (used != tok.size() || !std::isfinite(v))
      raise(ErrorKind::Parse, "non-numeric token '" + tok + "' at position " + std::to_string(pos));
    values.push_back(v);
  }
  return values;
}

}  // namespace

PriceTable parse_indtrack(std::istream& in, const std::string& source_name) {
  const std::vector<double> tokens = read_tokens(in);
  if (tokens.empty()) raise(ErrorKind::Format, "empty input stream");

  const double n_raw = tokens.front();
  if (n_raw < 1.0 || n_raw != std::floor(n_raw))
    raise(ErrorKind::Format, "first token must be a positive asset count, got " + std::to_string(n_raw));
  const int n = static_cast<int>(n_raw);

  const std::size_t remaining = tokens.size() - 1;
  const std::size_t row = static_cast<std::size_t>(n) + 1;
  if (remaining == 0 || remaining % row != 0)
    raise(ErrorKind::Format, "token count " + std::to_string(remaining) +
                                 " after asset count is not a positive multiple of N+1=" + std::to_string(row));

  PriceTable table;
  table.n_assets = n;
  table.n_periods = static_cast<int>(remaining / row);
  table.source_name = source_name;
  table.index_prices.resize(table.n_periods);
  table.asset_prices.assign(table.n_periods, std::vector<double>(n));

  std::size_t k = 1;
  for (int t = 0; t < table.n_periods; ++t) {
    for (int i = 0; i <= n; ++i, ++k) {
      const double v = tokens[k];
      if (v <= 0.0)
        raise(ErrorKind::Data, "non-positive price " + std::to_string(v) + " at period " + std::to_string(t) +
                                   ", column " + std::to_string(i));
      if (i == 0)
        table.index_prices[t] = v;
      else
        table.asset_prices[t][i - 1] = v;
    }
  }
  return table;
}

PriceTable parse_indtrack_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::Io, "cannot open " + path);
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (const auto dot = name.find_last_of('.'); dot != std::string::npos) name = name.substr(0, dot);
  return parse_indtrack(in, name);
}

void serialize_indtrack(const PriceTable& table, std::ostream& out) {
  char buf[40];
  out << table.n_assets << '\n';
  for (int t = 0; t < table.n_periods; ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", table.index_prices[t]);
    out << buf;
    for (int i = 0; i < table.n_assets; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", table.asset_prices[t][i]);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

ReturnTable compute_returns(const PriceTable& prices, ReturnScheme scheme) {
  if (prices.n_periods < 2)
    raise(ErrorKind::InsufficientData,
          "need at least 2 price periods, got " + std::to_string(prices.n_periods));

  ReturnTable r;
  r.n_assets = prices.n_assets;
  r.n_periods_returns = prices.n_periods - 1;
  r.source_name = prices.source_name;
  r.index_returns.resize(r.n_periods_returns);
  r.asset_returns.assign(r.n_periods_returns, std::vector<double>(r.n_assets));

  const auto rate = [scheme](double prev, double cur) {
    return scheme == ReturnScheme::Simple ? (cur - prev) / prev : std::log(cur / prev);
  };

  for (int t = 0; t < r.n_periods_returns; ++t) {
    r.index_returns[t] = rate(prices.index_prices[t], prices.index_prices[t + 1]);
    for (int i = 0; i < r.n_assets; ++i)
      r.asset_returns[t][i] = rate(prices.asset_prices[t][i], prices.asset_prices[t + 1][i]);
  }

  r.mean_returns.assign(r.n_assets, 0.0);
  for (int i = 0; i < r.n_assets; ++i) {
    double s = 0.0;
    for (int t = 0; t < r.n_periods_returns; ++t) s += r.asset_returns[t][i];
    r.mean_returns[i] = s / r.n_periods_returns;
  }
  return r;
}

}  // namespace ccmv
