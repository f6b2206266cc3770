#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccmv {

/// Weekly market prices for an index plus n_assets securities.
/// Row-major: prices[t][i] is asset i at period t; index stored separately.
struct PriceTable {
  int n_assets = 0;
  int n_periods = 0;
  std::vector<double> index_prices;               // length n_periods
  std::vector<std::vector<double>> asset_prices;  // n_periods x n_assets
  std::string source_name;
};

enum class ReturnScheme { Simple, Log };

/// Per-period returns derived from a PriceTable (one fewer row than prices).
struct ReturnTable {
  int n_assets = 0;
  int n_periods_returns = 0;
  std::vector<double> index_returns;
  std::vector<std::vector<double>> asset_returns;  // n_periods_returns x n_assets
  std::vector<double> mean_returns;                // per asset
  std::string source_name;
};

// Token stream: first token is the asset count N, followed by rows of
// N+1 strictly positive prices (index first). Any whitespace separates tokens.
PriceTable parse_indtrack(std::istream& in, const std::string& source_name = "");
PriceTable parse_indtrack_file(const std::string& path);

// Inverse of parse_indtrack, full precision; parse(serialize(t)) == t.
void serialize_indtrack(const PriceTable& table, std::ostream& out);

ReturnTable compute_returns(const PriceTable& prices, ReturnScheme scheme = ReturnScheme::Simple);

}  // namespace ccmv
