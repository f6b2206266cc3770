#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ccmv/errors.hpp"
#include "ccmv/prices.hpp"

using namespace ccmv;

namespace {
std::string fixture_path(const std::string& name) { return std::string(CCMV_FIXTURE_DIR) + "/" + name; }
}  // namespace

TEST_CASE("parse_indtrack: minimal well-formed stream") {
  std::istringstream in("2  10 5 4  11 6 4.2");
  const PriceTable t = parse_indtrack(in);
  CHECK(t.n_assets == 2);
  CHECK(t.n_periods == 2);
  CHECK(t.index_prices[0] == 10.0);
  CHECK(t.index_prices[1] == 11.0);
  CHECK(t.asset_prices[0][0] == 5.0);
  CHECK(t.asset_prices[0][1] == 4.0);
  CHECK(t.asset_prices[1][0] == 6.0);
  CHECK(t.asset_prices[1][1] == 4.2);
}

TEST_CASE("parse_indtrack: token count not divisible by N+1") {
  std::istringstream in("2  10 5");
  CHECK_THROWS_AS(parse_indtrack(in), Error);
  std::istringstream in2("2  10 5");
  try {
    parse_indtrack(in2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
  }
}

TEST_CASE("parse_indtrack: non-numeric token reports its position") {
  std::istringstream in("2  10 abc 4  11 6 4.2");
  try {
    parse_indtrack(in);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("abc") != std::string::npos);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("parse_indtrack: non-positive price is a data error") {
  std::istringstream in("1  10 5  11 -6");
  try {
    parse_indtrack(in);
    FAIL("expected a data error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Data);
  }
}

TEST_CASE("parse/serialize round trip is identity") {
  std::istringstream in("3  10 5 4 7.25  11 6 4.2 7.5  12.5 6.5 4.4 8");
  const PriceTable t = parse_indtrack(in);
  std::ostringstream out;
  serialize_indtrack(t, out);
  std::istringstream back(out.str());
  const PriceTable t2 = parse_indtrack(back);
  REQUIRE(t2.n_assets == t.n_assets);
  REQUIRE(t2.n_periods == t.n_periods);
  CHECK(t2.index_prices == t.index_prices);
  CHECK(t2.asset_prices == t.asset_prices);
}

TEST_CASE("compute_returns: simple hand arithmetic") {
  std::istringstream in("1  10 10  11 11");
  const ReturnTable r = compute_returns(parse_indtrack(in), ReturnScheme::Simple);
  CHECK(r.n_periods_returns == 1);
  CHECK(r.index_returns[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.asset_returns[0][0] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("compute_returns: constant prices give zero returns in both schemes") {
  std::istringstream in("1  10 10  10 10  10 10");
  const PriceTable t = parse_indtrack(in);
  for (const auto scheme : {ReturnScheme::Simple, ReturnScheme::Log}) {
    const ReturnTable r = compute_returns(t, scheme);
    REQUIRE(r.n_periods_returns == 2);
    CHECK(r.index_returns[0] == 0.0);
    CHECK(r.index_returns[1] == 0.0);
    CHECK(r.asset_returns[0][0] == 0.0);
  }
}

TEST_CASE("compute_returns: single period is insufficient") {
  std::istringstream in("1  10 5");
  const PriceTable t = parse_indtrack(in);
  CHECK_THROWS_AS(compute_returns(t), Error);
}

TEST_CASE("compute_returns: geometric price path gives constant simple returns") {
  PriceTable t;
  t.n_assets = 1;
  t.n_periods = 12;
  const double growth = 0.0173;
  double p = 50.0;
  for (int i = 0; i < t.n_periods; ++i) {
    t.index_prices.push_back(p);
    t.asset_prices.push_back({p * 2});
    p *= 1.0 + growth;
  }
  const ReturnTable r = compute_returns(t);
  for (double v : r.index_returns) CHECK(v == doctest::Approx(growth).epsilon(1e-12));
  CHECK(r.mean_returns[0] == doctest::Approx(growth).epsilon(1e-12));
}

TEST_CASE("mini fixture: recorded oracle values") {
  const PriceTable t = parse_indtrack_file(fixture_path("mini_indtrack.txt"));
  CHECK(t.n_assets == 8);
  CHECK(t.n_periods == 40);
  const ReturnTable r = compute_returns(t);
  CHECK(r.n_periods_returns == 39);
  double mean = 0.0;
  for (double v : r.index_returns) mean += v;
  mean /= r.n_periods_returns;
  // frozen from an independent script over the committed file
  CHECK(mean == doctest::Approx(0.00049520298026163915).epsilon(1e-12));
}

TEST_CASE("mean_returns matches the column average") {
  const PriceTable t = parse_indtrack_file(fixture_path("mini_indtrack.txt"));
  const ReturnTable r = compute_returns(t);
  for (int i = 0; i < r.n_assets; ++i) {
    double s = 0.0;
    for (int tt = 0; tt < r.n_periods_returns; ++tt) s += r.asset_returns[tt][i];
    CHECK(r.mean_returns[i] == doctest::Approx(s / r.n_periods_returns).epsilon(1e-12));
  }
}
