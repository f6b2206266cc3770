#pragma once

#include <cstdint>

#include "ccmv/instance.hpp"
#include "ccmv/prices.hpp"

namespace ccmv {

// splitmix64 stream with a Box-Muller normal; self-contained so generated
// fixtures are bit-identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform on [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal();  // standard normal via Box-Muller

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct PriceGenParams {
  int n_assets = 225;
  int n_periods = 291;  // weekly prices
  std::uint64_t seed = 20240501;
  double index_drift = 0.0005;    // weekly log drift
  double index_vol = 0.025;       // weekly index volatility
  double beta_lo = -0.2;          // loading range
  double beta_hi = 1.9;
  double idio_vol_lo = 0.012;     // weekly idiosyncratic volatility range
  double idio_vol_hi = 0.055;
  double idio_beta_slope = 0.6;   // low-beta names carry more idiosyncratic risk
};

// Weekly prices from a single-factor log-return process. Low-beta assets
// lean toward the high end of the idiosyncratic range, which mirrors the
// heterogeneity of real index-tracking data.
PriceTable generate_price_table(const PriceGenParams& params);

// Small random instances for randomized checks; betas centered near 1 with
// an occasional negative, idiosyncratic variances of the same order as the
// systematic term.
SingleFactorModel random_sf_instance(Rng& rng, int n);

/// Random multi-factor coefficients; correlated draws a full PSD factor_cov.
MultiFactorModel random_mf_model(Rng& rng, int n, int m, bool correlated);

}  // namespace ccmv
