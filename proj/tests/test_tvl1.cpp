/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "mixnorm/error.hpp"
#include "mixnorm/synth.hpp"
#include "mixnorm/tvl1.hpp"
#include "oracles.hpp"

using namespace mixnorm;
using namespace mixnorm::tvl1;

namespace {

std::vector<double> solve(const std::vector<double>& y, double lambda) {
  std::vector<double> x(y.size());
  tv_denoise(y, x, lambda);
  return x;
}

}  // namespace

TEST_SUITE("tvl1") {
  TEST_CASE("lambda zero is the identity") {
    const std::vector<double> y = {3.0, -1.0, 4.0, 1.0, -5.0};
    CHECK(solve(y, 0.0) == y);
    Section s(5, 2, 0.004, 10.0, 0.0, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(tv_denoise_section(s, TvParams{0.0}) == s);
  }

  TEST_CASE("constant trace is unchanged") {
    const std::vector<double> y(9, 2.5);
    for (double lambda : {0.1, 1.0, 100.0}) CHECK(solve(y, lambda) == y);
  }

  TEST_CASE("golden value for a single bump") {
    // Hand-derived: the middle sample drops by 2 lambda, each side pair
    // rises by lambda / 2.
    const std::vector<double> golden = {1.0, 1.0, 6.0, 1.0, 1.0};
    const auto x = solve({0, 0, 10, 0, 0}, 2.0);
    const auto ref = oracle::tv_dual({0, 0, 10, 0, 0}, 2.0);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(x[i] == doctest::Approx(golden[i]).epsilon(1e-12));
      CHECK(ref[i] == doctest::Approx(golden[i]).epsilon(1e-9));
    }
  }

  TEST_CASE("matches the dual coordinate-descent oracle on random traces") {
    std::mt19937_64 gen(20260101);
    std::uniform_int_distribution<int> len(1, 12);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    std::uniform_real_distribution<double> lam(0.0, 4.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> y(static_cast<std::size_t>(len(gen)));
      for (double& v : y) v = val(gen);
      const double lambda = lam(gen);
      const auto x = solve(y, lambda);
      const auto ref = oracle::tv_dual(y, lambda);
      for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(x[i] - ref[i]));
      CHECK(oracle::tv_objective(x, y, lambda) <= oracle::tv_objective(ref, y, lambda) + 1e-9);
    }
    CHECK(worst <= 1e-6);
  }

  TEST_CASE("mean, range and variation invariants on random traces") {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> y(200);
      for (double& v : y) v = noise(gen);
      const double lambda = 0.05 * trial;
      const auto x = solve(y, lambda);
      CHECK(std::accumulate(x.begin(), x.end(), 0.0) ==
            doctest::Approx(std::accumulate(y.begin(), y.end(), 0.0)).epsilon(1e-9));
      const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
      for (double v : x) {
        CHECK(v >= *lo - 1e-12);
        CHECK(v <= *hi + 1e-12);
      }
      CHECK(total_variation(x) <= total_variation(y) + 1e-9);
    }
  }

  TEST_CASE("lambda at or above lambda_max flattens to the mean") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> y(37);
      for (double& v : y) v = val(gen);
      const double mean = std::accumulate(y.begin(), y.end(), 0.0) / 37.0;
      const double lm = lambda_max(y);
      CHECK(std::isfinite(lm));
      for (double v : solve(y, lm * 1.0000001)) CHECK(v == doctest::Approx(mean).epsilon(1e-9));
      const auto below = solve(y, lm * 0.5);
      CHECK(total_variation(below) > 1e-9);
    }
  }

  TEST_CASE("section of identical traces gives identical outputs") {
    Section s(64, 4, 0.004, 10.0);
    for (std::size_t ix = 0; ix < 4; ++ix)
      for (std::size_t it = 0; it < 64; ++it) s.at(it, ix) = std::sin(0.3 * static_cast<double>(it));
    const Section out = tv_denoise_section(s, TvParams{0.2});
    for (std::size_t ix = 1; ix < 4; ++ix) CHECK(std::ranges::equal(out.trace(ix), out.trace(0)));
  }

  TEST_CASE("bad lambda is rejected") {
    std::vector<double> y(4, 0.0), x(4);
    CHECK_THROWS_AS(tv_denoise(y, x, -1.0), Error);
    CHECK_THROWS_AS(tv_denoise(y, x, std::numeric_limits<double>::quiet_NaN()), Error);
  }

  TEST_CASE("detect_spikes conventions") {
    const SpikeEditParams p{25, 6.0};
    CHECK(detect_spikes(Trace{0.004, std::vector<double>(100, 1.5)}, p).empty());
    CHECK(detect_spikes(Trace{0.004, std::vector<double>(100, 0.0)}, p).empty());

    Trace smooth{0.004, std::vector<double>(100)};
    for (std::size_t i = 0; i < 100; ++i) smooth.samples[i] = std::sin(0.1 * static_cast<double>(i));
    smooth.samples[42] += 50.0;
    const auto flags = detect_spikes(smooth, p);
    REQUIRE(flags.size() == 1);
    CHECK(flags[0] == 42);

    CHECK_THROWS_AS(detect_spikes(smooth, SpikeEditParams{24, 6.0}), Error);
    CHECK_THROWS_AS(detect_spikes(smooth, SpikeEditParams{101, 6.0}), Error);
  }

  TEST_CASE("interpolate_over examples") {
    const Trace t{0.004, {0.0, 8.0, 2.0}};
    CHECK(interpolate_over(t, std::vector<std::size_t>{}).samples == t.samples);
    CHECK(interpolate_over(t, std::vector<std::size_t>{1}).samples == std::vector<double>{0.0, 1.0, 2.0});
    const Trace lead{0.004, {5.0, 5.0, 3.0, 4.0}};
    CHECK(interpolate_over(lead, std::vector<std::size_t>{0, 1}).samples ==
          std::vector<double>{3.0, 3.0, 3.0, 4.0});
    CHECK(interpolate_over(lead, std::vector<std::size_t>{3}).samples ==
          std::vector<double>{5.0, 5.0, 3.0, 3.0});
    CHECK_THROWS_AS(interpolate_over(t, std::vector<std::size_t>{0, 1, 2}), Error);
    CHECK_THROWS_AS(interpolate_over(t, std::vector<std::size_t>{3}), Error);
  }

  TEST_CASE("despike preset recovers an injected spike on the demo") {
    const Section clean = synth::three_diffractor_demo().second;
    Section spiked = clean;
    const std::size_t it = 300, ix = 40;
    spiked.at(it, ix) += 10.0 * max_abs(clean);
    DespikeReport report;
    const Section out = despike_section(spiked, DespikeParams{}, &report);
    const double deviation = std::abs(out.at(it, ix) - clean.at(it, ix));
    MESSAGE("recovered " << out.at(it, ix) << " vs clean " << clean.at(it, ix)
                         << ", flagged " << report.flagged_samples);
    CHECK(deviation <= 0.1 * max_abs(clean));
    CHECK(report.tv_lambda == doctest::Approx(0.01 * max_abs(clean)).epsilon(0.05));
  }
}
