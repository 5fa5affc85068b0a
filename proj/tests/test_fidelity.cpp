#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "streamfilt/error.hpp"
#include "streamfilt/fidelity.hpp"

using namespace streamfilt;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected streamfilt::Error");
  return Errc::invalid_argument;
}

SignalMatrix matrix(std::vector<std::vector<double>> rows) {
  std::vector<double> data;
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  const std::size_t channels = rows.size();
  const std::size_t samples = rows.front().size();
  return SignalMatrix({100.0, channels, samples, default_labels(channels)}, std::move(data));
}

}  // namespace

TEST_CASE("pearson basic values", "[fidelity]") {
  const std::vector<double> x{1, 2, 3, 4, 5.5};
  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  CHECK(pearson(x, x) == 1.0);
  CHECK(pearson(x, neg) == -1.0);

  // numpy.corrcoef([1,2,3],[1,2,4])
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{1, 2, 4};
  CHECK(pearson(a, b) == Catch::Approx(0.9819805060619656).margin(1e-12));
}

TEST_CASE("pearson errors", "[fidelity]") {
  const std::vector<double> flat{2, 2, 2, 2};
  const std::vector<double> ramp{1, 2, 3, 4};
  CHECK(code_of([&] { pearson(flat, ramp); }) == Errc::undefined_correlation);
  CHECK(code_of([&] { pearson(ramp, flat); }) == Errc::undefined_correlation);
  const std::vector<double> shorter{1, 2, 3};
  CHECK(code_of([&] { pearson(ramp, shorter); }) == Errc::invalid_argument);
  const std::vector<double> one{1};
  CHECK(code_of([&] { pearson(one, one); }) == Errc::invalid_argument);
  // A constant whose mean cannot be represented exactly is still constant.
  const std::vector<double> tenths(1000, 0.1);
  CHECK(code_of([&] { pearson(tenths, std::vector<double>(1000, 0.3)); }) == Errc::undefined_correlation);
}

TEST_CASE("pearson matches the two-pass oracle on random vectors", "[fidelity][property]") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 500;
    const auto x = oracle::random_vector(rng, n, 1e-5);
    auto y = oracle::random_vector(rng, n, 1e-5);
    for (std::size_t i = 0; i < n; ++i) y[i] += 0.5 * x[i];
    REQUIRE(std::abs(pearson(x, y) - oracle::pearson_two_pass(x, y)) <= 1e-12);
  }
}

TEST_CASE("pearson symmetry and affine invariance", "[fidelity][property]") {
  std::mt19937_64 rng(31415);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 200;
    const auto x = oracle::random_vector(rng, n);
    const auto y = oracle::random_vector(rng, n);
    REQUIRE(pearson(x, y) == pearson(y, x));

    std::uniform_real_distribution<double> alpha_dist(0.1, 10.0);
    std::uniform_real_distribution<double> beta_dist(-5.0, 5.0);
    const double alpha = alpha_dist(rng);
    const double beta = beta_dist(rng);
    std::vector<double> scaled(n), flipped(n);
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = alpha * x[i] + beta;
      flipped[i] = -alpha * x[i] + beta;
    }
    const double r = pearson(x, y);
    REQUIRE(std::abs(pearson(scaled, y) - r) <= 1e-12);
    REQUIRE(std::abs(pearson(flipped, y) + r) <= 1e-12);
  }
}

TEST_CASE("compare_channels of identical signals is all ones", "[fidelity]") {
  const auto m = matrix({{1, 3, 2, 5}, {0, -1, 4, 4}, {7, 1, 1, 2}});
  const auto report = compare_channels(m, m, "same");
  CHECK(report.config_label == "same");
  REQUIRE(report.per_channel.size() == 3);
  for (const auto& c : report.per_channel) {
    CHECK(c.defined);
    CHECK(c.r == 1.0);
  }
  CHECK(report.min_r == 1.0);
  CHECK(report.max_r == 1.0);
  CHECK(report.median_r == 1.0);
}

TEST_CASE("compare_channels flags constant channels and summarizes the rest", "[fidelity]") {
  const auto a = matrix({{1, 2, 3, 4}, {5, 5, 5, 5}, {1, 2, 3, 4}, {4, 1, 3, 2}});
  const auto b = matrix({{1, 2, 3, 4}, {1, 2, 3, 4}, {4, 3, 2, 1}, {1, 2, 3, 4}});
  const auto report = compare_channels(a, b, "mixed");
  CHECK_FALSE(report.per_channel[1].defined);
  CHECK(std::isnan(report.per_channel[1].r));
  CHECK(report.defined_count() == 3);
  CHECK(report.min_r == -1.0);
  CHECK(report.max_r == 1.0);
  CHECK(report.median_r == Catch::Approx(oracle::pearson_two_pass(a.channel(3), b.channel(3))));
  CHECK(report.min_r <= report.median_r);
  CHECK(report.median_r <= report.max_r);

  const auto csv = fidelity_csv(report);
  CHECK(csv.starts_with("channel,r,defined\n0,1,1\n1,nan,0\n2,-1,1\n"));
  CHECK(csv.find("\nmin,-1,1\n") != std::string::npos);
  CHECK(csv.ends_with("max,1,1\n"));
}

TEST_CASE("compare_channels errors", "[fidelity]") {
  const auto a = matrix({{1, 2, 3, 4}});
  const auto b = matrix({{1, 2, 3}});
  CHECK(code_of([&] { compare_channels(a, b, "x"); }) == Errc::shape_mismatch);
  const auto flat = matrix({{1, 1, 1, 1}, {2, 2, 2, 2}});
  CHECK(code_of([&] { compare_channels(flat, flat, "x"); }) == Errc::undefined_correlation);
}

TEST_CASE("threaded comparison is deterministic", "[fidelity]") {
  std::mt19937_64 rng(1);
  std::vector<std::vector<double>> ra, rb;
  for (int c = 0; c < 9; ++c) {
    ra.push_back(oracle::random_vector(rng, 300));
    rb.push_back(oracle::random_vector(rng, 300));
  }
  const auto a = matrix(ra);
  const auto b = matrix(rb);
  const auto seq = compare_channels(a, b, "x", 1);
  const auto par = compare_channels(a, b, "x", 4);
  for (std::size_t c = 0; c < 9; ++c) CHECK(seq.per_channel[c].r == par.per_channel[c].r);
  CHECK(seq.median_r == par.median_r);
}
