#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "streamfilt/error.hpp"
#include "streamfilt/signal.hpp"
#include "streamfilt/signal_io.hpp"
#include "streamfilt/synthetic.hpp"

using namespace streamfilt;

namespace {

SignalInfo make_info(std::size_t channels, std::size_t samples, double rate = 600.0) {
  return SignalInfo{rate, channels, samples, default_labels(channels)};
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected streamfilt::Error");
  return Errc::invalid_argument;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("SignalInfo invariants", "[signal]") {
  CHECK_NOTHROW(make_info(2, 4).validate());
  CHECK(code_of([] { make_info(2, 4, 0.0).validate(); }) == Errc::invariant_violation);
  CHECK(code_of([] { make_info(2, 0).validate(); }) == Errc::invariant_violation);
  CHECK(code_of([] { SignalInfo{600.0, 0, 4, {}}.validate(); }) == Errc::invariant_violation);
  CHECK(code_of([] { SignalInfo{600.0, 2, 4, {"a"}}.validate(); }) == Errc::invariant_violation);
  CHECK(code_of([] { SignalInfo{600.0, 2, 4, {"a", "a"}}.validate(); }) == Errc::invariant_violation);
}

TEST_CASE("SignalMatrix enforces shape and finiteness", "[signal]") {
  CHECK(code_of([] { SignalMatrix(make_info(2, 4), std::vector<double>(7)); }) == Errc::shape_mismatch);
  std::vector<double> data(8, 1.0);
  data[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([&] { SignalMatrix(make_info(2, 4), data); }) == Errc::invariant_violation);
  data[3] = std::numeric_limits<double>::infinity();
  CHECK(code_of([&] { SignalMatrix(make_info(2, 4), data); }) == Errc::invariant_violation);

  SignalMatrix m(make_info(2, 3), {1, 2, 3, 4, 5, 6});
  CHECK(m.channel(1)[0] == 4.0);
  CHECK(code_of([&] { (void)m.channel(2); }) == Errc::invalid_argument);
}

TEST_CASE("replicate tiles each channel along time", "[signal]") {
  SignalMatrix m(make_info(2, 2), {1, 2, 3, 4});
  auto r = replicate(m, 3);
  CHECK(r.samples() == 6);
  CHECK(std::vector<double>(r.channel(0).begin(), r.channel(0).end()) == std::vector<double>{1, 2, 1, 2, 1, 2});
  CHECK(std::vector<double>(r.channel(1).begin(), r.channel(1).end()) == std::vector<double>{3, 4, 3, 4, 3, 4});
}

TEST_CASE("generate_synthetic matches a closed-form sinusoid", "[synthetic]") {
  SyntheticSpec spec;
  spec.seed = 1;
  spec.components = {{10.0, 1.0, 0.0, 0.0}};
  spec.info = make_info(1, 1200, 600.0);
  const auto m = generate_synthetic(spec);
  for (std::size_t k = 0; k < m.samples(); ++k)
    REQUIRE(m.channel(0)[k] == Catch::Approx(std::sin(2.0 * std::numbers::pi * 10.0 * k / 600.0)).margin(1e-12));
}

TEST_CASE("generate_synthetic is a pure function of its spec", "[synthetic]") {
  auto spec = eeg_like_spec(4, 5000, 600.614, 42);
  CHECK(generate_synthetic(spec) == generate_synthetic(spec));
  auto other = spec;
  other.seed = 43;
  CHECK_FALSE(generate_synthetic(spec) == generate_synthetic(other));
}

TEST_CASE("generate_synthetic noise has the requested spread", "[synthetic]") {
  SyntheticSpec spec;
  spec.seed = 2024;
  spec.noise_sigma = 1.0;
  spec.info = make_info(2, 1'000'000, 600.0);
  const auto m = generate_synthetic(spec);
  for (std::size_t c = 0; c < m.channels(); ++c) {
    const auto row = m.channel(c);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= row.size();
    double ss = 0.0;
    for (double v : row) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (row.size() - 1));
    CHECK(std::abs(sd - 1.0) < 0.01);
    CHECK(std::abs(mean) < 0.01);
  }
}

TEST_CASE("generate_synthetic rejects components at or above Nyquist", "[synthetic]") {
  SyntheticSpec spec;
  spec.info = make_info(1, 100, 100.0);
  spec.components = {{50.0, 1.0, 0.0, 0.0}};
  CHECK(code_of([&] { generate_synthetic(spec); }) == Errc::nyquist_violation);
  spec.components = {{49.9, 1.0, 0.0, 0.0}};
  CHECK_NOTHROW(generate_synthetic(spec));
  spec.noise_sigma = -1.0;
  CHECK(code_of([&] { generate_synthetic(spec); }) == Errc::invalid_argument);
}

TEST_CASE("eeg_like_spec drops components above Nyquist", "[synthetic]") {
  CHECK(eeg_like_spec(2, 10, 600.614, 1).components.size() == 7);
  CHECK(eeg_like_spec(2, 10, 100.0, 1).components.size() == 6);
}

TEST_CASE("paper geometry has the expected duration", "[signal]") {
  const auto info = make_info(59, 166800, 600.614);
  CHECK(std::abs(info.duration_s() - 277.7) <= 0.05);
}

TEST_CASE("store then load round-trips a small matrix", "[io]") {
  oracle::TempDir dir("io");
  SignalMatrix m(SignalInfo{250.0, 2, 4, {"Fz", "Cz"}}, {0.5, -1.25, 3e-6, 1e300, -0.0, 7.0, 8.5, -9.75});
  store_signal(m, dir / "sig");
  const auto back = load_signal(dir / "sig");
  CHECK(back == m);
  CHECK(std::signbit(back.channel(1)[0]));
  // The extension-qualified name resolves to the same pair.
  CHECK(load_signal(dir / "sig.json") == m);
}

TEST_CASE("round-trip is bit-exact for random matrices", "[io][property]") {
  oracle::TempDir dir("prop");
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t channels = 1 + rng() % 5;
    const std::size_t samples = 1 + rng() % 300;
    std::vector<double> data(channels * samples);
    for (auto& v : data) {
      do {
        v = std::bit_cast<double>(bits(rng));
      } while (!std::isfinite(v));
    }
    SignalMatrix m(make_info(channels, samples, 1.0 + static_cast<double>(rng() % 10000) / 7.0), data);
    store_signal(m, dir / "p");
    const auto back = load_signal(dir / "p");
    REQUIRE(back.info() == m.info());
    REQUIRE(std::memcmp(back.data().data(), m.data().data(), data.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("store_signal payload encoding", "[io]") {
  oracle::TempDir dir("enc");
  store_signal(SignalMatrix(make_info(1, 1), {0.0}), dir / "zero");
  const auto payload = slurp(dir / "zero.f64");
  CHECK(payload == std::string(8, '\0'));

  store_signal(SignalMatrix(make_info(1, 1), {1.0}), dir / "one");
  // 1.0 = 0x3FF0000000000000, little-endian on disk.
  CHECK(slurp(dir / "one.f64") == std::string("\0\0\0\0\0\0\xf0\x3f", 8));
}

TEST_CASE("paper-sized payload has the exact byte count", "[io]") {
  oracle::TempDir dir("big");
  SignalMatrix m(make_info(59, 166800, 600.614), std::vector<double>(59 * 166800, 0.25));
  store_signal(m, dir / "paper");
  CHECK(std::filesystem::file_size(dir / "paper.f64") == 59ull * 166800ull * 8ull);
}

TEST_CASE("store/load/store yields identical bytes", "[io]") {
  oracle::TempDir dir("det");
  const auto m = generate_synthetic(eeg_like_spec(3, 500, 600.614, 5));
  store_signal(m, dir / "a");
  store_signal(load_signal(dir / "a"), dir / "b");
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.f64") == slurp(dir / "b.f64"));
}

TEST_CASE("load_signal reports distinct errors", "[io]") {
  oracle::TempDir dir("err");
  SignalMatrix m(make_info(2, 4), {1, 2, 3, 4, 5, 6, 7, 8});

  SECTION("missing files") {
    CHECK(code_of([&] { load_signal(dir / "nope"); }) == Errc::file_missing);
    store_signal(m, dir / "sig");
    std::filesystem::remove(dir / "sig.f64");
    CHECK(code_of([&] { load_signal(dir / "sig"); }) == Errc::file_missing);
  }
  SECTION("payload truncated by one sample") {
    store_signal(m, dir / "sig");
    std::filesystem::resize_file(dir / "sig.f64", 7 * sizeof(double));
    CHECK(code_of([&] { load_signal(dir / "sig"); }) == Errc::dimension_mismatch);
  }
  SECTION("malformed header") {
    store_signal(m, dir / "sig");
    write_file_atomic(dir / "sig.json", "{not json");
    CHECK(code_of([&] { load_signal(dir / "sig"); }) == Errc::malformed_header);
    write_file_atomic(dir / "sig.json", R"({"format_version":1,"sampling_rate_hz":600})");
    CHECK(code_of([&] { load_signal(dir / "sig"); }) == Errc::malformed_header);
    write_file_atomic(dir / "sig.json",
                      R"({"format_version":2,"sampling_rate_hz":600,"channel_count":2,"sample_count":4,"channel_labels":["a","b"]})");
    CHECK(code_of([&] { load_signal(dir / "sig"); }) == Errc::malformed_header);
    write_file_atomic(dir / "sig.json",
                      R"({"format_version":1,"sampling_rate_hz":"fast","channel_count":2,"sample_count":4,"channel_labels":["a","b"]})");
    CHECK(code_of([&] { load_signal(dir / "sig"); }) == Errc::malformed_header);
  }
  SECTION("zero sampling rate violates the invariant") {
    store_signal(m, dir / "sig");
    write_file_atomic(dir / "sig.json",
                      R"({"format_version":1,"sampling_rate_hz":0,"channel_count":2,"sample_count":4,"channel_labels":["a","b"]})");
    CHECK(code_of([&] { load_signal(dir / "sig"); }) == Errc::invariant_violation);
  }
}

TEST_CASE("store_signal fails on an unwritable path", "[io]") {
  SignalMatrix m(make_info(1, 1), {0.0});
  CHECK(code_of([&] { store_signal(m, "/nonexistent-dir/for/sure/sig"); }) == Errc::io_failure);
}

TEST_CASE("load_csv reads one column per channel", "[io]") {
  oracle::TempDir dir("csv");
  write_file_atomic(dir / "in.csv", "Fp1,Fp2\n1.5,2\n-3,4e-6\n5,6\n");
  const auto m = load_csv(dir / "in.csv", 128.0);
  CHECK(m.channels() == 2);
  CHECK(m.samples() == 3);
  CHECK(m.info().channel_labels == std::vector<std::string>{"Fp1", "Fp2"});
  CHECK(m.channel(0)[1] == -3.0);
  CHECK(m.channel(1)[1] == 4e-6);

  write_file_atomic(dir / "bad.csv", "a,b\n1,2\n3\n");
  CHECK(code_of([&] { load_csv(dir / "bad.csv", 128.0); }) == Errc::dimension_mismatch);
  write_file_atomic(dir / "nan.csv", "a\n1\nx\n");
  CHECK(code_of([&] { load_csv(dir / "nan.csv", 128.0); }) == Errc::malformed_header);
}
