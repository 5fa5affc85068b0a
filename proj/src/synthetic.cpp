#include "streamfilt/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "streamfilt/error.hpp"

namespace streamfilt {

double GaussianSource::uniform_open() {
  // 53 random mantissa bits, shifted into (0, 1] so log() is always finite.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

SignalMatrix generate_synthetic(const SyntheticSpec& spec) {
  spec.info.validate();
  const double rate = spec.info.sampling_rate_hz;
  const double nyquist = rate / 2.0;
  for (const auto& comp : spec.components) {
    if (!std::isfinite(comp.frequency_hz) || comp.frequency_hz < 0.0)
      fail(Errc::invalid_argument, "component frequency must be finite and non-negative");
    if (comp.frequency_hz >= nyquist)
      fail(Errc::nyquist_violation, "component at " + std::to_string(comp.frequency_hz) +
                                        " Hz is not below Nyquist (" +
                                        std::to_string(nyquist) + " Hz)");
  }
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma))
    fail(Errc::invalid_argument, "noise_sigma must be finite and >= 0");

  const std::size_t n = spec.info.sample_count;
  std::vector<double> data(spec.info.channel_count * n, 0.0);
  GaussianSource noise(spec.seed);
  for (std::size_t c = 0; c < spec.info.channel_count; ++c) {
    double* row = data.data() + c * n;
    for (const auto& comp : spec.components) {
      const double omega = 2.0 * std::numbers::pi * comp.frequency_hz;
      const double phase = comp.phase_rad + static_cast<double>(c) * comp.phase_step_rad;
      for (std::size_t k = 0; k < n; ++k)
        row[k] += comp.amplitude * std::sin(omega * static_cast<double>(k) / rate + phase);
    }
    if (spec.noise_sigma > 0.0)
      for (std::size_t k = 0; k < n; ++k) row[k] += spec.noise_sigma * noise.next();
  }
  return SignalMatrix(spec.info, std::move(data));
}

SyntheticSpec eeg_like_spec(std::size_t channels, std::size_t samples, double rate_hz,
                            std::uint64_t seed) {
  struct Band {
    double hz;
    double microvolts;
  };
  // delta, theta, alpha, beta, high beta, gamma, line-adjacent
  constexpr Band bands[] = {{1.0, 20.0}, {4.0, 15.0}, {10.0, 20.0}, {18.0, 10.0},
                            {25.0, 8.0}, {40.0, 12.0}, {50.0, 8.0}};
  SyntheticSpec spec;
  spec.seed = seed;
  spec.noise_sigma = 10.0e-6;
  spec.info = SignalInfo{rate_hz, channels, samples, default_labels(channels)};
  const double step = channels > 0 ? 2.0 * std::numbers::pi / static_cast<double>(channels) : 0.0;
  int index = 1;
  for (const auto& band : bands) {
    if (band.hz < rate_hz / 2.0)
      spec.components.push_back({band.hz, band.microvolts * 1e-6, 0.0, step * index});
    ++index;
  }
  return spec;
}

}  // namespace streamfilt
