#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "streamfilt/signal.hpp"

namespace streamfilt {

/// One sinusoid in a synthetic recording. Channel c receives the phase
/// `phase_rad + c * phase_step_rad`.
struct SineComponent {
  double frequency_hz = 0.0;
  double amplitude = 0.0;
  double phase_rad = 0.0;
  double phase_step_rad = 0.0;
};

struct SyntheticSpec {
  std::uint64_t seed = 0;
  std::vector<SineComponent> components;
  double noise_sigma = 0.0;
  SignalInfo info;
};

/// Portable standard-normal source.
///
/// Uses std::mt19937_64, whose output sequence is fixed by the C++
/// standard, and the Box-Muller transform on 53-bit uniforms. The
/// library's std::normal_distribution is avoided because its algorithm is
/// implementation-defined.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform_open();  // (0, 1]

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Sum of sinusoids per channel plus Gaussian noise. Bit-identical for
/// identical specs. Throws Error(nyquist_violation) if a component sits at
/// or above half the sampling rate.
SignalMatrix generate_synthetic(const SyntheticSpec& spec);

/// A broadband EEG-like default: seven sinusoids spanning 1-50 Hz plus
/// noise, amplitudes in volts. Components at or above Nyquist are dropped.
SyntheticSpec eeg_like_spec(std::size_t channels, std::size_t samples, double rate_hz,
                            std::uint64_t seed);

}  // namespace streamfilt
