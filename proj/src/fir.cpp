#include "streamfilt/fir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "streamfilt/error.hpp"

namespace streamfilt {

namespace {

constexpr double kHammingTransitionFactor = 3.3;

// Hamming-windowed sinc low-pass with cutoff `cutoff_hz`, scaled so its
// taps sum to one.
std::vector<double> windowed_sinc_lowpass(std::size_t length, double cutoff_hz, double rate_hz) {
  const double fc = cutoff_hz / rate_hz;  // cycles per sample
  const double center = static_cast<double>(length - 1) / 2.0;
  const double denom = static_cast<double>(length - 1);
  std::vector<double> taps(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double m = static_cast<double>(i) - center;
    const double x = 2.0 * fc * m;
    const double sinc = m == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double window =
        length == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
    taps[i] = 2.0 * fc * sinc * window;
  }
  // Pairwise sum from the outside in keeps the normalization symmetric.
  double sum = taps[length / 2];
  for (std::size_t i = 0; i < length / 2; ++i) sum += taps[i] + taps[length - 1 - i];
  for (double& t : taps) t /= sum;
  return taps;
}

}  // namespace

void FilterSpec::validate() const {
  const double nyquist = sampling_rate_hz / 2.0;
  if (!(sampling_rate_hz > 0.0) || !std::isfinite(sampling_rate_hz))
    fail(Errc::invalid_spec, "sampling rate must be positive and finite");
  if (!(low_cut_hz > 0.0)) fail(Errc::invalid_spec, "low cut must be > 0 Hz");
  if (!(low_cut_hz < high_cut_hz)) fail(Errc::invalid_spec, "low cut must be below high cut");
  if (!(high_cut_hz < nyquist))
    fail(Errc::invalid_spec, "high cut must be below Nyquist (" + std::to_string(nyquist) + " Hz)");
  if (length_override) {
    if (*length_override < 3) fail(Errc::invalid_spec, "kernel length must be >= 3");
    if (*length_override % 2 == 0) fail(Errc::invalid_spec, "kernel length must be odd");
  }
}

TransitionBands transition_bands(const FilterSpec& spec) {
  spec.validate();
  const double nyquist = spec.sampling_rate_hz / 2.0;
  return {std::min(std::max(spec.low_cut_hz * 0.25, 2.0), spec.low_cut_hz),
          std::min(std::max(spec.high_cut_hz * 0.25, 2.0), nyquist - spec.high_cut_hz)};
}

std::size_t auto_length(const FilterSpec& spec) {
  const auto tb = transition_bands(spec);
  const double narrowest = std::min(tb.low_hz, tb.high_hz);
  auto length = static_cast<std::size_t>(
      std::llround(kHammingTransitionFactor * spec.sampling_rate_hz / narrowest));
  length = std::max<std::size_t>(length, 3);
  if (length % 2 == 0) ++length;
  return length;
}

FirKernel::FirKernel(std::vector<double> taps, FilterSpec spec)
    : taps_(std::move(taps)), spec_(std::move(spec)) {
  if (taps_.empty() || taps_.size() % 2 == 0)
    fail(Errc::invalid_spec, "kernel length must be odd, got " + std::to_string(taps_.size()));
  if (!(spec_.sampling_rate_hz > 0.0)) fail(Errc::invalid_spec, "kernel sampling rate must be positive");
  const std::size_t n = taps_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(taps_[i])) fail(Errc::invalid_spec, "kernel taps must be finite");
    if (taps_[i] != taps_[n - 1 - i]) fail(Errc::invalid_spec, "kernel taps must be symmetric");
  }
}

FirKernel design_bandpass(const FilterSpec& spec) {
  spec.validate();
  const std::size_t length = spec.length_override.value_or(auto_length(spec));

  const auto upper = windowed_sinc_lowpass(length, spec.high_cut_hz, spec.sampling_rate_hz);
  const auto lower = windowed_sinc_lowpass(length, spec.low_cut_hz, spec.sampling_rate_hz);
  std::vector<double> taps(length);
  for (std::size_t i = 0; i < length; ++i) taps[i] = upper[i] - lower[i];
  // Floating-point sin() is not guaranteed odd-symmetric to the last bit.
  for (std::size_t i = 0; i < length / 2; ++i) taps[length - 1 - i] = taps[i];
  return FirKernel(std::move(taps), spec);
}

std::vector<std::complex<double>> frequency_response(const FirKernel& kernel,
                                                     std::span<const double> freqs_hz) {
  const double rate = kernel.sampling_rate_hz();
  const double nyquist = rate / 2.0;
  const auto taps = kernel.taps();
  std::vector<std::complex<double>> response;
  response.reserve(freqs_hz.size());
  for (double f : freqs_hz) {
    if (!(f >= 0.0 && f <= nyquist))
      fail(Errc::invalid_argument, "frequency " + std::to_string(f) + " Hz outside [0, Nyquist]");
    const double w = 2.0 * std::numbers::pi * f / rate;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const double phase = w * static_cast<double>(k);
      re += taps[k] * std::cos(phase);
      im -= taps[k] * std::sin(phase);
    }
    response.emplace_back(re, im);
  }
  return response;
}

}  // namespace streamfilt
