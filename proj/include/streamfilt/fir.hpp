#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace streamfilt {

struct FilterSpec {
  double low_cut_hz = 2.0;
  double high_cut_hz = 30.0;
  double sampling_rate_hz = 0.0;
  std::optional<std::size_t> length_override;

  /// Throws Error(invalid_spec) unless 0 < low < high < rate/2 and any
  /// override is odd and >= 3.
  void validate() const;
};

struct TransitionBands {
  double low_hz;
  double high_hz;
};

/// Transition widths below the low cut and above the high cut:
/// 25% of the edge frequency, at least 2 Hz, and never past 0 Hz or
/// Nyquist.
TransitionBands transition_bands(const FilterSpec& spec);

/// Default kernel length: 3.3 * rate / narrowest transition width,
/// rounded to the nearest integer and bumped to the next odd value.
std::size_t auto_length(const FilterSpec& spec);

/// Linear-phase FIR kernel with an odd number of symmetric taps.
class FirKernel {
 public:
  /// Wraps existing taps. Throws Error(invalid_spec) if the length is even
  /// or the taps are not finite and exactly symmetric.
  FirKernel(std::vector<double> taps, FilterSpec spec);

  std::span<const double> taps() const noexcept { return taps_; }
  std::size_t size() const noexcept { return taps_.size(); }
  std::size_t group_delay_samples() const noexcept { return (taps_.size() - 1) / 2; }
  const FilterSpec& spec() const noexcept { return spec_; }
  double sampling_rate_hz() const noexcept { return spec_.sampling_rate_hz; }

 private:
  std::vector<double> taps_;
  FilterSpec spec_;
};

/// Hamming-windowed sinc band-pass: the low-pass prototype at the high cut
/// minus the one at the low cut, each normalized to unity gain at DC.
FirKernel design_bandpass(const FilterSpec& spec);

/// H(f) = sum_k taps[k] * exp(-j 2 pi f k / rate), by direct summation.
/// Throws Error(invalid_argument) for frequencies outside [0, rate/2].
std::vector<std::complex<double>> frequency_response(const FirKernel& kernel,
                                                     std::span<const double> freqs_hz);

}  // namespace streamfilt
