#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace streamfilt {

/// Metadata describing a multichannel recording.
struct SignalInfo {
  double sampling_rate_hz = 0.0;
  std::size_t channel_count = 0;
  std::size_t sample_count = 0;
  std::vector<std::string> channel_labels;

  /// Throws Error(invariant_violation) if any field is out of range or the
  /// labels are not distinct and one per channel.
  void validate() const;

  double duration_s() const { return static_cast<double>(sample_count) / sampling_rate_hz; }

  bool operator==(const SignalInfo&) const = default;
};

/// Labels "ch0", "ch1", ... for `count` channels.
std::vector<std::string> default_labels(std::size_t count);

/// A channel-major (channels x samples) matrix of voltage samples.
///
/// Immutable once constructed; the constructor enforces that the data
/// matches the info dimensions and that every sample is finite.
class SignalMatrix {
 public:
  SignalMatrix(SignalInfo info, std::vector<double> data);

  const SignalInfo& info() const noexcept { return info_; }
  std::size_t channels() const noexcept { return info_.channel_count; }
  std::size_t samples() const noexcept { return info_.sample_count; }
  double sampling_rate_hz() const noexcept { return info_.sampling_rate_hz; }

  std::span<const double> channel(std::size_t c) const;
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const SignalMatrix&) const = default;

 private:
  SignalInfo info_;
  std::vector<double> data_;
};

/// Concatenates `factor` copies of the signal along the time axis.
SignalMatrix replicate(const SignalMatrix& signal, std::size_t factor);

}  // namespace streamfilt
