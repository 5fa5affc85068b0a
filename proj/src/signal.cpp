#include "streamfilt/signal.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "streamfilt/error.hpp"

namespace streamfilt {

void SignalInfo::validate() const {
  if (!(sampling_rate_hz > 0.0) || !std::isfinite(sampling_rate_hz))
    fail(Errc::invariant_violation, "sampling_rate_hz must be positive and finite");
  if (channel_count < 1) fail(Errc::invariant_violation, "channel_count must be >= 1");
  if (sample_count < 1) fail(Errc::invariant_violation, "sample_count must be >= 1");
  if (channel_labels.size() != channel_count)
    fail(Errc::invariant_violation, "channel_labels must have one entry per channel");
  std::unordered_set<std::string> seen(channel_labels.begin(), channel_labels.end());
  if (seen.size() != channel_labels.size())
    fail(Errc::invariant_violation, "channel_labels must be distinct");
}

std::vector<std::string> default_labels(std::size_t count) {
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t c = 0; c < count; ++c) labels.push_back("ch" + std::to_string(c));
  return labels;
}

SignalMatrix::SignalMatrix(SignalInfo info, std::vector<double> data)
    : info_(std::move(info)), data_(std::move(data)) {
  info_.validate();
  if (data_.size() != info_.channel_count * info_.sample_count)
    fail(Errc::shape_mismatch, "data size does not match channel_count * sample_count");
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }))
    fail(Errc::invariant_violation, "signal contains non-finite samples");
}

std::span<const double> SignalMatrix::channel(std::size_t c) const {
  if (c >= info_.channel_count) fail(Errc::invalid_argument, "channel index out of range");
  return std::span<const double>(data_).subspan(c * info_.sample_count, info_.sample_count);
}

SignalMatrix replicate(const SignalMatrix& signal, std::size_t factor) {
  if (factor < 1) fail(Errc::invalid_argument, "replicate factor must be >= 1");
  SignalInfo info = signal.info();
  info.sample_count *= factor;
  std::vector<double> data;
  data.reserve(info.channel_count * info.sample_count);
  for (std::size_t c = 0; c < signal.channels(); ++c) {
    auto row = signal.channel(c);
    for (std::size_t r = 0; r < factor; ++r) data.insert(data.end(), row.begin(), row.end());
  }
  return SignalMatrix(std::move(info), std::move(data));
}

}  // namespace streamfilt
