#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamfilt/signal.hpp"

namespace streamfilt {

/// Two-pass Pearson correlation, clamped to [-1, 1].
///
/// Throws Error(undefined_correlation) if either input has zero variance
/// (after allowing for rounding in the mean), and Error(invalid_argument)
/// if the lengths differ or are below two.
double pearson(std::span<const double> x, std::span<const double> y);

struct ChannelCorrelation {
  double r = 0.0;
  bool defined = false;
};

struct FidelityReport {
  std::string config_label;
  std::vector<ChannelCorrelation> per_channel;
  // Summaries over defined channels only.
  double min_r = 0.0;
  double max_r = 0.0;
  double median_r = 0.0;

  std::size_t defined_count() const;
};

/// Per-channel Pearson correlation between two filtered recordings.
/// Constant channels are flagged, not zeroed. Throws
/// Error(shape_mismatch) when the infos differ and
/// Error(undefined_correlation) when no channel is defined.
FidelityReport compare_channels(const SignalMatrix& a, const SignalMatrix& b,
                                std::string label, unsigned threads = 1);

/// `channel,r,defined` rows followed by min/median/max summary rows.
std::string fidelity_csv(const FidelityReport& report);

}  // namespace streamfilt
