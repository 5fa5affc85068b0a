#pragma once

#include <filesystem>
#include <string_view>

#include "streamfilt/signal.hpp"

namespace streamfilt {

inline constexpr int kSignalFormatVersion = 1;

/// Header and payload paths for a signal named by `base`. A trailing
/// ".json" or ".f64" on `base` is ignored.
struct SignalPaths {
  std::filesystem::path header;
  std::filesystem::path payload;
};
SignalPaths signal_paths(const std::filesystem::path& base);

/// Writes `<base>.json` and `<base>.f64` (little-endian IEEE-754 doubles,
/// channel-major). Each file is written to a temporary and renamed into
/// place. Output bytes depend only on the signal.
void store_signal(const SignalMatrix& signal, const std::filesystem::path& base);

/// Reads a signal written by store_signal. Errors: file_missing,
/// malformed_header, dimension_mismatch, invariant_violation.
SignalMatrix load_signal(const std::filesystem::path& base);

/// Reads a CSV with one header row of channel labels and one column per
/// channel. The CSV carries no rate, so it must be supplied.
SignalMatrix load_csv(const std::filesystem::path& path, double sampling_rate_hz);

/// Writes `contents` to `path` through a sibling temporary plus rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace streamfilt
