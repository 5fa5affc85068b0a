#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "streamfilt/fidelity.hpp"
#include "streamfilt/filtering.hpp"
#include "streamfilt/fir.hpp"

namespace streamfilt {

inline constexpr const char* kBenchFormatLine = "# streamfilt-bench v1";

/// Monotonic time source in seconds. Injectable so tests can script it.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now_s() = 0;
};

class SteadyClock final : public Clock {
 public:
  double now_s() override;
};

/// Two-sided 95% Student-t critical value, t(0.975, dof).
double student_t_975(std::size_t degrees_of_freedom);

/// FNV-1a over the little-endian bytes of every sample.
std::uint64_t checksum(const SignalMatrix& signal);
std::string checksum_hex(std::uint64_t value);

struct TimingReport {
  std::string config_label;
  std::string packet_size_or_batch;
  std::size_t repetitions = 0;
  double mean_s = 0.0;
  double ci95_halfwidth_s = 0.0;
  std::vector<double> samples_s;
  std::uint64_t output_checksum = 0;
};

/// Mean and t(0.975, n-1) * s / sqrt(n) over `samples_s`. Needs n >= 2.
TimingReport summarize_timings(std::string label, std::vector<double> samples_s);

struct TimingOptions {
  std::size_t warmup = 3;
  ConvolutionMethod method = ConvolutionMethod::Auto;
  Clock* clock = nullptr;  // SteadyClock when null
};

/// Filters the whole signal `repetitions` times on the calling thread after
/// `options.warmup` untimed runs. Throws Error(invalid_argument) when
/// repetitions < 2.
TimingReport time_filtering(const SignalMatrix& signal, const FirKernel& kernel,
                            const FilterMode& mode, std::size_t repetitions,
                            const TimingOptions& options = {});

enum class SweepMode { PerPacket, Stateful };

struct SweepConfig {
  std::vector<std::size_t> packet_sizes{200, 300, 400, 800, 991, 1200};
  std::size_t repetitions_accuracy = 1;
  std::size_t repetitions_timing = 100;
  std::size_t replicate_factor = 3;
  std::size_t warmup = 3;
  FilterSpec filter;
  std::vector<SweepMode> timed_modes{SweepMode::PerPacket};
  /// Channel workers for the fidelity pass only; timing is single-threaded.
  unsigned fidelity_threads = 1;
  ConvolutionMethod method = ConvolutionMethod::Auto;

  void validate() const;
};

struct SweepResult {
  std::vector<FidelityReport> fidelity;  // one per packet size, per-packet vs batch
  std::vector<std::uint64_t> fidelity_checksums;
  std::vector<TimingReport> timing;  // batch first, then per size and mode
  double design_time_s = 0.0;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Accuracy (unreplicated signal) and timing (replicated signal) for every
/// packet size in `cfg`.
SweepResult run_sweep(const SignalMatrix& signal, const SweepConfig& cfg, Clock* clock = nullptr,
                      const ProgressFn& progress = {});

std::string sweep_fidelity_csv(const SweepResult& result, std::span<const std::size_t> packet_sizes);
std::string sweep_timing_csv(std::span<const TimingReport> timing);

}  // namespace streamfilt
