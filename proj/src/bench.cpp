#include "streamfilt/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "streamfilt/error.hpp"

namespace streamfilt {

double SteadyClock::now_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

double student_t_975(std::size_t degrees_of_freedom) {
  if (degrees_of_freedom < 1) fail(Errc::invalid_argument, "Student-t needs at least one degree of freedom");
  const boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
  return boost::math::quantile(dist, 0.975);
}

std::uint64_t checksum(const SignalMatrix& signal) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (double v : signal.data()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      hash ^= (bits >> (8 * b)) & 0xffu;
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

std::string checksum_hex(std::uint64_t value) { return fmt::format("{:016x}", value); }

TimingReport summarize_timings(std::string label, std::vector<double> samples_s) {
  if (samples_s.size() < 2) fail(Errc::invalid_argument, "confidence interval needs at least two repetitions");
  const auto n = static_cast<double>(samples_s.size());
  const double mean = std::accumulate(samples_s.begin(), samples_s.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : samples_s) ss += (s - mean) * (s - mean);
  const double stddev = std::sqrt(ss / (n - 1.0));

  TimingReport report;
  report.config_label = std::move(label);
  report.repetitions = samples_s.size();
  report.mean_s = mean;
  report.ci95_halfwidth_s = student_t_975(samples_s.size() - 1) * stddev / std::sqrt(n);
  report.samples_s = std::move(samples_s);
  return report;
}

TimingReport time_filtering(const SignalMatrix& signal, const FirKernel& kernel,
                            const FilterMode& mode, std::size_t repetitions,
                            const TimingOptions& options) {
  if (repetitions < 2) fail(Errc::invalid_argument, "timing needs at least two repetitions");
  SteadyClock steady;
  Clock& clock = options.clock ? *options.clock : steady;
  const FilterOptions single_thread{options.method, 1};

  for (std::size_t i = 0; i < options.warmup; ++i) (void)apply_filter(signal, kernel, mode, single_thread);

  std::vector<double> samples;
  samples.reserve(repetitions);
  std::uint64_t last_checksum = 0;
  for (std::size_t i = 0; i < repetitions; ++i) {
    const double start = clock.now_s();
    const auto out = apply_filter(signal, kernel, mode, single_thread);
    const double stop = clock.now_s();
    samples.push_back(stop - start);
    if (i + 1 == repetitions) last_checksum = checksum(out);
  }

  auto report = summarize_timings(mode_name(mode), std::move(samples));
  report.output_checksum = last_checksum;
  if (const auto* p = std::get_if<mode::PerPacket>(&mode))
    report.packet_size_or_batch = std::to_string(p->plan.packet_size_samples);
  else if (const auto* s = std::get_if<mode::StatefulStream>(&mode))
    report.packet_size_or_batch = std::to_string(s->plan.packet_size_samples);
  else
    report.packet_size_or_batch = "batch";
  return report;
}

void SweepConfig::validate() const {
  if (packet_sizes.empty()) fail(Errc::invalid_argument, "sweep needs at least one packet size");
  if (packet_sizes.front() < 1) fail(Errc::invalid_argument, "packet sizes must be >= 1");
  if (!std::is_sorted(packet_sizes.begin(), packet_sizes.end(), std::less_equal<>()))
    fail(Errc::invalid_argument, "packet sizes must be strictly increasing");
  if (repetitions_accuracy < 1) fail(Errc::invalid_argument, "accuracy repetitions must be >= 1");
  if (repetitions_timing < 2) fail(Errc::invalid_argument, "timing repetitions must be >= 2");
  if (replicate_factor < 1) fail(Errc::invalid_argument, "replicate factor must be >= 1");
  if (timed_modes.empty()) fail(Errc::invalid_argument, "sweep needs at least one timed mode");
  filter.validate();
}

SweepResult run_sweep(const SignalMatrix& signal, const SweepConfig& cfg, Clock* clock,
                      const ProgressFn& progress) {
  cfg.validate();
  FilterSpec spec = cfg.filter;
  spec.sampling_rate_hz = signal.sampling_rate_hz();
  auto note = [&](const std::string& msg) {
    if (progress) progress(msg);
  };

  SweepResult result;
  SteadyClock steady;
  Clock& design_clock = clock ? *clock : steady;
  const double design_start = design_clock.now_s();
  const FirKernel kernel = design_bandpass(spec);
  result.design_time_s = design_clock.now_s() - design_start;

  // Accuracy on the original recording.
  const FilterOptions fidelity_opts{cfg.method, cfg.fidelity_threads};
  const auto reference = filter_batch(signal, kernel, fidelity_opts);
  for (std::size_t size : cfg.packet_sizes) {
    note("fidelity per_packet:" + std::to_string(size));
    const auto plan = packetize(signal, size);
    std::uint64_t sum = 0;
    std::optional<SignalMatrix> filtered;
    for (std::size_t rep = 0; rep < cfg.repetitions_accuracy; ++rep) {
      filtered = filter_per_packet(signal, kernel, plan, fidelity_opts);
      const auto current = checksum(*filtered);
      if (rep > 0 && current != sum)
        fail(Errc::invariant_violation, "per-packet filtering is not deterministic");
      sum = current;
    }
    result.fidelity.push_back(
        compare_channels(reference, *filtered, std::to_string(size), cfg.fidelity_threads));
    result.fidelity_checksums.push_back(sum);
  }

  // Timing on the replicated recording.
  const auto timed = cfg.replicate_factor > 1 ? replicate(signal, cfg.replicate_factor) : signal;
  const TimingOptions timing_opts{cfg.warmup, cfg.method, clock};
  note("timing batch");
  result.timing.push_back(time_filtering(timed, kernel, mode::Batch{}, cfg.repetitions_timing, timing_opts));
  for (std::size_t size : cfg.packet_sizes) {
    const auto plan = packetize(timed, size);
    for (SweepMode m : cfg.timed_modes) {
      const FilterMode mode = m == SweepMode::PerPacket ? FilterMode{mode::PerPacket{plan}}
                                                        : FilterMode{mode::StatefulStream{plan}};
      note("timing " + mode_name(mode));
      result.timing.push_back(time_filtering(timed, kernel, mode, cfg.repetitions_timing, timing_opts));
    }
  }
  return result;
}

std::string sweep_fidelity_csv(const SweepResult& result, std::span<const std::size_t> packet_sizes) {
  if (packet_sizes.size() != result.fidelity.size())
    fail(Errc::invalid_argument, "packet size list does not match the fidelity reports");
  std::string out = std::string(kBenchFormatLine) + "\npacket_size,channel,r,defined\n";
  for (std::size_t i = 0; i < packet_sizes.size(); ++i) {
    const auto& report = result.fidelity[i];
    for (std::size_t c = 0; c < report.per_channel.size(); ++c) {
      const auto& ch = report.per_channel[c];
      if (ch.defined)
        out += fmt::format("{},{},{:.17g},1\n", packet_sizes[i], c, ch.r);
      else
        out += fmt::format("{},{},nan,0\n", packet_sizes[i], c);
    }
  }
  return out;
}

std::string sweep_timing_csv(std::span<const TimingReport> timing) {
  std::string out = std::string(kBenchFormatLine) +
                    "\nconfig_label,packet_size_or_batch,repetitions,mean_s,ci95_halfwidth_s,checksum\n";
  for (const auto& t : timing)
    out += fmt::format("{},{},{},{:.9g},{:.9g},{}\n", t.config_label, t.packet_size_or_batch, t.repetitions,
                       t.mean_s, t.ci95_halfwidth_s, checksum_hex(t.output_checksum));
  return out;
}

}  // namespace streamfilt
