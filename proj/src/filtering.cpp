#include "streamfilt/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "streamfilt/error.hpp"

namespace streamfilt {

namespace {

void check_rate(const SignalMatrix& signal, const FirKernel& kernel) {
  const double a = signal.sampling_rate_hz();
  const double b = kernel.sampling_rate_hz();
  if (std::abs(a - b) > 1e-9 * std::max(a, b))
    fail(Errc::rate_mismatch, "signal is sampled at " + std::to_string(a) + " Hz but kernel expects " +
                                  std::to_string(b) + " Hz");
}

// Runs fn(first, last) over channel ranges. Each channel is written by
// exactly one worker, so results match sequential execution bit for bit.
template <class Fn>
void for_channel_ranges(std::size_t channels, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), channels);
  if (workers <= 1) {
    fn(std::size_t{0}, channels);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t per = channels / workers;
  const std::size_t extra = channels % workers;
  std::size_t first = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t last = first + per + (w < extra ? 1 : 0);
    pool.emplace_back([&fn, first, last] { fn(first, last); });
    first = last;
  }
}

// Zero-phase filtering of one series. `padded` is scratch space.
void filter_series(std::span<const double> x, std::size_t delay, BlockConvolver& conv,
                   std::vector<double>& padded, std::span<double> out) {
  const std::size_t n = x.size();
  padded.resize(n + 2 * delay);
  const auto d = static_cast<std::ptrdiff_t>(delay);
  for (std::ptrdiff_t i = 0; i < d; ++i) padded[i] = x[reflect_index(i - d, n)];
  std::copy(x.begin(), x.end(), padded.begin() + d);
  for (std::ptrdiff_t i = 0; i < d; ++i)
    padded[n + delay + i] = x[reflect_index(static_cast<std::ptrdiff_t>(n) + i, n)];
  convolve_valid(padded, conv, out);
}

}  // namespace

std::pair<std::size_t, std::size_t> PacketPlan::packet_bounds(std::size_t index) const {
  if (index >= total_packets()) fail(Errc::invalid_argument, "packet index out of range");
  const std::size_t offset = index * packet_size_samples;
  const std::size_t length = index < packet_count ? packet_size_samples : tail_size_samples;
  return {offset, length};
}

void PacketPlan::check_covers(std::size_t samples) const {
  if (packet_size_samples < 1 || packet_count < 1)
    fail(Errc::plan_mismatch, "packet plan is empty");
  if (tail_size_samples >= packet_size_samples)
    fail(Errc::plan_mismatch, "tail must be shorter than a packet");
  if (sample_count != samples ||
      packet_count * packet_size_samples + tail_size_samples != samples)
    fail(Errc::plan_mismatch, "packet plan covers " + std::to_string(sample_count) +
                                  " samples, signal has " + std::to_string(samples));
}

PacketPlan packetize(std::size_t sample_count, std::size_t packet_size) {
  if (packet_size < 1) fail(Errc::invalid_argument, "packet size must be >= 1");
  if (sample_count < 1) fail(Errc::invalid_argument, "cannot packetize an empty signal");
  PacketPlan plan;
  plan.sample_count = sample_count;
  if (packet_size >= sample_count) {
    plan.packet_size_samples = sample_count;
    plan.packet_count = 1;
    return plan;
  }
  plan.packet_size_samples = packet_size;
  plan.packet_count = sample_count / packet_size;
  plan.tail_size_samples = sample_count % packet_size;
  return plan;
}

PacketPlan packetize(const SignalMatrix& signal, std::size_t packet_size) {
  return packetize(signal.samples(), packet_size);
}

std::string mode_name(const FilterMode& mode) {
  struct {
    std::string operator()(const mode::Batch&) const { return "batch"; }
    std::string operator()(const mode::PerPacket& m) const {
      return "per_packet:" + std::to_string(m.plan.packet_size_samples);
    }
    std::string operator()(const mode::StatefulStream& m) const {
      return "stateful:" + std::to_string(m.plan.packet_size_samples);
    }
  } visitor;
  return std::visit(visitor, mode);
}

std::size_t reflect_index(std::ptrdiff_t index, std::size_t n) {
  if (n == 0) fail(Errc::invalid_argument, "cannot reflect into an empty series");
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t i = index % period;
  if (i < 0) i += period;
  const auto last = static_cast<std::ptrdiff_t>(n - 1);
  return static_cast<std::size_t>(i <= last ? i : period - i);
}

SignalMatrix filter_batch(const SignalMatrix& signal, const FirKernel& kernel,
                          const FilterOptions& options) {
  check_rate(signal, kernel);
  const std::size_t n = signal.samples();
  std::vector<double> data(signal.channels() * n);
  for_channel_ranges(signal.channels(), options.threads, [&](std::size_t first, std::size_t last) {
    BlockConvolver conv(kernel.taps(), n, options.method);
    std::vector<double> padded;
    for (std::size_t c = first; c < last; ++c)
      filter_series(signal.channel(c), kernel.group_delay_samples(), conv, padded,
                    std::span<double>(data).subspan(c * n, n));
  });
  return SignalMatrix(signal.info(), std::move(data));
}

SignalMatrix filter_per_packet(const SignalMatrix& signal, const FirKernel& kernel,
                               const PacketPlan& plan, const FilterOptions& options) {
  check_rate(signal, kernel);
  plan.check_covers(signal.samples());
  const std::size_t n = signal.samples();
  std::vector<double> data(signal.channels() * n);
  for_channel_ranges(signal.channels(), options.threads, [&](std::size_t first, std::size_t last) {
    // Convolvers are keyed by packet length; at most two lengths exist.
    std::map<std::size_t, BlockConvolver> convolvers;
    std::vector<double> padded;
    for (std::size_t c = first; c < last; ++c) {
      const auto row = signal.channel(c);
      const auto out_row = std::span<double>(data).subspan(c * n, n);
      for (std::size_t p = 0; p < plan.total_packets(); ++p) {
        const auto [offset, length] = plan.packet_bounds(p);
        auto it = convolvers.find(length);
        if (it == convolvers.end())
          it = convolvers.try_emplace(length, kernel.taps(), length, options.method).first;
        filter_series(row.subspan(offset, length), kernel.group_delay_samples(), it->second, padded,
                      out_row.subspan(offset, length));
      }
    }
  });
  return SignalMatrix(signal.info(), std::move(data));
}

SignalMatrix filter_stateful_stream(const SignalMatrix& signal, const FirKernel& kernel,
                                    const PacketPlan& plan, const FilterOptions& options) {
  check_rate(signal, kernel);
  plan.check_covers(signal.samples());
  const std::size_t n = signal.samples();
  std::vector<double> data(signal.channels() * n);
  for_channel_ranges(signal.channels(), options.threads, [&](std::size_t first, std::size_t last) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t c = first; c < last; ++c) {
      const auto row = signal.channel(c);
      StreamingFilter stream(kernel, n, options.method);
      out.clear();
      for (std::size_t p = 0; p < plan.total_packets(); ++p) {
        const auto [offset, length] = plan.packet_bounds(p);
        stream.push(row.subspan(offset, length), out);
      }
      stream.finish(out);
      std::copy(out.begin(), out.end(), data.begin() + static_cast<std::ptrdiff_t>(c * n));
    }
  });
  return SignalMatrix(signal.info(), std::move(data));
}

SignalMatrix apply_filter(const SignalMatrix& signal, const FirKernel& kernel,
                          const FilterMode& mode, const FilterOptions& options) {
  struct {
    const SignalMatrix& signal;
    const FirKernel& kernel;
    const FilterOptions& options;
    SignalMatrix operator()(const mode::Batch&) const { return filter_batch(signal, kernel, options); }
    SignalMatrix operator()(const mode::PerPacket& m) const {
      return filter_per_packet(signal, kernel, m.plan, options);
    }
    SignalMatrix operator()(const mode::StatefulStream& m) const {
      return filter_stateful_stream(signal, kernel, m.plan, options);
    }
  } visitor{signal, kernel, options};
  return std::visit(visitor, mode);
}

StreamingFilter::StreamingFilter(const FirKernel& kernel, std::size_t total_samples,
                                 ConvolutionMethod method)
    : conv_(kernel.taps(), total_samples, method),
      delay_(kernel.group_delay_samples()),
      total_(total_samples) {
  if (total_samples < 1) fail(Errc::invalid_argument, "stream length must be >= 1");
}

void StreamingFilter::push(std::span<const double> packet, std::vector<double>& out) {
  if (finished_) fail(Errc::invalid_argument, "push after finish");
  if (received_ + packet.size() > total_)
    fail(Errc::plan_mismatch, "stream received more samples than announced");
  received_ += packet.size();
  if (!started_) {
    head_.insert(head_.end(), packet.begin(), packet.end());
    if (head_.size() >= std::min(delay_ + 1, total_)) start();
  } else {
    window_.insert(window_.end(), packet.begin(), packet.end());
  }
  drain(out, false);
}

void StreamingFilter::finish(std::vector<double>& out) {
  if (finished_) return;
  if (received_ != total_)
    fail(Errc::plan_mismatch, "stream ended after " + std::to_string(received_) + " of " +
                                  std::to_string(total_) + " samples");
  if (!started_) start();
  // Raw sample j sits at window_[j + delay_ - emitted_].
  const auto n = static_cast<std::ptrdiff_t>(total_);
  for (std::size_t i = 0; i < delay_; ++i) {
    const std::size_t j = reflect_index(n + static_cast<std::ptrdiff_t>(i), total_);
    if (j + delay_ < emitted_) fail(Errc::invalid_argument, "right padding fell out of the stream window");
    window_.push_back(window_[j + delay_ - emitted_]);
  }
  drain(out, true);
  finished_ = true;
}

void StreamingFilter::start() {
  const auto d = static_cast<std::ptrdiff_t>(delay_);
  window_.clear();
  window_.reserve(conv_.block_outputs() + 2 * delay_ + head_.size());
  for (std::ptrdiff_t i = 0; i < d; ++i) window_.push_back(head_[reflect_index(i - d, total_)]);
  window_.insert(window_.end(), head_.begin(), head_.end());
  head_.clear();
  head_.shrink_to_fit();
  started_ = true;
}

void StreamingFilter::drain(std::vector<double>& out, bool final) {
  if (!started_) return;
  const std::size_t overlap = conv_.taps_size() - 1;
  while (emitted_ < total_) {
    const std::size_t count = std::min(conv_.block_outputs(), total_ - emitted_);
    if (window_.size() < count + overlap) {
      if (final) fail(Errc::invalid_argument, "stream window underflow at finish");
      break;
    }
    const std::size_t at = out.size();
    out.resize(at + count);
    conv_.run_block(std::span<const double>(window_).first(count + overlap),
                    std::span<double>(out).subspan(at, count));
    window_.erase(window_.begin(), window_.begin() + static_cast<std::ptrdiff_t>(count));
    emitted_ += count;
  }
}

}  // namespace streamfilt
