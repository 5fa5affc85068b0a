#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "streamfilt/convolution.hpp"
#include "streamfilt/fir.hpp"
#include "streamfilt/signal.hpp"

namespace streamfilt {

/// How the final short packet is treated when the packet size does not
/// divide the recording. Only one policy exists today; it is recorded in
/// the plan so reports can state it.
enum class TailPolicy {
  OwnPacket,  // filtered as its own shorter packet
};

/// Contiguous, non-overlapping split of a recording along time.
struct PacketPlan {
  std::size_t packet_size_samples = 0;
  std::size_t packet_count = 0;
  std::size_t tail_size_samples = 0;
  std::size_t sample_count = 0;
  TailPolicy tail_policy = TailPolicy::OwnPacket;

  /// Full packets plus the tail packet, if any.
  std::size_t total_packets() const { return packet_count + (tail_size_samples > 0 ? 1 : 0); }

  /// [offset, length) of packet `index`.
  std::pair<std::size_t, std::size_t> packet_bounds(std::size_t index) const;

  /// Throws Error(plan_mismatch) unless the plan covers exactly
  /// `sample_count` samples.
  void check_covers(std::size_t samples) const;

  bool operator==(const PacketPlan&) const = default;
};

/// Splits `sample_count` samples into packets of `packet_size`. A packet
/// size larger than the recording yields one packet spanning everything.
PacketPlan packetize(std::size_t sample_count, std::size_t packet_size);
PacketPlan packetize(const SignalMatrix& signal, std::size_t packet_size);

namespace mode {
struct Batch {};
struct PerPacket {
  PacketPlan plan;
};
struct StatefulStream {
  PacketPlan plan;
};
}  // namespace mode

using FilterMode = std::variant<mode::Batch, mode::PerPacket, mode::StatefulStream>;

std::string mode_name(const FilterMode& mode);

struct FilterOptions {
  ConvolutionMethod method = ConvolutionMethod::Auto;
  /// Upper bound on worker threads across channels; 1 runs inline.
  unsigned threads = 1;
};

/// Index into a length-n series after reflection about the end samples,
/// repeated as often as needed ("dcba|abcd|dcba" without repeating the
/// edge sample).
std::size_t reflect_index(std::ptrdiff_t index, std::size_t n);

/// Zero-phase filtering of each channel: reflect-pad by the group delay on
/// both ends, convolve, keep the centered samples.
SignalMatrix filter_batch(const SignalMatrix& signal, const FirKernel& kernel,
                          const FilterOptions& options = {});

/// filter_batch applied to every packet independently, results
/// concatenated. Reproduces packet-edge artifacts on purpose.
SignalMatrix filter_per_packet(const SignalMatrix& signal, const FirKernel& kernel,
                               const PacketPlan& plan, const FilterOptions& options = {});

/// Packet-by-packet filtering that carries the convolution state across
/// packet boundaries. Output does not depend on the plan.
SignalMatrix filter_stateful_stream(const SignalMatrix& signal, const FirKernel& kernel,
                                    const PacketPlan& plan, const FilterOptions& options = {});

SignalMatrix apply_filter(const SignalMatrix& signal, const FirKernel& kernel,
                          const FilterMode& mode, const FilterOptions& options = {});

/// Single-channel streaming zero-phase filter.
///
/// The stream length must be known up front: the reflect padding at both
/// ends and the block size depend on it. Output is emitted as soon as a
/// full block of delay-compensated samples is available; finish() appends
/// the right-hand padding and flushes the rest. The concatenated output is
/// bit-identical to the batch filter no matter how the input was chunked.
class StreamingFilter {
 public:
  StreamingFilter(const FirKernel& kernel, std::size_t total_samples,
                  ConvolutionMethod method = ConvolutionMethod::Auto);

  void push(std::span<const double> packet, std::vector<double>& out);
  void finish(std::vector<double>& out);

  std::size_t received() const noexcept { return received_; }
  std::size_t emitted() const noexcept { return emitted_; }

 private:
  void start();
  void drain(std::vector<double>& out, bool final);

  BlockConvolver conv_;
  std::size_t delay_;
  std::size_t total_;
  std::size_t received_ = 0;
  std::size_t emitted_ = 0;
  bool started_ = false;
  bool finished_ = false;
  std::vector<double> head_;    // raw samples held until the left padding is known
  std::vector<double> window_;  // padded stream from the next output's first input
};

}  // namespace streamfilt
