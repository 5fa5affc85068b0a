#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace streamfilt {

enum class ConvolutionMethod {
  Auto,    // Direct for short kernels, Fft otherwise
  Direct,  // O(N*L) multiply-accumulate
  Fft,     // overlap-save with a fixed block size
};

/// Computes "valid" convolution output in fixed-size blocks.
///
/// For input q and taps h of length L, output i is
///   y[i] = sum_k h[k] * q[i + L - 1 - k],
/// so a block of c outputs consumes c + L - 1 inputs. The block size is a
/// pure function of (L, total_outputs, method); two convolvers built with
/// the same arguments produce bit-identical blocks from identical inputs,
/// which is what lets chunked streaming reproduce whole-signal results.
///
/// Not thread-safe: each thread needs its own instance.
class BlockConvolver {
 public:
  BlockConvolver(std::span<const double> taps, std::size_t total_outputs,
                 ConvolutionMethod method = ConvolutionMethod::Auto);
  ~BlockConvolver();
  BlockConvolver(BlockConvolver&&) noexcept;
  BlockConvolver& operator=(BlockConvolver&&) noexcept;
  BlockConvolver(const BlockConvolver&) = delete;
  BlockConvolver& operator=(const BlockConvolver&) = delete;

  std::size_t taps_size() const noexcept { return taps_.size(); }
  std::size_t block_outputs() const noexcept { return block_outputs_; }
  ConvolutionMethod method() const noexcept { return method_; }
  std::size_t fft_size() const noexcept { return fft_size_; }

  /// Requires in.size() == out.size() + taps_size() - 1 and
  /// out.size() <= block_outputs().
  void run_block(std::span<const double> in, std::span<double> out);

 private:
  struct FftState;

  void run_direct(std::span<const double> in, std::span<double> out) const;
  void run_fft(std::span<const double> in, std::span<double> out);

  std::vector<double> taps_;
  ConvolutionMethod method_;
  std::size_t block_outputs_ = 0;
  std::size_t fft_size_ = 0;
  std::unique_ptr<FftState> fft_;
};

ConvolutionMethod resolve_method(ConvolutionMethod method, std::size_t taps);

/// FFT length used for a kernel of `taps` taps producing `total_outputs`
/// samples: the smallest power of two holding the whole job, capped at
/// max(1024, next_pow2(8 * taps)).
std::size_t fft_block_size(std::size_t taps, std::size_t total_outputs);

/// Valid convolution of `in` with the convolver's taps, block by block.
/// Requires out.size() == in.size() - taps + 1.
void convolve_valid(std::span<const double> in, BlockConvolver& conv, std::span<double> out);

}  // namespace streamfilt
