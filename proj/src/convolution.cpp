#include "streamfilt/convolution.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "streamfilt/error.hpp"

namespace streamfilt {

namespace {

constexpr std::size_t kDirectMaxTaps = 64;
constexpr std::size_t kDirectTile = 2048;

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW planning is not thread-safe; executing a plan on new arrays is.
// Plans are created once per size and live for the whole process.
PlanPair plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto real = alloc_real(n);
  auto spectrum = alloc_complex(n / 2 + 1);
  const int size = static_cast<int>(n);
  PlanPair plans{
      fftw_plan_dft_r2c_1d(size, real.get(), spectrum.get(), FFTW_ESTIMATE),
      fftw_plan_dft_c2r_1d(size, spectrum.get(), real.get(), FFTW_ESTIMATE | FFTW_DESTROY_INPUT)};
  if (!plans.forward || !plans.inverse) fail(Errc::invalid_argument, "FFTW planning failed");
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

struct BlockConvolver::FftState {
  PlanPair plans;
  ComplexBuffer kernel_spectrum;
  RealBuffer time;
  ComplexBuffer spectrum;
};

ConvolutionMethod resolve_method(ConvolutionMethod method, std::size_t taps) {
  if (method != ConvolutionMethod::Auto) return method;
  return taps <= kDirectMaxTaps ? ConvolutionMethod::Direct : ConvolutionMethod::Fft;
}

std::size_t fft_block_size(std::size_t taps, std::size_t total_outputs) {
  const std::size_t cap = std::max<std::size_t>(1024, std::bit_ceil(8 * taps));
  const std::size_t whole = std::bit_ceil(std::max<std::size_t>(total_outputs, 1) + taps - 1);
  return std::min(whole, cap);
}

BlockConvolver::BlockConvolver(std::span<const double> taps, std::size_t total_outputs,
                               ConvolutionMethod method)
    : taps_(taps.begin(), taps.end()), method_(resolve_method(method, taps.size())) {
  if (taps_.empty()) fail(Errc::invalid_argument, "convolution needs at least one tap");
  if (method_ == ConvolutionMethod::Direct) {
    block_outputs_ = kDirectTile;
    return;
  }
  fft_size_ = fft_block_size(taps_.size(), total_outputs);
  block_outputs_ = fft_size_ - taps_.size() + 1;

  fft_ = std::make_unique<FftState>();
  fft_->plans = plans_for(fft_size_);
  const std::size_t bins = fft_size_ / 2 + 1;
  fft_->time = alloc_real(fft_size_);
  fft_->spectrum = alloc_complex(bins);
  fft_->kernel_spectrum = alloc_complex(bins);

  // Fold the inverse transform's 1/N into the kernel spectrum.
  const double scale = 1.0 / static_cast<double>(fft_size_);
  std::fill_n(fft_->time.get(), fft_size_, 0.0);
  for (std::size_t k = 0; k < taps_.size(); ++k) fft_->time[k] = taps_[k] * scale;
  fftw_execute_dft_r2c(fft_->plans.forward, fft_->time.get(), fft_->kernel_spectrum.get());
}

BlockConvolver::~BlockConvolver() = default;
BlockConvolver::BlockConvolver(BlockConvolver&&) noexcept = default;
BlockConvolver& BlockConvolver::operator=(BlockConvolver&&) noexcept = default;

void BlockConvolver::run_block(std::span<const double> in, std::span<double> out) {
  if (out.size() > block_outputs_ || in.size() != out.size() + taps_.size() - 1)
    fail(Errc::invalid_argument, "convolution block has inconsistent sizes");
  if (out.empty()) return;
  if (method_ == ConvolutionMethod::Direct)
    run_direct(in, out);
  else
    run_fft(in, out);
}

void BlockConvolver::run_direct(std::span<const double> in, std::span<double> out) const {
  // Every output accumulates taps in ascending k, independent of tiling.
  const std::size_t last = taps_.size() - 1;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < taps_.size(); ++k) {
    const double h = taps_[k];
    const double* src = in.data() + (last - k);
    double* dst = out.data();
    for (std::size_t i = 0; i < out.size(); ++i) dst[i] += h * src[i];
  }
}

void BlockConvolver::run_fft(std::span<const double> in, std::span<double> out) {
  double* time = fft_->time.get();
  std::copy(in.begin(), in.end(), time);
  std::fill(time + in.size(), time + fft_size_, 0.0);

  fftw_complex* spec = fft_->spectrum.get();
  const fftw_complex* kern = fft_->kernel_spectrum.get();
  fftw_execute_dft_r2c(fft_->plans.forward, time, spec);
  const std::size_t bins = fft_size_ / 2 + 1;
  for (std::size_t b = 0; b < bins; ++b) {
    const double re = spec[b][0] * kern[b][0] - spec[b][1] * kern[b][1];
    const double im = spec[b][0] * kern[b][1] + spec[b][1] * kern[b][0];
    spec[b][0] = re;
    spec[b][1] = im;
  }
  fftw_execute_dft_c2r(fft_->plans.inverse, spec, time);

  // The first L-1 circular outputs are wrapped; the rest are exact.
  std::copy_n(time + taps_.size() - 1, out.size(), out.begin());
}

void convolve_valid(std::span<const double> in, BlockConvolver& conv, std::span<double> out) {
  const std::size_t overlap = conv.taps_size() - 1;
  if (in.size() < overlap || out.size() != in.size() - overlap)
    fail(Errc::invalid_argument, "valid convolution output has the wrong length");
  const std::size_t block = conv.block_outputs();
  for (std::size_t start = 0; start < out.size(); start += block) {
    const std::size_t count = std::min(block, out.size() - start);
    conv.run_block(in.subspan(start, count + overlap), out.subspan(start, count));
  }
}

}  // namespace streamfilt
