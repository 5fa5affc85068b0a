#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numeric paths.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

namespace oracle {

// Valid convolution by the textbook double loop.
inline std::vector<double> convolve_valid(std::span<const double> x, std::span<const double> h) {
  const std::size_t L = h.size();
  std::vector<double> y(x.size() - L + 1, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    long double acc = 0.0L;
    for (std::size_t k = 0; k < L; ++k) acc += static_cast<long double>(h[k]) * x[i + L - 1 - k];
    y[i] = static_cast<double>(acc);
  }
  return y;
}

// numpy-style "reflect" padding, recomputed by walking back and forth.
inline double reflected(std::span<const double> x, long index) {
  const long n = static_cast<long>(x.size());
  if (n == 1) return x[0];
  long i = index;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return x[static_cast<std::size_t>(i)];
}

// Zero-phase filtering of one series via the double-loop convolution.
inline std::vector<double> zero_phase(std::span<const double> x, std::span<const double> h) {
  const long d = static_cast<long>((h.size() - 1) / 2);
  std::vector<double> padded;
  for (long i = -d; i < static_cast<long>(x.size()) + d; ++i) padded.push_back(reflected(x, i));
  return convolve_valid(padded, h);
}

inline double pearson_two_pass(std::span<const double> x, std::span<const double> y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline double rms_diff(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

inline double rms(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return std::sqrt(acc / static_cast<double>(a.size()));
}

// t(0.975, dof), computed with scipy.stats.t.ppf and frozen here.
struct TQuantile {
  std::size_t dof;
  double value;
};
inline constexpr TQuantile kStudentT975[] = {
    {1, 12.706204736432095},
    {2, 4.302652729696142},
    {4, 2.7764451051977987},
    {49, 2.0095752371292397},
    {99, 1.9842169515086827},
};

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("streamfilt_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle
