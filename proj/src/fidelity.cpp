#include "streamfilt/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "streamfilt/error.hpp"

namespace streamfilt {

namespace {

struct Moments {
  double mean;
  double sum_sq;
};

// A series is treated as constant when its spread is indistinguishable
// from the rounding left over in its mean.
bool effectively_constant(const Moments& m, std::size_t n) {
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(m.mean);
  return m.sum_sq <= static_cast<double>(n) * floor * floor;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(Errc::invalid_argument, "pearson inputs differ in length");
  if (x.size() < 2) fail(Errc::invalid_argument, "pearson needs at least two samples");
  const auto n = static_cast<double>(x.size());

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;

  double rx = 0.0;
  double ry = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    rx += x[i] - mx;
    ry += y[i] - my;
  }
  mx += rx / n;
  my += ry / n;

  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (effectively_constant({mx, sxx}, x.size()) || effectively_constant({my, syy}, y.size()))
    fail(Errc::undefined_correlation, "correlation undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::size_t FidelityReport::defined_count() const {
  return static_cast<std::size_t>(
      std::count_if(per_channel.begin(), per_channel.end(), [](const auto& c) { return c.defined; }));
}

FidelityReport compare_channels(const SignalMatrix& a, const SignalMatrix& b, std::string label,
                                unsigned threads) {
  if (a.info() != b.info()) fail(Errc::shape_mismatch, "compared signals have different shapes or metadata");
  if (a.samples() < 2) fail(Errc::invalid_argument, "comparison needs at least two samples per channel");
  FidelityReport report;
  report.config_label = std::move(label);
  report.per_channel.resize(a.channels());

  auto work = [&](std::size_t first, std::size_t last) {
    for (std::size_t c = first; c < last; ++c) {
      try {
        report.per_channel[c] = {pearson(a.channel(c), b.channel(c)), true};
      } catch (const Error& e) {
        if (e.code() != Errc::undefined_correlation) throw;
        report.per_channel[c] = {std::numeric_limits<double>::quiet_NaN(), false};
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), a.channels());
  if (workers <= 1) {
    work(0, a.channels());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t step = (a.channels() + workers - 1) / workers;
    for (std::size_t first = 0; first < a.channels(); first += step)
      pool.emplace_back(work, first, std::min(a.channels(), first + step));
  }

  std::vector<double> defined;
  for (const auto& c : report.per_channel)
    if (c.defined) defined.push_back(c.r);
  if (defined.empty()) fail(Errc::undefined_correlation, "no channel has a defined correlation");
  std::sort(defined.begin(), defined.end());
  report.min_r = defined.front();
  report.max_r = defined.back();
  const std::size_t mid = defined.size() / 2;
  report.median_r = defined.size() % 2 ? defined[mid] : 0.5 * (defined[mid - 1] + defined[mid]);
  return report;
}

std::string fidelity_csv(const FidelityReport& report) {
  std::string out = "channel,r,defined\n";
  for (std::size_t c = 0; c < report.per_channel.size(); ++c) {
    const auto& ch = report.per_channel[c];
    if (ch.defined)
      out += fmt::format("{},{:.17g},1\n", c, ch.r);
    else
      out += fmt::format("{},nan,0\n", c);
  }
  out += fmt::format("min,{:.17g},1\n", report.min_r);
  out += fmt::format("median,{:.17g},1\n", report.median_r);
  out += fmt::format("max,{:.17g},1\n", report.max_r);
  return out;
}

}  // namespace streamfilt
