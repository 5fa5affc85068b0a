#include "streamfilt/signal_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "streamfilt/error.hpp"

namespace streamfilt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) fail(Errc::file_missing, "no such file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(Errc::io_failure, "read failed: " + path.string());
  return std::move(buf).str();
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

template <class T>
T header_field(const json& header, const char* key) {
  auto it = header.find(key);
  if (it == header.end()) fail(Errc::malformed_header, std::string("header missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    fail(Errc::malformed_header, std::string("header field '") + key + "' has the wrong type");
  }
}

}  // namespace

SignalPaths signal_paths(const fs::path& base) {
  fs::path stem = base;
  if (stem.extension() == ".json" || stem.extension() == ".f64") stem.replace_extension();
  return {fs::path(stem).concat(".json"), fs::path(stem).concat(".f64")};
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp.concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_failure, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) fail(Errc::io_failure, "write failed: " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(Errc::io_failure, "cannot rename into " + path.string());
  }
}

void store_signal(const SignalMatrix& signal, const fs::path& base) {
  const auto paths = signal_paths(base);
  const auto& info = signal.info();

  json header;
  header["format_version"] = kSignalFormatVersion;
  header["sampling_rate_hz"] = info.sampling_rate_hz;
  header["channel_count"] = info.channel_count;
  header["sample_count"] = info.sample_count;
  header["channel_labels"] = info.channel_labels;

  std::string payload(signal.data().size() * sizeof(double), '\0');
  char* dst = payload.data();
  for (double v : signal.data()) {
    const auto bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
    std::memcpy(dst, &bits, sizeof bits);
    dst += sizeof bits;
  }

  write_file_atomic(paths.payload, payload);
  write_file_atomic(paths.header, header.dump(2) + "\n");
}

SignalMatrix load_signal(const fs::path& base) {
  const auto paths = signal_paths(base);
  const std::string header_text = read_file(paths.header);

  json header;
  try {
    header = json::parse(header_text);
  } catch (const json::parse_error& e) {
    fail(Errc::malformed_header, paths.header.string() + ": " + e.what());
  }
  if (!header.is_object()) fail(Errc::malformed_header, "header is not a JSON object");
  if (header_field<int>(header, "format_version") != kSignalFormatVersion)
    fail(Errc::malformed_header, "unsupported format_version");

  SignalInfo info;
  info.sampling_rate_hz = header_field<double>(header, "sampling_rate_hz");
  const auto channels = header_field<std::int64_t>(header, "channel_count");
  const auto samples = header_field<std::int64_t>(header, "sample_count");
  if (channels < 1 || samples < 1)
    fail(Errc::invariant_violation, "channel_count and sample_count must be >= 1");
  info.channel_count = static_cast<std::size_t>(channels);
  info.sample_count = static_cast<std::size_t>(samples);
  info.channel_labels = header_field<std::vector<std::string>>(header, "channel_labels");
  info.validate();

  const std::string payload = read_file(paths.payload);
  const std::size_t expected = info.channel_count * info.sample_count * sizeof(double);
  if (payload.size() != expected)
    fail(Errc::dimension_mismatch, paths.payload.string() + " holds " +
                                       std::to_string(payload.size()) + " bytes, header implies " +
                                       std::to_string(expected));

  std::vector<double> data(info.channel_count * info.sample_count);
  const char* src = payload.data();
  for (double& v : data) {
    std::uint64_t bits;
    std::memcpy(&bits, src, sizeof bits);
    v = std::bit_cast<double>(to_little_endian(bits));
    src += sizeof bits;
  }
  return SignalMatrix(std::move(info), std::move(data));
}

SignalMatrix load_csv(const fs::path& path, double sampling_rate_hz) {
  const std::string text = read_file(path);
  std::istringstream in(text);

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };

  std::string line;
  if (!std::getline(in, line)) fail(Errc::malformed_header, "CSV has no header row");
  SignalInfo info;
  info.sampling_rate_hz = sampling_rate_hz;
  info.channel_labels = split(line);
  info.channel_count = info.channel_labels.size();

  std::vector<std::vector<double>> columns(info.channel_count);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != info.channel_count)
      fail(Errc::dimension_mismatch, "CSV row " + std::to_string(row) + " has " +
                                         std::to_string(cells.size()) + " columns, expected " +
                                         std::to_string(info.channel_count));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto* first = cells[c].data();
      const auto* last = first + cells[c].size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last)
        fail(Errc::malformed_header, "CSV row " + std::to_string(row) + ": bad number '" + cells[c] + "'");
      columns[c].push_back(v);
    }
  }
  info.sample_count = info.channel_count ? columns[0].size() : 0;
  info.validate();

  std::vector<double> data;
  data.reserve(info.channel_count * info.sample_count);
  for (const auto& col : columns) data.insert(data.end(), col.begin(), col.end());
  return SignalMatrix(std::move(info), std::move(data));
}

}  // namespace streamfilt
