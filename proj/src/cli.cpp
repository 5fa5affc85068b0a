#include "streamfilt/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <limits>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "streamfilt/bench.hpp"
#include "streamfilt/error.hpp"
#include "streamfilt/fidelity.hpp"
#include "streamfilt/filtering.hpp"
#include "streamfilt/fir.hpp"
#include "streamfilt/signal_io.hpp"
#include "streamfilt/synthetic.hpp"

namespace streamfilt::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kVersion = "streamfilt 1.0.0 (signal format_version 1, streamfilt-bench v1)";

struct Options {
  // gen
  std::size_t channels = 59;
  std::size_t samples = 166800;
  double rate = 600.614;
  std::uint64_t seed = 7;
  std::optional<double> noise;

  // filter band
  double low = 2.0;
  double high = 30.0;
  std::optional<std::size_t> length;

  std::string in;
  std::optional<double> csv_rate;
  std::string out;
  std::string out_dir = ".";
  std::string a;
  std::string b;
  std::string label = "compare";
  std::string mode = "per-packet";
  std::string method = "auto";
  std::size_t packet = 400;
  std::vector<std::size_t> packets{200, 300, 400, 800, 991, 1200};
  std::vector<std::string> modes{"per-packet"};
  std::size_t reps = 100;
  std::size_t acc_reps = 1;
  std::size_t replicate = 3;
  std::size_t warmup = 3;
};

unsigned resolve_threads() {
  const char* env = std::getenv("STREAMFILT_THREADS");
  if (env == nullptr || *env == '\0') return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (*end != '\0' || value < 1 || value > 4096)
    fail(Errc::invalid_argument, "STREAMFILT_THREADS must be a positive integer, got '" + std::string(env) + "'");
  return static_cast<unsigned>(value);
}

ConvolutionMethod parse_method(const std::string& name) {
  if (name == "auto") return ConvolutionMethod::Auto;
  if (name == "direct") return ConvolutionMethod::Direct;
  return ConvolutionMethod::Fft;
}

SignalMatrix load_input(const Options& opt) {
  if (fs::path(opt.in).extension() == ".csv") {
    if (!opt.csv_rate) fail(Errc::invalid_argument, "--csv-rate: required when --in is a CSV file");
    return load_csv(opt.in, *opt.csv_rate);
  }
  if (opt.csv_rate) fail(Errc::invalid_argument, "--csv-rate: only valid when --in is a CSV file");
  return load_signal(opt.in);
}

FilterSpec band_for(const Options& opt, double rate) {
  FilterSpec spec;
  spec.low_cut_hz = opt.low;
  spec.high_cut_hz = opt.high;
  spec.sampling_rate_hz = rate;
  spec.length_override = opt.length;
  spec.validate();
  return spec;
}

FilterMode mode_for(const Options& opt, const SignalMatrix& signal) {
  if (opt.mode == "batch") return mode::Batch{};
  const auto plan = packetize(signal, opt.packet);
  if (opt.mode == "stateful") return mode::StatefulStream{plan};
  return mode::PerPacket{plan};
}

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty() || path == "-")
    out << contents;
  else
    write_file_atomic(path, contents);
}

std::string taps_csv(const FirKernel& kernel) {
  std::string text;
  for (double t : kernel.taps()) text += fmt::format("{:.17g}\n", t);
  return text;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string line = "streamfilt";
  for (const auto& a : args) line += " " + a;
  return line;
}

int run_gen(const Options& opt, std::ostream& out) {
  auto spec = eeg_like_spec(opt.channels, opt.samples, opt.rate, opt.seed);
  if (opt.noise) spec.noise_sigma = *opt.noise;
  const auto signal = generate_synthetic(spec);
  store_signal(signal, opt.out);
  const auto paths = signal_paths(opt.out);
  out << "wrote " << paths.header.string() << " and " << paths.payload.string() << " (" << signal.channels()
      << " x " << signal.samples() << ", " << fmt::format("{:.4f}", signal.info().duration_s()) << " s)\n";
  return kSuccess;
}

int run_design(const Options& opt, std::ostream& out) {
  const auto kernel = design_bandpass(band_for(opt, opt.rate));
  emit(opt.out, taps_csv(kernel), out);
  if (!opt.out.empty() && opt.out != "-")
    out << "taps " << kernel.size() << ", group delay " << kernel.group_delay_samples() << " samples\n";
  return kSuccess;
}

int run_filter(const Options& opt, unsigned threads, std::ostream& out) {
  const auto signal = load_input(opt);
  const auto kernel = design_bandpass(band_for(opt, signal.sampling_rate_hz()));
  const auto mode = mode_for(opt, signal);
  const auto filtered = apply_filter(signal, kernel, mode, {parse_method(opt.method), threads});
  store_signal(filtered, opt.out);
  out << mode_name(mode) << ": " << kernel.size() << " taps, checksum " << checksum_hex(checksum(filtered))
      << "\n";
  return kSuccess;
}

int run_compare(const Options& opt, unsigned threads, std::ostream& out) {
  const auto a = load_signal(opt.a);
  const auto b = load_signal(opt.b);
  const auto report = compare_channels(a, b, opt.label, threads);
  emit(opt.out, fidelity_csv(report), out);
  return kSuccess;
}

std::vector<SweepMode> sweep_modes(const Options& opt) {
  std::vector<SweepMode> modes;
  for (const auto& m : opt.modes) modes.push_back(m == "stateful" ? SweepMode::Stateful : SweepMode::PerPacket);
  return modes;
}

int run_sweep_cmd(const Options& opt, unsigned threads, std::ostream& out, std::ostream& err) {
  const auto signal = load_input(opt);
  SweepConfig cfg;
  cfg.packet_sizes = opt.packets;
  cfg.repetitions_accuracy = opt.acc_reps;
  cfg.repetitions_timing = opt.reps;
  cfg.replicate_factor = opt.replicate;
  cfg.warmup = opt.warmup;
  cfg.filter = band_for(opt, signal.sampling_rate_hz());
  cfg.timed_modes = sweep_modes(opt);
  cfg.fidelity_threads = threads;
  cfg.method = parse_method(opt.method);
  cfg.validate();

  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) fail(Errc::io_failure, "--out-dir: cannot create " + opt.out_dir);

  const auto result = run_sweep(signal, cfg, nullptr, [&err](const std::string& msg) { err << msg << "\n"; });
  const fs::path dir(opt.out_dir);
  write_file_atomic(dir / "sweep_fidelity.csv", sweep_fidelity_csv(result, cfg.packet_sizes));
  write_file_atomic(dir / "sweep_timing.csv", sweep_timing_csv(result.timing));

  out << "packet_size,median_r,min_r,max_r\n";
  for (std::size_t i = 0; i < result.fidelity.size(); ++i)
    out << fmt::format("{},{:.6f},{:.6f},{:.6f}\n", cfg.packet_sizes[i], result.fidelity[i].median_r,
                       result.fidelity[i].min_r, result.fidelity[i].max_r);
  out << fmt::format("kernel design time {:.6f} s\n", result.design_time_s);
  return kSuccess;
}

int run_bench(const Options& opt, std::ostream& out) {
  const auto signal = load_input(opt);
  const auto kernel = design_bandpass(band_for(opt, signal.sampling_rate_hz()));
  const auto timed = opt.replicate > 1 ? replicate(signal, opt.replicate) : signal;
  const auto mode = mode_for(opt, timed);
  const auto report = time_filtering(timed, kernel, mode, opt.reps, {opt.warmup, parse_method(opt.method)});
  emit(opt.out, sweep_timing_csv(std::span(&report, 1)), out);
  return kSuccess;
}

void add_band(CLI::App* cmd, Options& opt) {
  cmd->add_option("--low", opt.low, "Low cut-off in Hz")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--high", opt.high, "High cut-off in Hz")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--length", opt.length, "Kernel length override (odd, >= 3); default derives it from the band");
  cmd->add_option("--method", opt.method, "Convolution: auto, direct or fft")
      ->check(CLI::IsMember({"auto", "direct", "fft"}))
      ->capture_default_str();
}

void add_input(CLI::App* cmd, Options& opt) {
  cmd->add_option("--in", opt.in, "Input signal (base name of .json/.f64 pair, or a .csv)")->required();
  cmd->add_option("--csv-rate", opt.csv_rate, "Sampling rate in Hz for CSV input")->check(CLI::PositiveNumber);
}

CLI::Option* add_mode(CLI::App* cmd, Options& opt) {
  cmd->add_option("--mode", opt.mode, "batch, per-packet or stateful")
      ->check(CLI::IsMember({"batch", "per-packet", "stateful"}))
      ->capture_default_str();
  return cmd->add_option("--packet", opt.packet, "Packet size in samples (per-packet and stateful modes)")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
}

ordered_json resolved_config(const std::string& sub, const Options& o, unsigned threads) {
  ordered_json j;
  j["subcommand"] = sub;
  if (sub == "gen") {
    j["channels"] = o.channels;
    j["samples"] = o.samples;
    j["rate"] = o.rate;
    j["seed"] = o.seed;
    j["noise"] = o.noise ? ordered_json(*o.noise) : ordered_json(nullptr);
    j["out"] = o.out;
    return j;
  }
  if (sub == "compare") {
    j["a"] = o.a;
    j["b"] = o.b;
    j["label"] = o.label;
    j["out"] = o.out;
    j["threads"] = threads;
    return j;
  }
  j["low"] = o.low;
  j["high"] = o.high;
  j["length"] = o.length ? ordered_json(*o.length) : ordered_json(nullptr);
  j["method"] = o.method;
  if (sub == "design") {
    j["rate"] = o.rate;
    j["out"] = o.out;
    return j;
  }
  j["in"] = o.in;
  j["csv_rate"] = o.csv_rate ? ordered_json(*o.csv_rate) : ordered_json(nullptr);
  if (sub == "filter" || sub == "bench") {
    j["mode"] = o.mode;
    j["packet"] = o.packet;
  }
  if (sub == "sweep") {
    j["packets"] = o.packets;
    j["modes"] = o.modes;
    j["acc_reps"] = o.acc_reps;
    j["out_dir"] = o.out_dir;
  }
  if (sub == "sweep" || sub == "bench") {
    j["reps"] = o.reps;
    j["replicate"] = o.replicate;
    j["warmup"] = o.warmup;
  }
  if (sub != "sweep") j["out"] = o.out;
  j["threads"] = sub == "bench" ? 1u : threads;
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Zero-phase FIR band-pass filtering, packetized streaming simulation and benchmarking.",
               "streamfilt"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.footer(
      "Environment: STREAMFILT_THREADS caps channel-level worker threads (1 = fully sequential).\n"
      "Timing runs are always single-threaded; pin the process to one core with OS tooling\n"
      "(e.g. taskset -c 2 streamfilt bench ...) for stable numbers.");

  const auto positive = CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max());
  const auto at_least_two = CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max());

  auto* gen = app.add_subcommand("gen", "Generate a seeded synthetic EEG-like recording");
  gen->add_option("--channels", opt.channels, "Channel count")->check(positive)->capture_default_str();
  gen->add_option("--samples", opt.samples, "Samples per channel")->check(positive)->capture_default_str();
  gen->add_option("--rate", opt.rate, "Sampling rate in Hz")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--seed", opt.seed, "Noise seed")->capture_default_str();
  gen->add_option("--noise", opt.noise, "Noise standard deviation in volts (default 1e-5)")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--out", opt.out, "Output base name; writes <out>.json and <out>.f64")->required();

  auto* design = app.add_subcommand("design", "Design the band-pass kernel and export its taps as CSV");
  add_band(design, opt);
  design->add_option("--rate", opt.rate, "Sampling rate in Hz")->check(CLI::PositiveNumber)->capture_default_str();
  design->add_option("--out", opt.out, "Tap CSV path (stdout when omitted)");

  auto* filter = app.add_subcommand("filter", "Filter a recording in batch, per-packet or stateful mode");
  add_input(filter, opt);
  add_band(filter, opt);
  auto* filter_packet = add_mode(filter, opt);
  filter->add_option("--out", opt.out, "Output base name")->required();

  auto* compare = app.add_subcommand("compare", "Per-channel Pearson correlation between two recordings");
  compare->add_option("--a", opt.a, "First recording")->required();
  compare->add_option("--b", opt.b, "Second recording")->required();
  compare->add_option("--label", opt.label, "Configuration label")->capture_default_str();
  compare->add_option("--out", opt.out, "Report CSV path (stdout when omitted)");

  auto* sweep = app.add_subcommand("sweep", "Accuracy and timing across packet sizes");
  add_input(sweep, opt);
  add_band(sweep, opt);
  sweep->add_option("--packets", opt.packets, "Comma-separated, strictly increasing packet sizes")
      ->delimiter(',')
      ->check(positive)
      ->capture_default_str();
  sweep->add_option("--modes", opt.modes, "Timed modes: per-packet, stateful")
      ->delimiter(',')
      ->check(CLI::IsMember({"per-packet", "stateful"}))
      ->capture_default_str();
  sweep->add_option("--reps", opt.reps, "Timing repetitions")->check(at_least_two)->capture_default_str();
  sweep->add_option("--acc-reps", opt.acc_reps, "Accuracy repetitions (checksums must agree)")
      ->check(positive)
      ->capture_default_str();
  sweep->add_option("--replicate", opt.replicate, "Copies of the recording used for timing")
      ->check(positive)
      ->capture_default_str();
  sweep->add_option("--warmup", opt.warmup, "Untimed warm-up runs")->capture_default_str();
  sweep->add_option("--out-dir", opt.out_dir, "Directory for sweep_fidelity.csv and sweep_timing.csv")
      ->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Time one filtering configuration");
  add_input(bench, opt);
  add_band(bench, opt);
  auto* bench_packet = add_mode(bench, opt);
  bench->add_option("--reps", opt.reps, "Timing repetitions")->check(at_least_two)->capture_default_str();
  bench->add_option("--replicate", opt.replicate, "Copies of the recording used for timing")
      ->check(positive)
      ->capture_default_str();
  bench->add_option("--warmup", opt.warmup, "Untimed warm-up runs")->capture_default_str();
  bench->add_option("--out", opt.out, "Timing CSV path (stdout when omitted)");

  std::vector<std::string> argv_storage{"streamfilt"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kSuccess;
    }
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }

  try {
    for (auto* cmd : {filter, bench}) {
      auto* packet = cmd == filter ? filter_packet : bench_packet;
      if (cmd->parsed() && opt.mode == "batch" && packet->count() > 0)
        fail(Errc::invalid_argument, "--packet: only valid with --mode per-packet or stateful");
    }
    const unsigned threads = resolve_threads();
    const std::string sub = app.get_subcommands().front()->get_name();
    err << resolved_config(sub, opt, threads).dump() << "\n";

    if (sub == "gen") return run_gen(opt, out);
    if (sub == "design") return run_design(opt, out);
    if (sub == "filter") return run_filter(opt, threads, out);
    if (sub == "compare") return run_compare(opt, threads, out);
    if (sub == "sweep") return run_sweep_cmd(opt, threads, out, err);
    err << "command under test: " << join_args(args) << "\n";
    return run_bench(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_io_error(e.code()) ? kIoError : kValidationError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace streamfilt::cli
