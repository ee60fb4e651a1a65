// Copyright 2026 The mtmel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtmel/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtmel/audio.hpp"
#include "mtmel/bench.hpp"
#include "mtmel/config.hpp"
#include "mtmel/feature_io.hpp"
#include "mtmel/pipeline.hpp"
#include "mtmel/testkit.hpp"

namespace mtmel::cli {

namespace fs = std::filesystem;

namespace {

struct ConfigFlags {
  std::string setup;
  std::string config_path;
  std::string window;
  double kaiser_shape = kDefaultKaiserShape;
  Index k = 0;
  Index hop = 0;
  Index frame_len = 0;
  double f_min = 0.0;
  double f_max = 0.0;
  Index n_mels = 0;
  std::string mode;

  CLI::Option* setup_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* kaiser_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* hop_opt = nullptr;
  CLI::Option* frame_opt = nullptr;
  CLI::Option* fmin_opt = nullptr;
  CLI::Option* fmax_opt = nullptr;
  CLI::Option* nmels_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
};

struct FeaturesArgs {
  ConfigFlags cfg;
  std::string input;
  std::string input_dir;
  std::string output;
  std::string format = "bin";
  double snr = 0.0;
  CLI::Option* snr_opt = nullptr;
  std::uint64_t seed = 0;
  double crop_threshold = 0.1;
  unsigned jobs = 0;
};

struct MixArgs {
  std::string input;
  std::string output;
  double snr = 0.0;
  CLI::Option* snr_opt = nullptr;
  std::uint64_t seed = 0;
  double crop_threshold = 0.1;
};

struct BenchArgs {
  std::string k_range = "3..10";
  std::string window = "swce";
  std::string setup = "A";
  Index reps = kDefaultBenchReps;
  Index warmup = kBenchWarmup;
  std::string report;
  std::string input;
  bool amortize = false;
  bool no_pin = false;
};

struct VerifyArgs {
  std::string suite;
  Index frames = 10000;
  std::uint64_t seed = 1;
  std::string json_path;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  f.setup_opt = cmd->add_option("--setup", f.setup, "Preset A-E (default A)")
                    ->check(CLI::IsMember({"A", "B", "C", "D", "E"}));
  cmd->add_option("--config", f.config_path,
                  std::string("JSON config file (default: $") + kConfigEnvVar + ")");
  f.window_opt = cmd->add_option("--window", f.window,
                                 "hann|hamming|bartlett|boxcar|kaiser|hermite|swce|swce-modified");
  f.kaiser_opt = cmd->add_option("--kaiser-shape", f.kaiser_shape, "Kaiser shape parameter");
  f.k_opt = cmd->add_option("--k", f.k, "Taper count (multitaper windows default to 5)");
  f.hop_opt = cmd->add_option("--hop", f.hop, "Hop size H in samples");
  f.frame_opt = cmd->add_option("--frame-len", f.frame_len, "Frame length N in samples");
  f.fmin_opt = cmd->add_option("--fmin", f.f_min, "Lower mel edge in Hz");
  f.fmax_opt = cmd->add_option("--fmax", f.f_max, "Upper mel edge in Hz");
  f.nmels_opt = cmd->add_option("--n-mels", f.n_mels, "Number of mel bands");
  f.mode_opt = cmd->add_option("--mode", f.mode, "logmel|paper");
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

/// preset defaults < config file < flags.
FeatureConfig effective_config(const ConfigFlags& f) {
  FeatureConfig c = preset("A");
  bool k_set = false;

  std::string config_path = f.config_path;
  if (config_path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar); env != nullptr) config_path = env;
  }
  if (!config_path.empty()) {
    const std::string text = read_text(config_path);
    c = apply_json_overrides(c, text);
    const auto j = nlohmann::json::parse(text, nullptr, false);
    k_set = j.is_object() && j.contains("k");
  }

  if (*f.setup_opt) {
    const FeatureConfig p = preset(f.setup);
    c.hop = p.hop;
    c.frame_len = p.frame_len;
    c.f_min = p.f_min;
    c.f_max = p.f_max;
    c.n_mels = p.n_mels;
  }
  if (*f.hop_opt) c.hop = f.hop;
  if (*f.frame_opt) c.frame_len = f.frame_len;
  if (*f.fmin_opt) c.f_min = f.f_min;
  if (*f.fmax_opt) c.f_max = f.f_max;
  if (*f.nmels_opt) c.n_mels = f.n_mels;
  if (*f.kaiser_opt) c.window.kaiser_shape = f.kaiser_shape;
  if (*f.window_opt) {
    c.window = parse_window_kind(f.window, c.window.kaiser_shape);
    if (!k_set) c.k = c.window.classical() ? 1 : 5;
  }
  if (*f.k_opt) c.k = f.k;
  if (*f.mode_opt) c.mode = parse_transform_mode(f.mode);
  validate(c);
  return c;
}

std::uint64_t name_hash(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

AudioBuffer load_cropped(const fs::path& path, double threshold) {
  AudioBuffer audio = read_wav(path);
  CropOptions crop;
  crop.threshold_ratio = threshold;
  return crop_one_second(audio, crop);
}

void write_features(const MelFeatureMatrix& features, const std::string& format,
                    const fs::path& output) {
  if (format == "bin") {
    write_file_bytes(output, encode_feature_file(features));
  } else if (format == "csv") {
    const std::string text = feature_csv(features);
    write_file_bytes(output, std::as_bytes(std::span(text.data(), text.size())));
  } else {
    const PgmRendering image = render_pgm(features);
    write_file_bytes(output, image.bytes);
    const std::string note = pgm_scale_note(image);
    fs::path sidecar = output;
    sidecar += ".scale.txt";
    write_file_bytes(sidecar, std::as_bytes(std::span(note.data(), note.size())));
  }
}

void process_file(const fs::path& input, const fs::path& output, const FeatureConfig& config,
                  const FeaturesArgs& args, std::uint64_t seed) {
  AudioBuffer audio = load_cropped(input, args.crop_threshold);
  if (*args.snr_opt) {
    NoiseMixSpec spec;
    spec.snr_db = args.snr;
    spec.seed = seed;
    audio = mix_noise(audio, spec).audio;
  }
  write_features(extract_features(audio, config), args.format, output);
}

int handle_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return exit_code_for(e.category());
}

int cmd_features(const FeaturesArgs& args, std::ostream& out, std::ostream& err) {
  const FeatureConfig config = effective_config(args.cfg);
  if (args.input.empty() == args.input_dir.empty()) {
    throw_invalid("give exactly one of --input or --input-dir");
  }
  if (!args.input.empty()) {
    process_file(args.input, args.output, config, args, args.seed);
    out << "wrote " << args.output << " (" << to_json(config) << ")\n";
    return kOk;
  }

  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(args.input_dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
  }
  if (ec) throw_io("cannot list '" + args.input_dir + "': " + ec.message());
  std::sort(files.begin(), files.end());
  fs::create_directories(args.output, ec);
  if (ec) throw_io("cannot create '" + args.output + "': " + ec.message());

  const unsigned jobs = args.jobs > 0 ? args.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::optional<Error>> failures(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string name = files[i].filename().string();
      fs::path target = fs::path(args.output) / files[i].stem();
      target += "." + args.format;
      try {
        process_file(files[i], target, config, args, mix_seed(args.seed ^ name_hash(name)));
      } catch (const Error& e) {
        failures[i] = e;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, files.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int code = kOk;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (failures[i]) {
      err << files[i].string() << ": ";
      const int c = handle_error(*failures[i], err);
      if (code == kOk) code = c;
    }
  }
  out << "processed " << files.size() << " file(s) into " << args.output << '\n';
  return code;
}

int cmd_mix(const MixArgs& args, std::ostream& out) {
  AudioBuffer audio = load_cropped(args.input, args.crop_threshold);
  Index clipped = 0;
  if (*args.snr_opt) {
    NoiseMixSpec spec;
    spec.snr_db = args.snr;
    spec.seed = args.seed;
    MixResult mixed = mix_noise(audio, spec);
    clipped = mixed.clipped;
    audio = std::move(mixed.audio);
  }
  write_wav(args.output, audio);
  out << "wrote " << args.output << " (clipped samples: " << clipped << ")\n";
  return kOk;
}

std::vector<Index> parse_k_values(const std::string& text) {
  std::vector<Index> out;
  try {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
      const Index lo = std::stoll(text.substr(0, dots));
      const Index hi = std::stoll(text.substr(dots + 2));
      if (hi < lo) throw_invalid("invalid K range '" + text + "'");
      for (Index k = lo; k <= hi; ++k) out.push_back(k);
    } else {
      std::stringstream s(text);
      std::string item;
      while (std::getline(s, item, ',')) out.push_back(std::stoll(item));
    }
  } catch (const std::logic_error&) {
    throw_invalid("invalid K range '" + text + "' (expected a..b or a,b,c)");
  }
  if (out.empty()) throw_invalid("empty K range");
  return out;
}

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  const std::vector<Index> k_values = parse_k_values(args.k_range);
  std::vector<WindowKind> families;
  if (args.window == "all") {
    families = {{WindowFamily::Hermite}, {WindowFamily::SwceOriginal}, {WindowFamily::SwceModified}};
  } else {
    families = {parse_window_kind(args.window)};
    if (families.front().classical()) throw_invalid("bench needs a multitaper window family");
  }

  std::vector<std::byte> encoded;
  AudioBuffer signal = benchmark_signal();
  if (!args.input.empty()) {
    encoded = read_file_bytes(args.input);
    signal = parse_wav(encoded);
    if (signal.size() > kOneSecond) signal = crop_one_second(signal);
  }

  BenchOptions options;
  options.reps = args.reps;
  options.warmup = args.warmup;
  options.amortize_tapers = args.amortize;
  options.pin_cpu = !args.no_pin;
  options.encoded_input = encoded;

  std::vector<TimingRecord> records;
  std::vector<std::vector<TimingRecord>> per_family;
  for (const auto& family : families) {
    FeatureConfig config = preset(args.setup);
    config.window = family;
    per_family.push_back(time_feature_extraction(signal, config, k_values, options));
    records.insert(records.end(), per_family.back().begin(), per_family.back().end());
  }

  std::ostringstream csv;
  csv << timed_region_note(options) << '\n';
  write_bench_csv(csv, records);
  std::string fit_error;
  for (const auto& group : per_family) {
    try {
      csv << fit_summary_line(fit_linear(group)) << " [" << window_name(group.front().window_kind)
          << "]\n";
    } catch (const Error& e) {
      fit_error = e.what();
    }
  }
  if (per_family.size() > 1 && fit_error.empty()) {
    std::vector<TimingRecord> mean_curve = per_family.front();
    for (std::size_t i = 0; i < mean_curve.size(); ++i) {
      double total = 0.0;
      for (const auto& group : per_family) total += group[i].mean_ms;
      mean_curve[i].mean_ms = total / static_cast<double>(per_family.size());
    }
    csv << fit_summary_line(fit_linear(mean_curve)) << " [mean of families]\n";
  }

  if (args.report.empty()) {
    out << csv.str();
  } else {
    const std::string text = csv.str();
    write_file_bytes(args.report, std::as_bytes(std::span(text.data(), text.size())));
    out << "wrote " << args.report << " (" << records.size() << " rows)\n";
  }
  if (!fit_error.empty()) throw_invalid(fit_error);
  return kOk;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  testkit::VerifyOptions options;
  options.variance_frames = args.frames;
  options.seed = args.seed;
  const auto results = testkit::run_verify(args.suite, options);
  out << testkit::format_table(results);

  std::ostringstream lines;
  for (const auto& r : results) lines << testkit::to_json_line(r) << '\n';
  if (args.json_path.empty()) {
    out << lines.str();
  } else {
    const std::string text = lines.str();
    write_file_bytes(args.json_path, std::as_bytes(std::span(text.data(), text.size())));
  }
  const bool all_passed =
      std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  out << (all_passed ? "all checks passed" : "some checks FAILED") << '\n';
  return all_passed ? kOk : kCheckFailed;
}

}  // namespace

int exit_code_for(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::InvalidArgument: return kUsage;
    case ErrorCategory::Io: return kIoError;
    case ErrorCategory::Format: return kFormatError;
    case ErrorCategory::Domain: return kDomainError;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical and multitaper mel spectrogram features"};
  app.require_subcommand(1);

  FeaturesArgs features;
  auto* f = app.add_subcommand("features", "Extract (multitaper) mel spectrogram features");
  add_config_flags(f, features.cfg);
  f->add_option("--input", features.input, "Input WAV (PCM-16, mono, 16 kHz)");
  f->add_option("--input-dir", features.input_dir, "Process every .wav in a directory");
  f->add_option("--output", features.output, "Output file (or directory with --input-dir)")
      ->required();
  f->add_option("--format", features.format, "bin|csv|pgm")
      ->check(CLI::IsMember({"bin", "csv", "pgm"}));
  features.snr_opt = f->add_option("--snr", features.snr, "Mix WGN at this SNR in dB");
  f->add_option("--seed", features.seed, "Noise seed");
  f->add_option("--crop-threshold", features.crop_threshold,
                "Onset energy threshold as a fraction of the peak");
  f->add_option("--jobs", features.jobs, "Worker threads for --input-dir");

  MixArgs mix;
  auto* m = app.add_subcommand("mix", "Crop to one second and mix white Gaussian noise");
  m->add_option("--input", mix.input, "Input WAV")->required();
  m->add_option("--output", mix.output, "Output WAV")->required();
  mix.snr_opt = m->add_option("--snr", mix.snr, "SNR in dB (omit to skip mixing)");
  m->add_option("--seed", mix.seed, "Noise seed");
  m->add_option("--crop-threshold", mix.crop_threshold,
                "Onset energy threshold as a fraction of the peak");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time feature extraction against the taper count");
  b->add_option("--k", bench.k_range, "Taper counts: a..b or a,b,c");
  b->add_option("--window", bench.window, "hermite|swce|swce-modified|all")
      ->check(CLI::IsMember({"hermite", "swce", "swce-modified", "all"}));
  b->add_option("--setup", bench.setup, "Preset A-E")
      ->check(CLI::IsMember({"A", "B", "C", "D", "E"}));
  b->add_option("--reps", bench.reps, "Timed repetitions per K");
  b->add_option("--warmup", bench.warmup, "Untimed warm-up runs per K");
  b->add_option("--report", bench.report, "CSV report path (default stdout)");
  b->add_option("--input", bench.input, "WAV input (default: built-in test signal)");
  b->add_flag("--amortize-tapers", bench.amortize,
              "Build tapers and filterbank outside the timed region");
  b->add_flag("--no-pin", bench.no_pin, "Do not pin the timing thread to one CPU");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run the built-in reference checks");
  std::vector<std::string> suites = testkit::verify_suite_names();
  v->add_option("--suite", verify.suite, "orthonormality|weights|oracle|variance|quadrature|all")
      ->required()
      ->check(CLI::IsMember(suites));
  v->add_option("--frames", verify.frames, "Monte-Carlo frames for the variance suite");
  v->add_option("--seed", verify.seed, "Seed for random checks");
  v->add_option("--json", verify.json_path, "Write JSON lines here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*f) return cmd_features(features, out, err);
    if (*m) return cmd_mix(mix, out);
    if (*b) return cmd_bench(bench, out);
    return cmd_verify(verify, out);
  } catch (const Error& e) {
    return handle_error(e, err);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace mtmel::cli
