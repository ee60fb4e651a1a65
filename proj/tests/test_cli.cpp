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


#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "mtmel/audio.hpp"
#include "mtmel/cli.hpp"
#include "mtmel/feature_io.hpp"
#include "mtmel/testkit.hpp"

namespace fs = std::filesystem;
using namespace mtmel;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "mtmel");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("mtmel_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    write_wav(dir / "chirp.wav", testkit::synthetic_chirp());
    Eigen::VectorXd longer = Eigen::VectorXd::Zero(24000);
    longer.segment(6000, 16000) = testkit::synthetic_chirp().samples;
    write_wav(dir / "long.wav", AudioBuffer(longer, 16000.0));
    write_wav(dir / "silent.wav", AudioBuffer(Eigen::VectorXd::Zero(16000), 16000.0));
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

std::size_t count_lines_starting_with(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("features with setup A and five swce tapers") {
  Workspace ws;
  const Outcome r = run({"features", "--setup", "A", "--window", "swce", "--k", "5", "--input",
                         ws.path("chirp.wav"), "--output", ws.path("a.bin")});
  REQUIRE(r.code == cli::kOk);
  const FeatureFile f = decode_feature_file(read_file_bytes(ws.path("a.bin")));
  CHECK(f.header.rows == 100);
  CHECK(f.header.cols == 49);
  CHECK(f.config().window == WindowKind{WindowFamily::SwceOriginal});
  CHECK(f.config().k == 5);
}

TEST_CASE("features with setup D and hann") {
  Workspace ws;
  REQUIRE(run({"features", "--setup", "D", "--window", "hann", "--input", ws.path("chirp.wav"),
               "--output", ws.path("d.bin")})
              .code == cli::kOk);
  const FeatureFile f = decode_feature_file(read_file_bytes(ws.path("d.bin")));
  CHECK(f.header.rows == 40);
  CHECK(f.config().k == 1);
}

TEST_CASE("multitaper window without k defaults to five") {
  Workspace ws;
  REQUIRE(run({"features", "--window", "hermite", "--input", ws.path("chirp.wav"), "--output",
               ws.path("h.bin")})
              .code == cli::kOk);
  CHECK(decode_feature_file(read_file_bytes(ws.path("h.bin"))).config().k == 5);
}

TEST_CASE("exit codes by error category") {
  Workspace ws;
  CHECK(run({"features", "--setup", "A", "--window", "hermite", "--k", "0", "--input",
             ws.path("chirp.wav"), "--output", ws.path("x.bin")})
            .code == cli::kUsage);
  CHECK(run({"features", "--input", ws.path("missing.wav"), "--output", ws.path("x.bin")}).code ==
        cli::kIoError);
  write_file_bytes(ws.path("junk.wav"), std::vector<std::byte>(64, std::byte{1}));
  CHECK(run({"features", "--input", ws.path("junk.wav"), "--output", ws.path("x.bin")}).code ==
        cli::kFormatError);
  const Outcome silent = run({"mix", "--input", ws.path("silent.wav"), "--output", ws.path("m.wav"),
                              "--snr", "5"});
  CHECK(silent.code == cli::kDomainError);
  CHECK(silent.err.find("cannot define SNR for silent signal") != std::string::npos);
  CHECK(run({"features", "--frobnicate"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("real process exit status") {
  const std::string cmd = std::string(MTMEL_CLI_PATH) + " verify --suite none >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == cli::kUsage);
}

TEST_CASE("mix is deterministic and omitting snr only crops") {
  Workspace ws;
  for (const char* name : {"m1.wav", "m2.wav"}) {
    REQUIRE(run({"mix", "--input", ws.path("long.wav"), "--output", ws.path(name), "--snr", "5",
                 "--seed", "7"})
                .code == cli::kOk);
  }
  CHECK(slurp(ws.path("m1.wav")) == slurp(ws.path("m2.wav")));
  REQUIRE(run({"mix", "--input", ws.path("long.wav"), "--output", ws.path("m3.wav"), "--snr", "5",
               "--seed", "8"})
              .code == cli::kOk);
  CHECK(slurp(ws.path("m1.wav")) != slurp(ws.path("m3.wav")));

  REQUIRE(run({"mix", "--input", ws.path("long.wav"), "--output", ws.path("plain.wav")}).code == cli::kOk);
  const AudioBuffer plain = read_wav(ws.path("plain.wav"));
  const AudioBuffer cropped = crop_one_second(read_wav(ws.path("long.wav")));
  CHECK(plain.samples == cropped.samples);
}

TEST_CASE("feature files are bitwise reproducible and round trip") {
  Workspace ws;
  for (const char* name : {"f1.bin", "f2.bin"}) {
    REQUIRE(run({"features", "--setup", "A", "--window", "swce", "--k", "5", "--snr", "10",
                 "--seed", "42", "--input", ws.path("long.wav"), "--output", ws.path(name)})
                .code == cli::kOk);
  }
  const auto a = read_file_bytes(ws.path("f1.bin"));
  CHECK(a == read_file_bytes(ws.path("f2.bin")));
  const FeatureFile f = decode_feature_file(a);
  CHECK(encode_feature_file(f.values, f.header.config_json) == a);
}

TEST_CASE("csv and pgm outputs") {
  Workspace ws;
  REQUIRE(run({"features", "--setup", "D", "--format", "csv", "--input", ws.path("chirp.wav"),
               "--output", ws.path("d.csv")})
              .code == cli::kOk);
  const std::string csv = slurp(ws.path("d.csv"));
  CHECK(csv.rfind("# config: {", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 41);

  REQUIRE(run({"features", "--setup", "D", "--format", "pgm", "--input", ws.path("chirp.wav"),
               "--output", ws.path("d.pgm")})
              .code == cli::kOk);
  CHECK(slurp(ws.path("d.pgm")).rfind("P5\n", 0) == 0);
  CHECK(slurp(ws.path("d.pgm.scale.txt")).find("p1 = ") != std::string::npos);
  CHECK(run({"features", "--format", "png", "--input", ws.path("chirp.wav"), "--output",
             ws.path("d.png")})
            .code == cli::kUsage);
}

TEST_CASE("config precedence: preset, then file, then flags") {
  Workspace ws;
  const std::string cfg = ws.path("cfg.json");
  const std::string json = R"({"n_mels": 40, "window": "swce", "k": 3})";
  write_file_bytes(cfg, std::as_bytes(std::span(json.data(), json.size())));

  REQUIRE(run({"features", "--config", cfg, "--input", ws.path("chirp.wav"), "--output", ws.path("c1.bin")})
              .code == cli::kOk);
  FeatureConfig c = decode_feature_file(read_file_bytes(ws.path("c1.bin"))).config();
  CHECK(c.n_mels == 40);
  CHECK(c.k == 3);
  CHECK(c.hop == 320);

  REQUIRE(run({"features", "--config", cfg, "--n-mels", "60", "--input", ws.path("chirp.wav"),
               "--output", ws.path("c2.bin")})
              .code == cli::kOk);
  c = decode_feature_file(read_file_bytes(ws.path("c2.bin"))).config();
  CHECK(c.n_mels == 60);
  CHECK(c.k == 3);

  ::setenv(cli::kConfigEnvVar, cfg.c_str(), 1);
  REQUIRE(run({"features", "--input", ws.path("chirp.wav"), "--output", ws.path("c3.bin")}).code == cli::kOk);
  ::unsetenv(cli::kConfigEnvVar);
  CHECK(decode_feature_file(read_file_bytes(ws.path("c3.bin"))).config().n_mels == 40);

  const std::string broken = "{ not json";
  write_file_bytes(ws.path("bad.json"), std::as_bytes(std::span(broken.data(), broken.size())));
  CHECK(run({"features", "--config", ws.path("bad.json"), "--input", ws.path("chirp.wav"), "--output",
             ws.path("c4.bin")})
            .code == cli::kFormatError);
}

TEST_CASE("batch directory mode") {
  Workspace ws;
  const fs::path in = ws.dir / "batch";
  fs::create_directories(in);
  fs::copy_file(ws.dir / "chirp.wav", in / "one.wav");
  fs::copy_file(ws.dir / "long.wav", in / "two.wav");
  const std::string out1 = ws.path("out1"), out2 = ws.path("out2");
  for (const auto& out : {out1, out2}) {
    REQUIRE(run({"features", "--input-dir", in.string(), "--output", out, "--snr", "5", "--jobs", "2"})
                .code == cli::kOk);
  }
  CHECK(fs::exists(fs::path(out1) / "one.bin"));
  CHECK(fs::exists(fs::path(out1) / "two.bin"));
  CHECK(slurp((fs::path(out1) / "one.bin").string()) == slurp((fs::path(out2) / "one.bin").string()));
  CHECK(slurp((fs::path(out1) / "one.bin").string()) != slurp((fs::path(out1) / "two.bin").string()));
  CHECK(run({"features", "--input-dir", in.string(), "--input", ws.path("chirp.wav"), "--output", out1})
            .code == cli::kUsage);
}

TEST_CASE("bench report layout") {
  Workspace ws;
  const Outcome single = run({"bench", "--k", "5..5", "--window", "swce", "--reps", "10"});
  CHECK(single.code == cli::kUsage);
  CHECK(count_lines_starting_with(single.out, "swce,A,5,") == 1);
  CHECK(single.err.find("need >=3 distinct K for fit") != std::string::npos);

  const Outcome all = run({"bench", "--k", "3..10", "--window", "all", "--reps", "10", "--warmup", "1",
                           "--report", ws.path("bench.csv")});
  REQUIRE(all.code == cli::kOk);
  const std::string csv = slurp(ws.path("bench.csv"));
  CHECK(count_lines_starting_with(csv, "window,setup,k,mean_ms,std_ms,reps") == 1);
  CHECK(count_lines_starting_with(csv, "hermite,") + count_lines_starting_with(csv, "swce,") +
            count_lines_starting_with(csv, "swce-modified,") ==
        24);
  CHECK(count_lines_starting_with(csv, "# fit:") >= 3);

  CHECK(run({"bench", "--k", "3..x"}).code == cli::kUsage);
  CHECK(run({"bench", "--k", "3..10", "--reps", "5"}).code == cli::kUsage);
}

TEST_CASE("verify subcommand") {
  const Outcome none = run({"verify", "--suite", "none"});
  CHECK(none.code == cli::kUsage);
  const Outcome weights = run({"verify", "--suite", "weights"});
  CHECK(weights.code == cli::kOk);
  CHECK(weights.out.find("all checks passed") != std::string::npos);
  CHECK(weights.out.find("\"suite\":\"weights\"") != std::string::npos);
}
