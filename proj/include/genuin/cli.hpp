// genuin/cli.hpp

// Copyright 2026  The genuin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GENUIN_CLI_HPP_
#define GENUIN_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace genuin::cli {

struct EstimatePmfCmd {
  std::string out;
  std::vector<std::string> inputs;
  std::string select = "all";  // all | speech | nonspeech
  double alpha = 0.03;
};

struct GenuinizeCmd {
  std::string mode = "perturbed";
  int d_bits = 5;
  std::uint64_t seed = 0;
  std::string target;                // PMF file (basic / perturbed)
  std::vector<std::string> pool;     // reference WAVs (random, single-file mode)
  std::string input, output;         // single-file mode
  std::string manifest, out_dir;     // batch mode
  std::string only = "all";          // batch: all | genuine | spoof
  std::string pool_source = "train:genuine";  // batch random mode
};

struct VadCmd {
  std::string input;
  std::string out;
  double alpha = 0.03;
  double frame_ms = 20.0;
  double hop_ms = 10.0;
};

struct ExtractFeaturesCmd {
  std::string feature = "lfcc";
  std::string input, output;
};

struct TrainGmmCmd {
  std::vector<std::string> inputs;  // feature files or WAVs
  std::string out;
  std::string feature = "lfcc";
  std::string tag = "O";
  int components = 512;
  int iterations = 10;
  std::uint64_t seed = 0;
};

struct ScoreCmd {
  std::string genuine_model, spoof_model;
  std::string manifest;
  std::string subset = "test";
  std::string feature = "lfcc";
  std::string out;
};

struct EerCmd {
  std::string scores;
};

struct RunMatrixCmd {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::optional<std::string> cache_dir;
  std::optional<int> workers;
  bool timing = false;
  std::size_t stop_after = 0;
};

struct PmfDistanceCmd {
  std::string a, b;
};

struct MakeToyCorpusCmd {
  std::string out_dir;
  int files_per_group = 50;
  std::uint64_t seed = 2024;
  double seconds = 0.5;
};

struct HelpCmd {
  std::string text;
};

using Command = std::variant<EstimatePmfCmd, GenuinizeCmd, VadCmd, ExtractFeaturesCmd, TrainGmmCmd,
                             ScoreCmd, EerCmd, RunMatrixCmd, PmfDistanceCmd, MakeToyCorpusCmd,
                             HelpCmd>;

// argv without the program name. Throws Error(kUsage) naming the offending
// token on unknown subcommands or flags, bad values or missing options.
Command ParseArgs(const std::vector<std::string> &args);

// Runs the command. Returns the process exit status; failures print one line
// `error=<kind> message=<text>` to `err`.
int Execute(const Command &cmd, std::ostream &out, std::ostream &err);

// ParseArgs + Execute with the same error reporting.
int Main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace genuin::cli

#endif  // GENUIN_CLI_HPP_
