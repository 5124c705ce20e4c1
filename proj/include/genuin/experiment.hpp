// genuin/experiment.hpp

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

#ifndef GENUIN_EXPERIMENT_HPP_
#define GENUIN_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genuin/eer.hpp"
#include "genuin/features.hpp"
#include "genuin/genuinize.hpp"
#include "genuin/gmm.hpp"
#include "genuin/waveform.hpp"

namespace genuin {

// Data a GMM was trained on: original, genuinized, randomly genuinized.
enum class Provenance { kOriginal, kGenuinized, kRandom };
// What one side does to the test recordings: nothing, genuinize, random.
enum class Action { kNone, kGenuinize, kRandom };
enum class Subset { kTrain, kTest };
enum class Side { kAttacker, kCountermeasure };

char Code(Provenance p);
char Code(Action a);
Provenance ParseProvenance(char c);
Action ParseAction(char c);
const char *SubsetName(Subset s);
Subset ParseSubset(const std::string &s);

// (genuine model, spoof model) provenance pairs worth evaluating: OO, OG,
// GG, OR, RR. A processed genuine model paired with an original spoof
// model, or with a spoof model processed the other way, is excluded.
bool IsValidTrainCombo(Provenance genuine, Provenance spoof);
const std::vector<std::pair<Provenance, Provenance>> &TrainCombos();

struct ScenarioSpec {
  Provenance h_train = Provenance::kOriginal;
  Provenance s_train = Provenance::kOriginal;
  Action attacker = Action::kNone;
  Action cm = Action::kNone;
  std::string feature = "lfcc";
  int extra_bits = 5;
  std::uint64_t seed = 0;

  // e.g. "lfcc/OG/GN/d5/s42"
  std::string Key() const;
  bool operator==(const ScenarioSpec &) const = default;
};

// 5 train combos x 3 attacker actions x 3 countermeasure actions per
// feature, ordered by feature, combo, attacker action, countermeasure action.
std::vector<ScenarioSpec> EnumerateScenarios(std::span<const std::string> features,
                                             int extra_bits = 5, std::uint64_t seed = 0);

// Which manifest files a PMF (or a reference pool) is drawn from, written
// "<subset>:<label>", e.g. "train:genuine".
struct PmfSource {
  Subset subset = Subset::kTrain;
  TrialLabel label = TrialLabel::kGenuine;

  std::string ToString() const;
  static PmfSource Parse(const std::string &s);
};

struct ManifestEntry {
  std::string path;
  TrialLabel label = TrialLabel::kGenuine;
  Subset subset = Subset::kTrain;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  PmfSource attacker_pmf_source{Subset::kTest, TrialLabel::kGenuine};
  PmfSource cm_pmf_source{Subset::kTrain, TrialLabel::kGenuine};
};

// CSV `path,label,subset`; relative paths resolve against the CSV's folder.
DatasetManifest ReadManifestCsv(const std::filesystem::path &path);
void WriteManifestCsv(const std::filesystem::path &path, const DatasetManifest &m);

// Throws Error(kInput) unless every subset holds both labels.
void ValidateManifest(const DatasetManifest &m);

struct RunConfig {
  std::filesystem::path manifest;
  std::vector<std::string> features{"lfcc"};
  LfccConfig lfcc;
  GmmTrainOptions gmm;
  int extra_bits = 5;
  std::uint64_t seed = 0;
  int workers = 1;
  std::filesystem::path cache_dir;  // empty: no on-disk result cache
  bool record_timing = false;
  PmfSource attacker_pmf_source{Subset::kTest, TrialLabel::kGenuine};
  PmfSource cm_pmf_source{Subset::kTrain, TrialLabel::kGenuine};
};

// JSON object with keys manifest, features, gmm_components,
// gmm_iterations, d_bits, seed, workers, cache_dir, attacker_pmf_source,
// cm_pmf_source and an optional "lfcc" object. Relative paths resolve
// against the config file's folder.
RunConfig LoadRunConfig(const std::filesystem::path &path);

struct AudioFile {
  std::string id;
  TrialLabel label = TrialLabel::kGenuine;
  Subset subset = Subset::kTrain;
  std::uint64_t ordinal = 0;  // manifest row; keys the per-file random stream
  Waveform audio;
};

using FileSet = std::vector<AudioFile>;

// What a genuinizing action maps towards: a corpus CDF for G, a pool of
// per-file reference CDFs for R. The pool is reached through a callback so
// large pools can be built lazily.
struct ActionTarget {
  const TargetQuantiles *corpus = nullptr;
  std::size_t pool_size = 0;
  std::function<const TargetQuantiles &(std::size_t)> pool;

  static ActionTarget FromPool(std::span<const TargetQuantiles> pool);
};

// Attacker side touches spoof files only; countermeasure side touches every
// file. File i uses the stream DeriveSeed(params.seed, file.ordinal).
// Throws Error(kConfig) if G lacks a corpus target or R an empty pool.
FileSet ApplyAction(const FileSet &files, Side side, Action action, const ActionTarget &target,
                    const GenuinizeParams &params);

struct ScenarioResult {
  ScenarioSpec spec;
  double eer = 0.0;
  std::size_t genuine_trials = 0;
  std::size_t spoof_trials = 0;
  double seconds = 0.0;
  std::string error;  // non-empty when the scenario failed
  ScoreSet scores;
};

struct TrainedModels {
  Gmm genuine;
  Gmm spoof;
};

// Holds the loaded corpus plus the genuinization targets and compute-once
// caches shared by every scenario. Safe to call from several threads.
class Experiment {
 public:
  Experiment(const DatasetManifest &manifest, const RunConfig &config);
  Experiment(FileSet files, const RunConfig &config);
  ~Experiment();
  Experiment(const Experiment &) = delete;
  Experiment &operator=(const Experiment &) = delete;

  const FileSet &files() const;
  const RunConfig &config() const;
  // Content hash over audio, labels and configuration.
  std::uint64_t DataFingerprint() const;

  FileSet Select(Subset subset, TrialLabel label) const;
  FileSet Select(Subset subset) const;

  // ApplyAction against this experiment's attacker or countermeasure
  // targets, with per-file results cached. `purpose` names the random
  // stream: params.seed = DeriveSeed(seed, purpose).
  FileSet Transform(const FileSet &files, Side side, Action action, const std::string &purpose,
                    int extra_bits, std::uint64_t seed) const;

  // Features of one file, cached by content and extractor fingerprint.
  const FeatureMatrix &Features(const std::string &feature, const Waveform &w) const;

  TrainedModels PrepareTraining(const ScenarioSpec &spec) const;
  ScenarioResult RunScenario(const ScenarioSpec &spec) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

struct MatrixOptions {
  std::filesystem::path cache_dir;
  int workers = 1;
  bool record_timing = false;
  // Stop after computing this many uncached scenarios (0: no limit). Used to
  // exercise resumption.
  std::size_t stop_after = 0;
};

// Runs every scenario of every feature. Cached rows are reused; failed
// scenarios keep their error and the run goes on. Results come back in
// EnumerateScenarios order.
std::vector<ScenarioResult> RunMatrix(const Experiment &experiment,
                                      std::span<const std::string> features,
                                      const MatrixOptions &options);

// `feature,h_train,s_train,attacker,cm,eer,genuine_trials,spoof_trials,seconds`
std::string ResultsCsv(std::span<const ScenarioResult> results);
void WriteResultsCsv(const std::filesystem::path &path, std::span<const ScenarioResult> results);

}  // namespace genuin

#endif  // GENUIN_EXPERIMENT_HPP_
