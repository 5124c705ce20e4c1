// genuin/experiment.cpp

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

#include "genuin/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "genuin/error.hpp"
#include "genuin/rng.hpp"
#include "io_util.hpp"

namespace genuin {

namespace {

// Compute-once map. Entries are never erased, so returned references stay
// valid for the cache's lifetime.
template <typename Key, typename Value>
class OnceCache {
 public:
  template <typename Make>
  const Value &Get(const Key &key, Make &&make) {
    std::shared_ptr<Entry> entry;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto &slot = entries_[key];
      if (!slot) slot = std::make_shared<Entry>();
      entry = slot;
    }
    std::call_once(entry->once, [&] { entry->value.emplace(make()); });
    return *entry->value;
  }

 private:
  struct Entry {
    std::once_flag once;
    std::optional<Value> value;
  };
  std::mutex mu_;
  std::map<Key, std::shared_ptr<Entry>> entries_;
};

std::uint64_t HashSamples(const Waveform &w) {
  std::uint64_t h = detail::Fnv1a(w.samples.data(), w.samples.size() * sizeof(AmplitudeIndex));
  const std::int64_t meta[2] = {w.sample_rate, w.bits};
  return detail::Fnv1a(meta, sizeof(meta), h);
}

std::uint64_t Combine(std::uint64_t a, std::uint64_t b) { return Mix64(a ^ Mix64(b)); }

Waveform ApplyToFile(const AudioFile &f, Action action, const ActionTarget &target,
                     const GenuinizeParams &params) {
  GenuinizeParams p = params;
  p.seed = DeriveSeed(params.seed, f.ordinal);
  p.mode = action == Action::kRandom ? GenuinizeMode::kRandom : GenuinizeMode::kPerturbed;
  if (action == Action::kGenuinize) return GenuinizePerturbed(f.audio, *target.corpus, p);
  const std::size_t pick = SelectReference(target.pool_size, p.seed);
  return GenuinizePerturbed(f.audio, target.pool(pick), p);
}

void CheckTarget(Action action, const ActionTarget &target) {
  if (action == Action::kGenuinize && target.corpus == nullptr)
    throw Error(ErrorKind::kConfig, "genuinize action needs a target CDF");
  if (action == Action::kRandom && (target.pool_size == 0 || !target.pool))
    throw Error(ErrorKind::kConfig, "random genuinize action needs a non-empty reference pool");
}

bool Touches(Side side, const AudioFile &f) {
  return side == Side::kCountermeasure || f.label == TrialLabel::kSpoof;
}

int ComboRank(Provenance h, Provenance s) {
  const auto &combos = TrainCombos();
  for (std::size_t i = 0; i < combos.size(); ++i)
    if (combos[i].first == h && combos[i].second == s) return static_cast<int>(i);
  return -1;
}

std::string ResultRow(const ScenarioResult &r, bool record_timing) {
  std::ostringstream os;
  os << r.spec.feature << ',' << Code(r.spec.h_train) << ',' << Code(r.spec.s_train) << ','
     << Code(r.spec.attacker) << ',' << Code(r.spec.cm) << ','
     << (r.error.empty() ? detail::FormatDouble(r.eer) : std::string("NA")) << ','
     << r.genuine_trials << ',' << r.spoof_trials << ','
     << (record_timing ? detail::FormatDouble(r.seconds) : std::string("0"));
  return os.str();
}

const char *kResultsHeader = "feature,h_train,s_train,attacker,cm,eer,genuine_trials,spoof_trials,seconds";

}  // namespace

char Code(Provenance p) {
  switch (p) {
    case Provenance::kOriginal: return 'O';
    case Provenance::kGenuinized: return 'G';
    case Provenance::kRandom: return 'R';
  }
  return '?';
}

char Code(Action a) {
  switch (a) {
    case Action::kNone: return 'N';
    case Action::kGenuinize: return 'G';
    case Action::kRandom: return 'R';
  }
  return '?';
}

Provenance ParseProvenance(char c) {
  switch (c) {
    case 'O': return Provenance::kOriginal;
    case 'G': return Provenance::kGenuinized;
    case 'R': return Provenance::kRandom;
  }
  throw Error(ErrorKind::kFormat, std::string("unknown model provenance '") + c + "'");
}

Action ParseAction(char c) {
  switch (c) {
    case 'N': return Action::kNone;
    case 'G': return Action::kGenuinize;
    case 'R': return Action::kRandom;
  }
  throw Error(ErrorKind::kFormat, std::string("unknown action '") + c + "'");
}

const char *SubsetName(Subset s) { return s == Subset::kTrain ? "train" : "test"; }

Subset ParseSubset(const std::string &s) {
  if (s == "train") return Subset::kTrain;
  if (s == "test") return Subset::kTest;
  throw Error(ErrorKind::kFormat, "unknown subset '" + s + "'");
}

bool IsValidTrainCombo(Provenance genuine, Provenance spoof) {
  if (genuine == Provenance::kOriginal) return true;
  return genuine == spoof;
}

const std::vector<std::pair<Provenance, Provenance>> &TrainCombos() {
  static const std::vector<std::pair<Provenance, Provenance>> combos = {
      {Provenance::kOriginal, Provenance::kOriginal},
      {Provenance::kOriginal, Provenance::kGenuinized},
      {Provenance::kGenuinized, Provenance::kGenuinized},
      {Provenance::kOriginal, Provenance::kRandom},
      {Provenance::kRandom, Provenance::kRandom},
  };
  return combos;
}

std::string ScenarioSpec::Key() const {
  std::ostringstream os;
  os << feature << '/' << Code(h_train) << Code(s_train) << '/' << Code(attacker) << Code(cm)
     << "/d" << extra_bits << "/s" << seed;
  return os.str();
}

std::vector<ScenarioSpec> EnumerateScenarios(std::span<const std::string> features,
                                             int extra_bits, std::uint64_t seed) {
  constexpr Action kActions[] = {Action::kNone, Action::kGenuinize, Action::kRandom};
  std::vector<ScenarioSpec> out;
  for (const std::string &feature : features)
    for (const auto &[h, s] : TrainCombos())
      for (Action attacker : kActions)
        for (Action cm : kActions)
          out.push_back({h, s, attacker, cm, feature, extra_bits, seed});
  return out;
}

std::string PmfSource::ToString() const {
  return std::string(SubsetName(subset)) + ":" + LabelName(label);
}

PmfSource PmfSource::Parse(const std::string &s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorKind::kConfig, "PMF source '" + s + "' is not of the form subset:label");
  try {
    return {ParseSubset(s.substr(0, colon)), ParseLabel(s.substr(colon + 1))};
  } catch (const Error &e) {
    throw Error(ErrorKind::kConfig, "PMF source '" + s + "': " + e.what());
  }
}

DatasetManifest ReadManifestCsv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || detail::StripCr(line) != "path,label,subset")
    throw Error(ErrorKind::kFormat, path.string() + ": expected header 'path,label,subset'");
  DatasetManifest m;
  const auto base = path.parent_path();
  while (std::getline(in, line)) {
    const auto row = detail::StripCr(line);
    if (row.empty()) continue;
    const auto cols = detail::SplitCsv(row);
    if (cols.size() != 3) throw Error(ErrorKind::kFormat, path.string() + ": expected 3 columns");
    std::filesystem::path p{std::string(cols[0])};
    if (p.is_relative()) p = base / p;
    m.entries.push_back({p.lexically_normal().string(), ParseLabel(std::string(cols[1])),
                         ParseSubset(std::string(cols[2]))});
  }
  return m;
}

void WriteManifestCsv(const std::filesystem::path &path, const DatasetManifest &m) {
  std::ostringstream os;
  os << "path,label,subset\n";
  for (const auto &e : m.entries)
    os << e.path << ',' << LabelName(e.label) << ',' << SubsetName(e.subset) << '\n';
  detail::AtomicWrite(path, os.str());
}

void ValidateManifest(const DatasetManifest &m) {
  std::set<std::pair<Subset, TrialLabel>> seen;
  for (const auto &e : m.entries) seen.insert({e.subset, e.label});
  for (Subset s : {Subset::kTrain, Subset::kTest})
    for (TrialLabel l : {TrialLabel::kGenuine, TrialLabel::kSpoof})
      if (!seen.count({s, l}))
        throw Error(ErrorKind::kInput, std::string("manifest has no ") + LabelName(l) +
                                           " files in the " + SubsetName(s) + " subset");
}

RunConfig LoadRunConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  RunConfig c;
  const auto base = path.parent_path();
  auto resolve = [&](const std::string &p) {
    std::filesystem::path r{p};
    return r.is_relative() ? (base / r).lexically_normal() : r;
  };
  static const std::set<std::string> known = {
      "manifest", "features", "gmm_components", "gmm_iterations", "gmm_rel_tolerance",
      "d_bits", "seed", "workers", "cache_dir", "record_timing",
      "attacker_pmf_source", "cm_pmf_source", "lfcc"};
  try {
    for (const auto &[key, value] : j.items())
      if (!known.count(key)) throw Error(ErrorKind::kConfig, "unknown config key '" + key + "'");
    if (!j.contains("manifest")) throw Error(ErrorKind::kConfig, "config lacks 'manifest'");
    c.manifest = resolve(j.at("manifest").get<std::string>());
    if (j.contains("features")) c.features = j.at("features").get<std::vector<std::string>>();
    if (j.contains("gmm_components")) c.gmm.components = j.at("gmm_components").get<int>();
    if (j.contains("gmm_iterations")) c.gmm.iterations = j.at("gmm_iterations").get<int>();
    if (j.contains("gmm_rel_tolerance")) c.gmm.rel_tolerance = j.at("gmm_rel_tolerance").get<double>();
    if (j.contains("d_bits")) c.extra_bits = j.at("d_bits").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("cache_dir")) c.cache_dir = resolve(j.at("cache_dir").get<std::string>());
    if (j.contains("record_timing")) c.record_timing = j.at("record_timing").get<bool>();
    if (j.contains("attacker_pmf_source"))
      c.attacker_pmf_source = PmfSource::Parse(j.at("attacker_pmf_source").get<std::string>());
    if (j.contains("cm_pmf_source"))
      c.cm_pmf_source = PmfSource::Parse(j.at("cm_pmf_source").get<std::string>());
    if (j.contains("lfcc")) {
      const auto &l = j.at("lfcc");
      if (l.contains("frame_len_ms")) c.lfcc.frame_len_ms = l.at("frame_len_ms").get<double>();
      if (l.contains("frame_hop_ms")) c.lfcc.frame_hop_ms = l.at("frame_hop_ms").get<double>();
      if (l.contains("fft_size")) c.lfcc.fft_size = l.at("fft_size").get<int>();
      if (l.contains("num_filters")) c.lfcc.num_filters = l.at("num_filters").get<int>();
      if (l.contains("num_ceps")) c.lfcc.num_ceps = l.at("num_ceps").get<int>();
      if (l.contains("include_energy")) c.lfcc.include_energy = l.at("include_energy").get<bool>();
      if (l.contains("delta_window")) c.lfcc.delta_window = l.at("delta_window").get<int>();
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
  if (c.extra_bits < 0) throw Error(ErrorKind::kConfig, "d_bits must be non-negative");
  if (c.workers < 1) throw Error(ErrorKind::kConfig, "workers must be >= 1");
  if (c.gmm.components < 1) throw Error(ErrorKind::kConfig, "gmm_components must be >= 1");
  return c;
}

ActionTarget ActionTarget::FromPool(std::span<const TargetQuantiles> pool) {
  ActionTarget t;
  t.pool_size = pool.size();
  t.pool = [pool](std::size_t i) -> const TargetQuantiles & { return pool[i]; };
  return t;
}

FileSet ApplyAction(const FileSet &files, Side side, Action action, const ActionTarget &target,
                    const GenuinizeParams &params) {
  if (action == Action::kNone) return files;
  CheckTarget(action, target);
  FileSet out = files;
  for (AudioFile &f : out)
    if (Touches(side, f)) f.audio = ApplyToFile(f, action, target, params);
  return out;
}

struct Experiment::State {
  FileSet files;
  RunConfig config;
  std::uint64_t fingerprint = 0;

  std::unique_ptr<TargetQuantiles> attacker_corpus;
  std::unique_ptr<TargetQuantiles> cm_corpus;
  std::vector<std::size_t> attacker_pool;  // indices into files
  std::vector<std::size_t> cm_pool;

  mutable OnceCache<std::size_t, TargetQuantiles> reference_targets;
  mutable OnceCache<std::uint64_t, Waveform> transformed;
  mutable OnceCache<std::pair<std::string, std::uint64_t>, FeatureMatrix> features;
  mutable OnceCache<std::string, Gmm> models;
  mutable OnceCache<std::string, std::unique_ptr<FeatureExtractor>> extractors;

  ActionTarget Target(Side side) const {
    ActionTarget t;
    const bool attacker = side == Side::kAttacker;
    t.corpus = attacker ? attacker_corpus.get() : cm_corpus.get();
    const std::vector<std::size_t> &pool = attacker ? attacker_pool : cm_pool;
    t.pool_size = pool.size();
    t.pool = [this, &pool](std::size_t i) -> const TargetQuantiles & {
      const std::size_t file = pool[i];
      return reference_targets.Get(file, [&] {
        return TargetQuantiles(CdfFromPmf(EstimatePmf(files[file].audio)));
      });
    };
    return t;
  }
};

namespace {

FileSet LoadFiles(const DatasetManifest &manifest) {
  FileSet files;
  files.reserve(manifest.entries.size());
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto &e = manifest.entries[i];
    AudioFile f;
    f.id = e.path;
    f.label = e.label;
    f.subset = e.subset;
    f.ordinal = i;
    f.audio = ReadWav(e.path);
    files.push_back(std::move(f));
  }
  return files;
}

}  // namespace

Experiment::Experiment(const DatasetManifest &manifest, const RunConfig &config)
    : Experiment(LoadFiles(manifest), [&] {
        RunConfig c = config;
        c.attacker_pmf_source = manifest.attacker_pmf_source;
        c.cm_pmf_source = manifest.cm_pmf_source;
        return c;
      }()) {}

Experiment::Experiment(FileSet files, const RunConfig &config) : state_(std::make_unique<State>()) {
  State &s = *state_;
  s.files = std::move(files);
  s.config = config;
  DatasetManifest shape;
  for (const auto &f : s.files) shape.entries.push_back({f.id, f.label, f.subset});
  ValidateManifest(shape);

  auto build = [&](const PmfSource &src, std::vector<std::size_t> *pool) {
    std::vector<Waveform> chosen;
    for (std::size_t i = 0; i < s.files.size(); ++i) {
      if (s.files[i].subset == src.subset && s.files[i].label == src.label) {
        pool->push_back(i);
        chosen.push_back(s.files[i].audio);
      }
    }
    return std::make_unique<TargetQuantiles>(CdfFromPmf(EstimatePmf(chosen)));
  };
  s.attacker_corpus = build(s.config.attacker_pmf_source, &s.attacker_pool);
  s.cm_corpus = build(s.config.cm_pmf_source, &s.cm_pool);

  std::uint64_t h = detail::Fnv1a("genuin-experiment-v1");
  for (const auto &f : s.files) {
    h = Combine(h, HashSamples(f.audio));
    h = Combine(h, (static_cast<std::uint64_t>(f.label) << 8) | static_cast<std::uint64_t>(f.subset));
    h = Combine(h, detail::Fnv1a(f.id));
  }
  std::ostringstream cfg;
  cfg << s.config.lfcc.Fingerprint(0) << '|' << s.config.gmm.components << '|'
      << s.config.gmm.iterations << '|' << detail::FormatDouble(s.config.gmm.rel_tolerance) << '|'
      << detail::FormatDouble(s.config.gmm.variance_floor_scale) << '|'
      << s.config.attacker_pmf_source.ToString() << '|' << s.config.cm_pmf_source.ToString();
  s.fingerprint = Combine(h, detail::Fnv1a(cfg.str()));
}

Experiment::~Experiment() = default;

const FileSet &Experiment::files() const { return state_->files; }
const RunConfig &Experiment::config() const { return state_->config; }
std::uint64_t Experiment::DataFingerprint() const { return state_->fingerprint; }

FileSet Experiment::Select(Subset subset, TrialLabel label) const {
  FileSet out;
  for (const auto &f : state_->files)
    if (f.subset == subset && f.label == label) out.push_back(f);
  return out;
}

FileSet Experiment::Select(Subset subset) const {
  FileSet out;
  for (const auto &f : state_->files)
    if (f.subset == subset) out.push_back(f);
  return out;
}

FileSet Experiment::Transform(const FileSet &files, Side side, Action action,
                              const std::string &purpose, int extra_bits,
                              std::uint64_t seed) const {
  if (action == Action::kNone) return files;
  const ActionTarget target = state_->Target(side);
  CheckTarget(action, target);
  GenuinizeParams params;
  params.extra_bits = extra_bits;
  params.seed = DeriveSeed(seed, purpose);
  FileSet out = files;
  for (AudioFile &f : out) {
    if (!Touches(side, f)) continue;
    std::uint64_t key = HashSamples(f.audio);
    key = Combine(key, DeriveSeed(params.seed, f.ordinal));
    key = Combine(key, (static_cast<std::uint64_t>(side) << 16) |
                           (static_cast<std::uint64_t>(action) << 8) |
                           static_cast<std::uint64_t>(extra_bits));
    f.audio = state_->transformed.Get(key, [&] { return ApplyToFile(f, action, target, params); });
  }
  return out;
}

const FeatureMatrix &Experiment::Features(const std::string &feature, const Waveform &w) const {
  const auto &extractor = state_->extractors.Get(
      feature, [&] { return MakeExtractor(feature, state_->config.lfcc); });
  const std::pair<std::string, std::uint64_t> key{extractor->Fingerprint(w.sample_rate),
                                                  HashSamples(w)};
  return state_->features.Get(key, [&] { return extractor->Extract(w); });
}

TrainedModels Experiment::PrepareTraining(const ScenarioSpec &spec) const {
  if (!IsValidTrainCombo(spec.h_train, spec.s_train))
    throw Error(ErrorKind::kConfig, "train combination " + std::string(1, Code(spec.h_train)) +
                                        Code(spec.s_train) + " is not evaluated");
  auto model = [&](TrialLabel label, Provenance prov) {
    std::ostringstream key;
    key << spec.feature << '/' << LabelName(label) << '/' << Code(prov) << "/d" << spec.extra_bits
        << "/s" << spec.seed;
    return state_->models.Get(key.str(), [&] {
      FileSet train = Select(Subset::kTrain, label);
      if (train.empty())
        throw Error(ErrorKind::kInput, std::string("no ") + LabelName(label) + " training files");
      const Action action = prov == Provenance::kOriginal   ? Action::kNone
                            : prov == Provenance::kGenuinized ? Action::kGenuinize
                                                              : Action::kRandom;
      const std::string purpose =
          std::string("train-") + LabelName(label) + "-" + Code(action);
      train = Transform(train, Side::kCountermeasure, action, purpose, spec.extra_bits, spec.seed);
      std::vector<const FeatureMatrix *> feats;
      Eigen::Index rows = 0;
      for (const auto &f : train) {
        feats.push_back(&Features(spec.feature, f.audio));
        rows += feats.back()->num_frames();
      }
      Eigen::MatrixXd stacked(rows, feats.front()->dim());
      Eigen::Index at = 0;
      for (const FeatureMatrix *fm : feats) {
        stacked.middleRows(at, fm->num_frames()) = fm->frames;
        at += fm->num_frames();
      }
      GmmTrainOptions opts = state_->config.gmm;
      opts.seed = DeriveSeed(spec.seed, "gmm/" + key.str());
      Gmm g = TrainGmm(stacked, opts);
      g.provenance = std::string(1, Code(prov));
      g.fingerprint = feats.front()->fingerprint;
      return g;
    });
  };
  return {model(TrialLabel::kGenuine, spec.h_train), model(TrialLabel::kSpoof, spec.s_train)};
}

ScenarioResult Experiment::RunScenario(const ScenarioSpec &spec) const {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  result.spec = spec;
  try {
    const TrainedModels models = PrepareTraining(spec);
    FileSet test = Select(Subset::kTest);
    test = Transform(test, Side::kAttacker, spec.attacker,
                     std::string("attacker-") + Code(spec.attacker), spec.extra_bits, spec.seed);
    test = Transform(test, Side::kCountermeasure, spec.cm, std::string("cm-") + Code(spec.cm),
                     spec.extra_bits, spec.seed);
    for (const auto &f : test) {
      const double score = ScoreTrial(models.genuine, models.spoof, Features(spec.feature, f.audio));
      result.scores.trials.push_back({f.id, f.label, score});
      (f.label == TrialLabel::kGenuine ? result.genuine_trials : result.spoof_trials)++;
    }
    result.eer = ComputeEer(result.scores);
  } catch (const Error &e) {
    throw Error(e.kind(), "scenario " + spec.Key() + ": " + e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<ScenarioResult> RunMatrix(const Experiment &experiment,
                                      std::span<const std::string> features,
                                      const MatrixOptions &options) {
  const RunConfig &cfg = experiment.config();
  const std::vector<ScenarioSpec> specs = EnumerateScenarios(features, cfg.extra_bits, cfg.seed);
  if (!options.cache_dir.empty()) std::filesystem::create_directories(options.cache_dir);

  auto cache_path = [&](const ScenarioSpec &spec) {
    const std::uint64_t key = Combine(experiment.DataFingerprint(), detail::Fnv1a(spec.Key()));
    return options.cache_dir / ("scenario-" + detail::Hex64(key) + ".csv");
  };
  auto load_cached = [&](const ScenarioSpec &spec, ScenarioResult *out) {
    if (options.cache_dir.empty()) return false;
    std::ifstream in(cache_path(spec));
    std::string line;
    if (!in || !std::getline(in, line)) return false;
    const auto cols = detail::SplitCsv(line);
    if (cols.size() != 9 || cols[0] != spec.feature) return false;
    out->spec = spec;
    out->eer = detail::ParseDouble(cols[5], "cached result");
    out->genuine_trials = detail::ParseInt<std::size_t>(cols[6], "cached result");
    out->spoof_trials = detail::ParseInt<std::size_t>(cols[7], "cached result");
    out->seconds = detail::ParseDouble(cols[8], "cached result");
    return true;
  };

  std::vector<ScenarioResult> results(specs.size());
  std::vector<char> done(specs.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> computed{0};
  std::mutex log_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      if (load_cached(specs[i], &results[i])) {
        done[i] = 1;
        continue;
      }
      if (options.stop_after != 0 && computed.fetch_add(1) >= options.stop_after) continue;
      try {
        results[i] = experiment.RunScenario(specs[i]);
        if (!options.cache_dir.empty())
          detail::AtomicWrite(cache_path(specs[i]), ResultRow(results[i], true) + "\n");
      } catch (const std::exception &e) {
        results[i] = ScenarioResult{};
        results[i].spec = specs[i];
        results[i].error = e.what();
        std::lock_guard<std::mutex> lock(log_mu);
        std::cerr << "genuin: " << e.what() << '\n';
      }
      done[i] = 1;
    }
  };
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }

  std::vector<ScenarioResult> out;
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (done[i]) out.push_back(std::move(results[i]));
  std::stable_sort(out.begin(), out.end(), [](const ScenarioResult &a, const ScenarioResult &b) {
    const auto ka = std::make_tuple(a.spec.feature, ComboRank(a.spec.h_train, a.spec.s_train),
                                    static_cast<int>(a.spec.attacker), static_cast<int>(a.spec.cm));
    const auto kb = std::make_tuple(b.spec.feature, ComboRank(b.spec.h_train, b.spec.s_train),
                                    static_cast<int>(b.spec.attacker), static_cast<int>(b.spec.cm));
    return ka < kb;
  });
  if (!options.record_timing)
    for (auto &r : out) r.seconds = 0.0;
  return out;
}

std::string ResultsCsv(std::span<const ScenarioResult> results) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const auto &r : results) out += ResultRow(r, true) + "\n";
  return out;
}

void WriteResultsCsv(const std::filesystem::path &path, std::span<const ScenarioResult> results) {
  detail::AtomicWrite(path, ResultsCsv(results));
}

}  // namespace genuin
