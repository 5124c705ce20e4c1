// genuin/cli.cpp

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

#include "genuin/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "genuin/eer.hpp"
#include "genuin/error.hpp"
#include "genuin/experiment.hpp"
#include "genuin/features.hpp"
#include "genuin/genuinize.hpp"
#include "genuin/gmm.hpp"
#include "genuin/pmf.hpp"
#include "genuin/rng.hpp"
#include "genuin/toy_corpus.hpp"
#include "genuin/vad.hpp"
#include "io_util.hpp"

namespace genuin::cli {

namespace {

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

SampleSelection ParseSelection(const std::string &s) {
  if (s == "all") return SampleSelection::kAll;
  if (s == "speech") return SampleSelection::kSpeech;
  if (s == "nonspeech") return SampleSelection::kNonSpeech;
  throw Error(ErrorKind::kUsage, "unknown sample selection '" + s + "'");
}

FeatureMatrix LoadOrExtract(const std::string &path, const FeatureExtractor &extractor) {
  if (std::filesystem::path(path).extension() == ".wav") return extractor.Extract(ReadWav(path));
  return ReadFeatures(path);
}

std::filesystem::path MirrorPath(const std::filesystem::path &out_dir,
                                 const std::filesystem::path &manifest_dir,
                                 const std::filesystem::path &input, const std::string &suffix) {
  std::filesystem::path rel = input.lexically_relative(manifest_dir);
  if (rel.empty() || *rel.begin() == "..") rel = input.filename();
  rel.replace_extension();
  return out_dir / (rel.string() + suffix);
}

int Run(const EstimatePmfCmd &c, std::ostream &out) {
  const SampleSelection keep = ParseSelection(c.select);
  std::vector<Waveform> waves;
  std::vector<VadMask> masks;
  for (const auto &p : c.inputs) {
    waves.push_back(ReadWav(p));
    if (keep != SampleSelection::kAll)
      masks.push_back(EnergyVad(waves.back(), VadConfig::ForRate(waves.back().sample_rate, c.alpha)));
  }
  const Pmf p = EstimatePmf(waves, masks, keep);
  SavePmf(c.out, p);
  out << "samples=" << p.total_count << '\n';
  return 0;
}

int Run(const GenuinizeCmd &c, std::ostream &out) {
  const GenuinizeMode mode = ParseMode(c.mode);
  GenuinizeParams params;
  params.mode = mode;
  params.extra_bits = c.d_bits;
  params.seed = c.seed;
  const bool batch = !c.manifest.empty();
  if (batch == !c.input.empty())
    throw Error(ErrorKind::kUsage, "give either INPUT OUTPUT or --manifest with --out-dir");
  if (mode != GenuinizeMode::kRandom && c.target.empty())
    throw Error(ErrorKind::kUsage, "--target is required for mode " + c.mode);

  std::unique_ptr<TargetQuantiles> target;
  if (!c.target.empty()) target = std::make_unique<TargetQuantiles>(CdfFromPmf(LoadPmf(c.target)));

  if (!batch) {
    if (c.output.empty()) throw Error(ErrorKind::kUsage, "missing OUTPUT path");
    const Waveform in = ReadWav(c.input);
    Waveform result;
    if (mode == GenuinizeMode::kBasic) {
      result = GenuinizeBasic(in, *target);
    } else if (mode == GenuinizeMode::kPerturbed) {
      result = GenuinizePerturbed(in, *target, params);
    } else {
      std::vector<Waveform> pool;
      for (const auto &p : c.pool) pool.push_back(ReadWav(p));
      result = GenuinizeRandom(in, pool, params);
    }
    WriteWav(c.output, result);
    return 0;
  }

  if (c.out_dir.empty()) throw Error(ErrorKind::kUsage, "--out-dir is required with --manifest");
  const DatasetManifest manifest = ReadManifestCsv(c.manifest);
  const auto manifest_dir = std::filesystem::path(c.manifest).parent_path().lexically_normal();
  std::vector<TargetQuantiles> pool;
  if (mode == GenuinizeMode::kRandom) {
    const PmfSource src = PmfSource::Parse(c.pool_source);
    for (const auto &e : manifest.entries)
      if (e.subset == src.subset && e.label == src.label)
        pool.emplace_back(CdfFromPmf(EstimatePmf(ReadWav(e.path))));
    if (pool.empty()) throw Error(ErrorKind::kConfig, "reference pool " + c.pool_source + " is empty");
  }
  const std::string suffix = mode == GenuinizeMode::kRandom ? ".rgen.wav" : ".gen.wav";
  std::size_t written = 0;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto &e = manifest.entries[i];
    if (c.only != "all" && ParseLabel(c.only) != e.label) continue;
    const Waveform in = ReadWav(e.path);
    GenuinizeParams p = params;
    p.seed = DeriveSeed(c.seed, i);
    Waveform result;
    if (mode == GenuinizeMode::kBasic)
      result = GenuinizeBasic(in, *target);
    else if (mode == GenuinizeMode::kPerturbed)
      result = GenuinizePerturbed(in, *target, p);
    else
      result = GenuinizePerturbed(in, pool[SelectReference(pool.size(), p.seed)], p);
    const auto dest = MirrorPath(c.out_dir, manifest_dir, e.path, suffix);
    std::filesystem::create_directories(dest.parent_path());
    WriteWav(dest, result);
    ++written;
  }
  out << "files=" << written << '\n';
  return 0;
}

int Run(const VadCmd &c, std::ostream &out) {
  const Waveform w = ReadWav(c.input);
  VadConfig cfg;
  cfg.alpha = c.alpha;
  cfg.frame_len = static_cast<std::size_t>(std::lround(c.frame_ms * 1e-3 * w.sample_rate));
  cfg.frame_hop = static_cast<std::size_t>(std::lround(c.hop_ms * 1e-3 * w.sample_rate));
  const VadMask mask = EnergyVad(w, cfg);
  if (c.out.empty()) {
    WriteVadRuns(out, mask);
  } else {
    std::ostringstream os;
    WriteVadRuns(os, mask);
    detail::AtomicWrite(c.out, os.str());
  }
  return 0;
}

int Run(const ExtractFeaturesCmd &c, std::ostream &out) {
  const auto extractor = MakeExtractor(c.feature);
  const FeatureMatrix m = extractor->Extract(ReadWav(c.input));
  WriteFeatures(c.output, m);
  out << "frames=" << m.num_frames() << " dim=" << m.dim() << '\n';
  return 0;
}

int Run(const TrainGmmCmd &c, std::ostream &out) {
  ParseProvenance(c.tag.size() == 1 ? c.tag[0] : '?');
  const auto extractor = MakeExtractor(c.feature);
  std::vector<FeatureMatrix> feats;
  Eigen::Index rows = 0;
  for (const auto &p : c.inputs) {
    feats.push_back(LoadOrExtract(p, *extractor));
    if (feats.back().dim() != feats.front().dim())
      throw Error(ErrorKind::kInput, p + ": feature width differs from " + c.inputs.front());
    rows += feats.back().num_frames();
  }
  Eigen::MatrixXd stacked(rows, feats.front().dim());
  Eigen::Index at = 0;
  for (const auto &f : feats) {
    stacked.middleRows(at, f.num_frames()) = f.frames;
    at += f.num_frames();
  }
  GmmTrainOptions opts;
  opts.components = c.components;
  opts.iterations = c.iterations;
  opts.seed = c.seed;
  GmmTrainTrace trace;
  Gmm m = TrainGmm(stacked, opts, &trace);
  m.provenance = c.tag;
  m.fingerprint = feats.front().fingerprint;
  WriteGmm(c.out, m);
  out << "frames=" << rows << " loglik=" << detail::FormatDouble(trace.loglik.back() / rows) << '\n';
  return 0;
}

int Run(const ScoreCmd &c, std::ostream &out) {
  const Gmm genuine = ReadGmm(c.genuine_model);
  const Gmm spoof = ReadGmm(c.spoof_model);
  const auto extractor = MakeExtractor(c.feature);
  const DatasetManifest manifest = ReadManifestCsv(c.manifest);
  const Subset subset = ParseSubset(c.subset);
  ScoreSet set;
  for (const auto &e : manifest.entries) {
    if (e.subset != subset) continue;
    const FeatureMatrix f = extractor->Extract(ReadWav(e.path));
    set.trials.push_back({e.path, e.label, ScoreTrial(genuine, spoof, f)});
  }
  WriteScores(c.out, set);
  out << "trials=" << set.trials.size() << '\n';
  return 0;
}

int Run(const EerCmd &c, std::ostream &out) {
  out << "EER=" << detail::FormatDouble(ComputeEer(ReadScores(c.scores))) << '\n';
  return 0;
}

int Run(const RunMatrixCmd &c, std::ostream &out) {
  RunConfig cfg = LoadRunConfig(c.config);
  cfg.seed = c.seed;
  if (c.cache_dir) cfg.cache_dir = *c.cache_dir;
  if (c.workers) cfg.workers = *c.workers;
  cfg.record_timing = cfg.record_timing || c.timing;
  DatasetManifest manifest = ReadManifestCsv(cfg.manifest);
  manifest.attacker_pmf_source = cfg.attacker_pmf_source;
  manifest.cm_pmf_source = cfg.cm_pmf_source;
  ValidateManifest(manifest);
  const Experiment experiment(manifest, cfg);
  MatrixOptions opts;
  opts.cache_dir = cfg.cache_dir;
  opts.workers = cfg.workers;
  opts.record_timing = cfg.record_timing;
  opts.stop_after = c.stop_after;
  const auto results = RunMatrix(experiment, cfg.features, opts);
  WriteResultsCsv(c.out, results);
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const ScenarioResult &r) { return !r.error.empty(); });
  out << "scenarios=" << results.size() << " failed=" << failed << '\n';
  return failed == 0 ? 0 : 1;
}

int Run(const PmfDistanceCmd &c, std::ostream &out) {
  out << "TV=" << detail::FormatDouble(TvDistance(LoadPmf(c.a), LoadPmf(c.b))) << '\n';
  return 0;
}

int Run(const MakeToyCorpusCmd &c, std::ostream &out) {
  ToyCorpusOptions opts;
  opts.files_per_group = c.files_per_group;
  opts.seed = c.seed;
  opts.seconds = c.seconds;
  WriteToyCorpus(c.out_dir, opts);
  out << "files=" << 4 * opts.files_per_group << '\n';
  return 0;
}

int Run(const HelpCmd &c, std::ostream &out) {
  out << c.text;
  return 0;
}

}  // namespace

Command ParseArgs(const std::vector<std::string> &args) {
  CLI::App app{"Waveform PMF genuinization and GMM countermeasure toolkit", "genuin"};
  app.require_subcommand(1);

  EstimatePmfCmd estimate;
  auto *sc_estimate = app.add_subcommand("estimate-pmf", "Estimate an amplitude PMF from WAV files");
  sc_estimate->add_option("--out", estimate.out, "Output PMF (.csv or binary)")->required();
  sc_estimate->add_option("--select", estimate.select, "Samples kept: all, speech, nonspeech")
      ->check(CLI::IsMember({"all", "speech", "nonspeech"}));
  sc_estimate->add_option("--alpha", estimate.alpha, "VAD relative threshold")
      ->check(CLI::Range(0.0, 1.0));
  sc_estimate->add_option("inputs", estimate.inputs, "Input WAV files")->required();

  GenuinizeCmd gen;
  auto *sc_gen = app.add_subcommand("genuinize", "Match a waveform's amplitude PMF to a target");
  sc_gen->add_option("--mode", gen.mode, "basic, perturbed or random")
      ->check(CLI::IsMember({"basic", "perturbed", "random"}));
  sc_gen->add_option("--d-bits", gen.d_bits, "Extra quantizer bits")->check(CLI::Range(0, 20));
  sc_gen->add_option("--seed", gen.seed, "Random seed");
  sc_gen->add_option("--target", gen.target, "Target PMF file");
  sc_gen->add_option("--pool", gen.pool, "Reference WAVs for random mode");
  sc_gen->add_option("--manifest", gen.manifest, "Batch mode: manifest CSV");
  sc_gen->add_option("--out-dir", gen.out_dir, "Batch mode: mirror output folder");
  sc_gen->add_option("--only", gen.only, "Batch mode: all, genuine or spoof")
      ->check(CLI::IsMember({"all", "genuine", "spoof"}));
  sc_gen->add_option("--pool-source", gen.pool_source, "Batch random mode: subset:label");
  sc_gen->add_option("input", gen.input, "Input WAV");
  sc_gen->add_option("output", gen.output, "Output WAV");

  VadCmd vad;
  auto *sc_vad = app.add_subcommand("vad", "Energy VAD, printed as run-length lines");
  sc_vad->add_option("--alpha", vad.alpha, "Relative energy threshold")
      ->check(CLI::Range(0.0, 1.0));
  sc_vad->add_option("--frame-ms", vad.frame_ms, "Frame length in ms")->check(CLI::PositiveNumber);
  sc_vad->add_option("--hop-ms", vad.hop_ms, "Frame hop in ms")->check(CLI::PositiveNumber);
  sc_vad->add_option("--out", vad.out, "Write runs here instead of stdout");
  sc_vad->add_option("input", vad.input, "Input WAV")->required();

  ExtractFeaturesCmd extract;
  auto *sc_extract = app.add_subcommand("extract-features", "Write a feature cache file");
  sc_extract->add_option("--feature", extract.feature, "Extractor id");
  sc_extract->add_option("input", extract.input, "Input WAV")->required();
  sc_extract->add_option("output", extract.output, "Output feature file")->required();

  TrainGmmCmd train;
  auto *sc_train = app.add_subcommand("train-gmm", "Train a diagonal GMM with EM");
  sc_train->add_option("--out", train.out, "Output model file")->required();
  sc_train->add_option("--feature", train.feature, "Extractor for WAV inputs");
  sc_train->add_option("--tag", train.tag, "Provenance tag O, G or R")
      ->check(CLI::IsMember({"O", "G", "R"}));
  sc_train->add_option("--components", train.components, "Mixture size")
      ->check(CLI::PositiveNumber);
  sc_train->add_option("--iterations", train.iterations, "EM iterations")
      ->check(CLI::PositiveNumber);
  sc_train->add_option("--seed", train.seed, "Initialization seed");
  sc_train->add_option("inputs", train.inputs, "Feature files or WAVs")->required();

  ScoreCmd score;
  auto *sc_score = app.add_subcommand("score", "Score manifest files with two GMMs");
  sc_score->add_option("--genuine", score.genuine_model, "Genuine model")->required();
  sc_score->add_option("--spoof", score.spoof_model, "Spoof model")->required();
  sc_score->add_option("--manifest", score.manifest, "Manifest CSV")->required();
  sc_score->add_option("--subset", score.subset, "train or test")
      ->check(CLI::IsMember({"train", "test"}));
  sc_score->add_option("--feature", score.feature, "Extractor id");
  sc_score->add_option("--out", score.out, "Score CSV")->required();

  EerCmd eer;
  auto *sc_eer = app.add_subcommand("eer", "Equal error rate of a score CSV");
  sc_eer->add_option("scores", eer.scores, "Score CSV")->required();

  RunMatrixCmd matrix;
  auto *sc_matrix = app.add_subcommand("run-matrix", "Run every attacker/countermeasure scenario");
  sc_matrix->add_option("--config", matrix.config, "Run config (JSON)")->required();
  sc_matrix->add_option("--out", matrix.out, "Results CSV")->required();
  sc_matrix->add_option("--seed", matrix.seed, "Run-level seed")->required();
  sc_matrix->add_option("--cache-dir", matrix.cache_dir, "Per-scenario result cache");
  sc_matrix->add_option("--workers", matrix.workers, "Concurrent scenarios")
      ->check(CLI::PositiveNumber);
  sc_matrix->add_flag("--timing", matrix.timing, "Fill the seconds column");
  sc_matrix->add_option("--stop-after", matrix.stop_after,
                        "Stop after computing this many uncached scenarios");

  PmfDistanceCmd dist;
  auto *sc_dist = app.add_subcommand("pmf-distance", "Total-variation distance of two PMFs");
  sc_dist->add_option("a", dist.a, "First PMF")->required();
  sc_dist->add_option("b", dist.b, "Second PMF")->required();

  MakeToyCorpusCmd toy;
  auto *sc_toy = app.add_subcommand("make-toy-corpus", "Write the synthetic demo corpus");
  sc_toy->add_option("--out-dir", toy.out_dir, "Destination folder")->required();
  sc_toy->add_option("--files-per-group", toy.files_per_group, "Files per subset and label")
      ->check(CLI::PositiveNumber);
  sc_toy->add_option("--seed", toy.seed, "Generator seed");
  sc_toy->add_option("--seconds", toy.seconds, "File duration")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    return HelpCmd{app.help()};
  } catch (const CLI::ParseError &e) {
    throw Error(ErrorKind::kUsage, OneLine(e.what()));
  }

  if (sc_estimate->parsed()) return estimate;
  if (sc_gen->parsed()) return gen;
  if (sc_vad->parsed()) return vad;
  if (sc_extract->parsed()) return extract;
  if (sc_train->parsed()) return train;
  if (sc_score->parsed()) return score;
  if (sc_eer->parsed()) return eer;
  if (sc_matrix->parsed()) return matrix;
  if (sc_dist->parsed()) return dist;
  if (sc_toy->parsed()) return toy;
  throw Error(ErrorKind::kUsage, "no subcommand given");
}

int Execute(const Command &cmd, std::ostream &out, std::ostream &err) {
  try {
    return std::visit([&](const auto &c) { return Run(c, out); }, cmd);
  } catch (const Error &e) {
    err << "error=" << ErrorKindName(e.kind()) << " message=" << OneLine(e.what()) << '\n';
    return ExitCode(e.kind());
  } catch (const std::filesystem::filesystem_error &e) {
    err << "error=io message=" << OneLine(e.what()) << '\n';
    return ExitCode(ErrorKind::kIo);
  } catch (const std::exception &e) {
    err << "error=internal message=" << OneLine(e.what()) << '\n';
    return 1;
  }
}

int Main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Command cmd;
  try {
    cmd = ParseArgs(args);
  } catch (const Error &e) {
    err << "error=" << ErrorKindName(e.kind()) << " message=" << OneLine(e.what()) << '\n';
    return ExitCode(e.kind());
  }
  return Execute(cmd, out, err);
}

}  // namespace genuin::cli
