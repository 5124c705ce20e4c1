// genuin/toy_corpus.cpp

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

#include "genuin/toy_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

#include "genuin/rng.hpp"
#include "io_util.hpp"

namespace genuin {

namespace {

double Gaussian(Rng &rng) {
  // Box-Muller on our own uniform draws keeps the stream portable.
  const double u1 = 1.0 - UniformUnit(rng);
  const double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Laplacian(Rng &rng) {
  const double u = UniformUnit(rng) - 0.5;
  return (u < 0 ? 1.0 : -1.0) * std::log(1.0 - 2.0 * std::abs(u));
}

}  // namespace

Waveform MakeToyWaveform(TrialLabel label, std::uint64_t seed, const ToyCorpusOptions &opts) {
  Rng rng(seed);
  const bool genuine = label == TrialLabel::kGenuine;
  const std::size_t n = static_cast<std::size_t>(std::lround(opts.seconds * opts.sample_rate));
  const double fs = opts.sample_rate;

  const double centre = genuine ? 900.0 + 300.0 * UniformUnit(rng) : 1500.0 + 300.0 * UniformUnit(rng);
  const double radius = 0.97;
  const double a1 = 2.0 * radius * std::cos(2.0 * std::numbers::pi * centre / fs);
  const double a2 = -radius * radius;

  // Alternating bursts and gaps of 60..140 ms.
  std::vector<bool> active(n, false);
  bool on = UniformUnit(rng) < 0.5;
  for (std::size_t pos = 0; pos < n;) {
    const std::size_t len = static_cast<std::size_t>((0.06 + 0.08 * UniformUnit(rng)) * fs);
    std::fill(active.begin() + static_cast<std::ptrdiff_t>(pos),
              active.begin() + static_cast<std::ptrdiff_t>(std::min(n, pos + len)), on);
    pos += len;
    on = !on;
  }

  const double gain = 0.02 + 0.02 * UniformUnit(rng);
  std::vector<double> y(n, 0.0);
  double y1 = 0.0, y2 = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double excitation = active[t] ? Laplacian(rng) : 0.0;
    const double v = gain * excitation + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = v;
    y[t] = v;
  }

  Waveform w;
  w.sample_rate = opts.sample_rate;
  w.samples.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    double s = y[t];
    if (genuine) {
      s += 0.0015 * Gaussian(rng);
    } else {
      s = 0.35 * std::tanh(s / 0.35);
      // Requantize to 12 bits; gaps become exact digital silence.
      s = std::round(s * 2048.0) / 2048.0;
      if (!active[t] && std::abs(s) < 0.004) s = 0.0;
    }
    s = std::clamp(s, -1.0 + 0x1.0p-15, 1.0);
    w.samples[t] = AmpToIndex(s);
  }
  return w;
}

FileSet MakeToyFileSet(const ToyCorpusOptions &opts) {
  FileSet files;
  std::uint64_t ordinal = 0;
  for (Subset subset : {Subset::kTrain, Subset::kTest}) {
    for (TrialLabel label : {TrialLabel::kGenuine, TrialLabel::kSpoof}) {
      for (int i = 0; i < opts.files_per_group; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "%s/%s_%03d.wav", SubsetName(subset), LabelName(label), i);
        AudioFile f;
        f.id = name;
        f.label = label;
        f.subset = subset;
        f.ordinal = ordinal;
        f.audio = MakeToyWaveform(label, DeriveSeed(opts.seed, ordinal), opts);
        f.audio.source_path = name;
        files.push_back(std::move(f));
        ++ordinal;
      }
    }
  }
  return files;
}

void WriteToyCorpus(const std::filesystem::path &dir, const ToyCorpusOptions &opts) {
  std::filesystem::create_directories(dir / "train");
  std::filesystem::create_directories(dir / "test");
  DatasetManifest manifest;
  for (const AudioFile &f : MakeToyFileSet(opts)) {
    WriteWav(dir / f.id, f.audio);
    manifest.entries.push_back({f.id, f.label, f.subset});
  }
  WriteManifestCsv(dir / "manifest.csv", manifest);

  nlohmann::json cfg = {
      {"manifest", "manifest.csv"},
      {"features", {"lfcc"}},
      {"gmm_components", 8},
      {"gmm_iterations", 10},
      {"d_bits", 5},
      {"seed", opts.seed},
      {"workers", 1},
      {"attacker_pmf_source", "test:genuine"},
      {"cm_pmf_source", "train:genuine"},
  };
  detail::AtomicWrite(dir / "config.json", cfg.dump(2) + "\n");
}

}  // namespace genuin
