// genuin/toy_corpus.hpp

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

#ifndef GENUIN_TOY_CORPUS_HPP_
#define GENUIN_TOY_CORPUS_HPP_

#include <cstdint>
#include <filesystem>

#include "genuin/experiment.hpp"
#include "genuin/waveform.hpp"

namespace genuin {

// Synthetic two-class corpus for smoke tests and the bundled demo.
//
// Genuine files: resonant noise bursts separated by a low-level noise floor.
// Spoof files: a resonance at a different frequency, soft-clipped and
// requantized to a coarser grid, with digitally silent gaps. The silent gaps
// put a large spike at amplitude zero in the spoof PMF.
struct ToyCorpusOptions {
  int files_per_group = 50;  // per (subset, label) group
  int sample_rate = 16000;
  double seconds = 0.5;
  std::uint64_t seed = 2024;
};

Waveform MakeToyWaveform(TrialLabel label, std::uint64_t seed, const ToyCorpusOptions &opts);

FileSet MakeToyFileSet(const ToyCorpusOptions &opts);

// Writes <dir>/{train,test}/{genuine,spoof}_NNN.wav, <dir>/manifest.csv and a
// <dir>/config.json suited to desk-scale runs (K = 8 components).
void WriteToyCorpus(const std::filesystem::path &dir, const ToyCorpusOptions &opts);

}  // namespace genuin

#endif  // GENUIN_TOY_CORPUS_HPP_
