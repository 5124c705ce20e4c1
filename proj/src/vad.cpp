// genuin/vad.cpp

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

#include "genuin/vad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "genuin/error.hpp"

namespace genuin {

VadConfig VadConfig::ForRate(int sample_rate, double alpha) {
  if (sample_rate <= 0) throw Error(ErrorKind::kInput, "sample rate must be positive");
  VadConfig cfg;
  cfg.alpha = alpha;
  cfg.frame_len = static_cast<std::size_t>(std::lround(0.020 * sample_rate));
  cfg.frame_hop = static_cast<std::size_t>(std::lround(0.010 * sample_rate));
  cfg.frame_len = std::max<std::size_t>(cfg.frame_len, 1);
  cfg.frame_hop = std::clamp<std::size_t>(cfg.frame_hop, 1, cfg.frame_len);
  return cfg;
}

void ValidateVadConfig(const VadConfig &cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw Error(ErrorKind::kRange, "VAD alpha must lie in (0, 1)");
  if (cfg.frame_hop < 1 || cfg.frame_len < cfg.frame_hop)
    throw Error(ErrorKind::kRange, "VAD needs frame_len >= frame_hop >= 1");
}

double VadMask::SpeechFraction() const {
  if (speech.empty()) return 0.0;
  return static_cast<double>(std::count(speech.begin(), speech.end(), true)) /
         static_cast<double>(speech.size());
}

VadMask EnergyVad(const Waveform &w, const VadConfig &cfg) {
  ValidateVadConfig(cfg);
  ValidateWaveform(w);
  if (w.size() < cfg.frame_len)
    throw Error(ErrorKind::kInput, "waveform of " + std::to_string(w.size()) +
                                       " samples is shorter than one VAD frame (" +
                                       std::to_string(cfg.frame_len) + ")");
  std::vector<double> x = Amplitudes(w);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (double &v : x) v -= mean;

  const std::size_t num_frames = 1 + (x.size() - cfg.frame_len) / cfg.frame_hop;
  std::vector<double> energy(num_frames);
  for (std::size_t f = 0; f < num_frames; ++f) {
    const auto begin = x.begin() + static_cast<std::ptrdiff_t>(f * cfg.frame_hop);
    energy[f] = std::inner_product(begin, begin + static_cast<std::ptrdiff_t>(cfg.frame_len),
                                   begin, 0.0) /
                static_cast<double>(cfg.frame_len);
  }
  const double threshold = cfg.alpha * *std::max_element(energy.begin(), energy.end());

  VadMask mask;
  mask.speech.assign(x.size(), false);
  for (std::size_t f = 0; f < num_frames; ++f) {
    if (energy[f] < threshold) continue;
    const std::size_t start = f * cfg.frame_hop;
    std::fill_n(mask.speech.begin() + static_cast<std::ptrdiff_t>(start), cfg.frame_len, true);
  }
  const std::size_t covered = (num_frames - 1) * cfg.frame_hop + cfg.frame_len;
  const bool last = energy.back() >= threshold;
  std::fill(mask.speech.begin() + static_cast<std::ptrdiff_t>(covered), mask.speech.end(), last);
  return mask;
}

void WriteVadRuns(std::ostream &os, const VadMask &mask) {
  std::size_t start = 0;
  for (std::size_t n = 1; n <= mask.size(); ++n) {
    if (n == mask.size() || mask.speech[n] != mask.speech[start]) {
      os << start << ',' << n << ',' << (mask.speech[start] ? "speech" : "nonspeech") << '\n';
      start = n;
    }
  }
}

}  // namespace genuin
