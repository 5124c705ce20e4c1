// genuin/waveform.hpp

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

#ifndef GENUIN_WAVEFORM_HPP_
#define GENUIN_WAVEFORM_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace genuin {

// 1-based quantization index, k in {1..2^D}.
using AmplitudeIndex = std::uint32_t;

inline constexpr int kStorageBits = 16;
inline constexpr int kMaxBits = 24;

// Mono signal stored as amplitude indices. The float amplitude of index k on
// a D-bit grid is -1 + k * 2^-(D-1); the grid runs from -1 + 2^-(D-1) to 1.0.
// `bits` is 16 for anything read from or written to disk; smaller grids are
// used by the exhaustive tests.
struct Waveform {
  std::vector<AmplitudeIndex> samples;
  int sample_rate = 16000;
  std::optional<std::string> source_path;
  int bits = kStorageBits;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::uint32_t levels() const { return std::uint32_t{1} << bits; }
};

// Throws Error(kInput) if the waveform is empty, has a non-positive rate, or
// holds an index outside 1..2^bits.
void ValidateWaveform(const Waveform &w);

// k = ceil((s + 1) * 2^(D-1)), clamped to [1, 2^D]. Requires -1 < s <= 1.
AmplitudeIndex AmpToIndex(double s, int bits = kStorageBits);

// s = -1 + k * 2^-(D-1). Requires 1 <= k <= 2^D.
double IndexToAmp(AmplitudeIndex k, int bits = kStorageBits);

// Float amplitudes of every sample, on the waveform's own grid.
std::vector<double> Amplitudes(const Waveform &w);

// PCM16 code c <-> index k = c + 32769. Index 65536 is stored as +32767.
AmplitudeIndex PcmToIndex(std::int16_t code);
std::int16_t IndexToPcm(AmplitudeIndex k);

// RIFF/WAVE, PCM, 16-bit, mono only. Other layouts raise Error(kFormat)
// naming the offending property; a short file raises Error(kIo).
Waveform ReadWav(const std::filesystem::path &path);
void WriteWav(const std::filesystem::path &path, const Waveform &w);

}  // namespace genuin

#endif  // GENUIN_WAVEFORM_HPP_
