// genuin/vad.hpp

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

#ifndef GENUIN_VAD_HPP_
#define GENUIN_VAD_HPP_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "genuin/waveform.hpp"

namespace genuin {

struct VadConfig {
  double alpha = 0.03;
  std::size_t frame_len = 320;
  std::size_t frame_hop = 160;

  // 20 ms frames with a 10 ms hop at the given rate.
  static VadConfig ForRate(int sample_rate, double alpha = 0.03);
};

void ValidateVadConfig(const VadConfig &cfg);

// Per-sample speech flags, aligned with the waveform it was computed from.
struct VadMask {
  std::vector<bool> speech;

  std::size_t size() const { return speech.size(); }
  double SpeechFraction() const;
};

// Relative-energy detector. Frame energy is the mean square of the
// mean-removed float amplitudes; a frame is speech iff its energy reaches
// alpha times the loudest frame of the file. A sample is speech if any frame
// covering it is speech; samples past the last full frame copy its label.
VadMask EnergyVad(const Waveform &w, const VadConfig &cfg);

// Run-length text form: one `start_sample,end_sample,label` line per run,
// end exclusive, label `speech` or `nonspeech`.
void WriteVadRuns(std::ostream &os, const VadMask &mask);

}  // namespace genuin

#endif  // GENUIN_VAD_HPP_
