// genuin/eer.hpp

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

#ifndef GENUIN_EER_HPP_
#define GENUIN_EER_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace genuin {

enum class TrialLabel { kGenuine, kSpoof };

const char *LabelName(TrialLabel label);
// Accepts "genuine" (or "bonafide") and "spoof".
TrialLabel ParseLabel(const std::string &name);

struct Trial {
  std::string id;
  TrialLabel label = TrialLabel::kGenuine;
  double score = 0.0;
};

struct ScoreSet {
  std::vector<Trial> trials;
};

/**
   Equal error rate in percent.

   At threshold t a genuine trial is rejected when its score is below t and a
   spoof trial is accepted when its score is at or above t. Operating points
   are taken at every distinct score and at +inf; the EER is read where the
   false-rejection curve first meets or crosses the false-acceptance curve,
   interpolating linearly between the two operating points around the
   crossing. All-equal scores give 50, perfectly separated scores give 0.
   Only the ordering of scores matters.
*/
double ComputeEer(std::span<const double> genuine, std::span<const double> spoof);
double ComputeEer(const ScoreSet &scores);

// CSV `file_id,label,score`.
void WriteScores(const std::filesystem::path &path, const ScoreSet &scores);
ScoreSet ReadScores(const std::filesystem::path &path);

}  // namespace genuin

#endif  // GENUIN_EER_HPP_
