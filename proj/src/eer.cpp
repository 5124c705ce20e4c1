// genuin/eer.cpp

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

#include "genuin/eer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "genuin/error.hpp"
#include "io_util.hpp"

namespace genuin {

const char *LabelName(TrialLabel label) {
  return label == TrialLabel::kGenuine ? "genuine" : "spoof";
}

TrialLabel ParseLabel(const std::string &name) {
  if (name == "genuine" || name == "bonafide") return TrialLabel::kGenuine;
  if (name == "spoof") return TrialLabel::kSpoof;
  throw Error(ErrorKind::kFormat, "unknown label '" + name + "'");
}

double ComputeEer(std::span<const double> genuine, std::span<const double> spoof) {
  if (genuine.empty() || spoof.empty())
    throw Error(ErrorKind::kInput, "EER needs at least one genuine and one spoof trial");
  std::vector<double> g(genuine.begin(), genuine.end());
  std::vector<double> s(spoof.begin(), spoof.end());
  for (double v : g)
    if (!std::isfinite(v)) throw Error(ErrorKind::kInput, "non-finite score");
  for (double v : s)
    if (!std::isfinite(v)) throw Error(ErrorKind::kInput, "non-finite score");
  std::sort(g.begin(), g.end());
  std::sort(s.begin(), s.end());
  const double ng = static_cast<double>(g.size());
  const double ns = static_cast<double>(s.size());

  // Sweep thresholds upward. `rejected` counts genuine below t, `accepted`
  // counts spoof at or above t.
  std::size_t gi = 0, si = 0;
  double prev_frr = 0.0, prev_far = 1.0;
  while (true) {
    const bool at_infinity = gi == g.size() && si == s.size();
    const double t = at_infinity ? 0.0
                     : gi == g.size() ? s[si]
                     : si == s.size() ? g[gi]
                                      : std::min(g[gi], s[si]);
    // gi and si already count the scores below t.
    std::size_t rejected = gi, accepted_below = si;
    if (at_infinity) {
      rejected = g.size();
      accepted_below = s.size();
    }
    const double frr = static_cast<double>(rejected) / ng;
    const double far = static_cast<double>(s.size() - accepted_below) / ns;
    // Compare in integers so exact equality is not lost to rounding.
    const auto lhs = static_cast<unsigned long long>(rejected) * s.size();
    const auto rhs = static_cast<unsigned long long>(s.size() - accepted_below) * g.size();
    if (lhs == rhs) return 100.0 * frr;
    if (lhs > rhs) {
      const double d_prev = prev_frr - prev_far;
      const double d_here = frr - far;
      const double lambda = -d_prev / (d_here - d_prev);
      return 100.0 * (prev_frr + lambda * (frr - prev_frr));
    }
    prev_frr = frr;
    prev_far = far;
    if (at_infinity) break;
    while (gi < g.size() && g[gi] == t) ++gi;
    while (si < s.size() && s[si] == t) ++si;
  }
  return 50.0;  // not reached: at +inf frr = 1 > far = 0
}

double ComputeEer(const ScoreSet &scores) {
  std::vector<double> g, s;
  for (const Trial &t : scores.trials)
    (t.label == TrialLabel::kGenuine ? g : s).push_back(t.score);
  return ComputeEer(g, s);
}

void WriteScores(const std::filesystem::path &path, const ScoreSet &scores) {
  std::ostringstream os;
  os << "file_id,label,score\n";
  for (const Trial &t : scores.trials) {
    if (t.id.find_first_of(",\n") != std::string::npos)
      throw Error(ErrorKind::kFormat, "file id '" + t.id + "' contains a comma or newline");
    os << t.id << ',' << LabelName(t.label) << ',' << detail::FormatDouble(t.score) << '\n';
  }
  detail::AtomicWrite(path, os.str());
}

ScoreSet ReadScores(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || detail::StripCr(line) != "file_id,label,score")
    throw Error(ErrorKind::kFormat, path.string() + ": expected header 'file_id,label,score'");
  ScoreSet set;
  while (std::getline(in, line)) {
    const auto row = detail::StripCr(line);
    if (row.empty()) continue;
    const auto cols = detail::SplitCsv(row);
    if (cols.size() != 3) throw Error(ErrorKind::kFormat, path.string() + ": expected 3 columns");
    set.trials.push_back({std::string(cols[0]), ParseLabel(std::string(cols[1])),
                          detail::ParseDouble(cols[2], path.string())});
  }
  return set;
}

}  // namespace genuin
