// tests/test_util.hpp

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

#ifndef GENUIN_TESTS_TEST_UTIL_HPP_
#define GENUIN_TESTS_TEST_UTIL_HPP_

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "genuin/pmf.hpp"
#include "genuin/rng.hpp"
#include "genuin/waveform.hpp"

namespace genuin::testing {

// Scratch folder removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("genuin-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Waveform RandomWaveform(Rng &rng, std::size_t n, int bits = kStorageBits, int rate = 16000) {
  Waveform w;
  w.bits = bits;
  w.sample_rate = rate;
  w.samples.resize(n);
  for (auto &k : w.samples) k = static_cast<AmplitudeIndex>(UniformBelow(rng, w.levels()) + 1);
  return w;
}

inline Pmf PmfFromWeights(const Eigen::VectorXd &weights, int bits) {
  Pmf p;
  p.bits = bits;
  p.mass = weights / weights.sum();
  return p;
}

inline Pmf RandomPmf(Rng &rng, int bits, double zero_fraction = 0.0) {
  Eigen::VectorXd w(Eigen::Index{1} << bits);
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w(i) = UniformUnit(rng) < zero_fraction ? 0.0 : UniformUnit(rng);
  if (w.sum() == 0.0) w(0) = 1.0;
  return PmfFromWeights(w, bits);
}

// Inverse-CDF sampling of n i.i.d. indices from `p`.
inline Waveform SampleFromPmf(const Pmf &p, std::size_t n, Rng &rng) {
  std::vector<double> cum(static_cast<std::size_t>(p.mass.size()));
  std::partial_sum(p.mass.data(), p.mass.data() + p.mass.size(), cum.begin());
  Waveform w;
  w.bits = p.bits;
  w.samples.resize(n);
  for (auto &k : w.samples) {
    const double u = UniformUnit(rng) * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    k = static_cast<AmplitudeIndex>(std::min<std::ptrdiff_t>(it - cum.begin(), cum.size() - 1) + 1);
  }
  return w;
}

// Empirical PMF by a plain counting loop.
inline Pmf CountPmf(const Waveform &w) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(w.levels());
  for (AmplitudeIndex k : w.samples) counts(k - 1) += 1.0;
  return PmfFromWeights(counts, w.bits);
}

// Smooth PMFs on the 256-level test grid, shared by the genuinizer unit tests
// and the acceptance suite (same definitions as tests/oracles).
inline Pmf SmoothSourcePmf() {
  Eigen::VectorXd w(256);
  for (int i = 0; i < 256; ++i) {
    const double k = i + 1;
    w(i) = std::exp(-(k - 100.0) * (k - 100.0) / (2 * 30.0 * 30.0)) +
           0.5 * std::exp(-(k - 170.0) * (k - 170.0) / (2 * 20.0 * 20.0));
  }
  return PmfFromWeights(w, 8);
}

inline Pmf SmoothTargetPmf() {
  Eigen::VectorXd w(256);
  for (int i = 0; i < 256; ++i) {
    const double k = i + 1;
    w(i) = std::exp(-(k - 150.0) * (k - 150.0) / (2 * 45.0 * 45.0)) +
           0.3 * std::exp(-(k - 60.0) * (k - 60.0) / (2 * 25.0 * 25.0));
  }
  return PmfFromWeights(w, 8);
}

}  // namespace genuin::testing

#endif  // GENUIN_TESTS_TEST_UTIL_HPP_
