// genuin/pmf.hpp

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

#ifndef GENUIN_PMF_HPP_
#define GENUIN_PMF_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "genuin/vad.hpp"
#include "genuin/waveform.hpp"

namespace genuin {

// Probability mass over amplitude indices; mass(k - 1) holds p(k).
struct Pmf {
  Eigen::VectorXd mass;
  std::uint64_t total_count = 0;  // 0 when loaded from a file
  int bits = kStorageBits;

  double at(AmplitudeIndex k) const { return mass(static_cast<Eigen::Index>(k) - 1); }
};

// Discrete cumulative function; cum(k - 1) holds F(k) = sum_{q <= k} p(q).
struct Cdf {
  Eigen::VectorXd cum;
  int bits = kStorageBits;

  double at(AmplitudeIndex k) const { return cum(static_cast<Eigen::Index>(k) - 1); }
};

// CDF on the refined grid with 2^d sub-levels per base segment, under a
// uniform density inside each segment. cum(m - 1) holds G(m) for
// m in 1..2^(D+d); G(k * 2^d) equals the base F(k).
struct ExtendedCdf {
  Eigen::VectorXd cum;
  int base_bits = kStorageBits;
  int extra_bits = 0;
};

enum class SampleSelection { kAll, kSpeech, kNonSpeech };

inline constexpr std::uint64_t kDefaultExtendedLevelCap = std::uint64_t{1} << 26;

// Integer amplitude counts. Merging is plain addition, so per-file histograms
// can be accumulated in any order.
class Histogram {
 public:
  explicit Histogram(int bits = kStorageBits);

  void Add(const Waveform &w);
  void Add(const Waveform &w, const VadMask &mask, SampleSelection keep);
  void Merge(const Histogram &other);

  int bits() const { return bits_; }
  std::uint64_t total() const { return total_; }
  const std::vector<std::uint64_t> &counts() const { return counts_; }

  // Throws Error(kEstimation) when no sample was retained.
  Pmf ToPmf() const;

 private:
  int bits_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> counts_;
};

// `masks` is either empty or one mask per waveform.
Pmf EstimatePmf(std::span<const Waveform> waveforms, std::span<const VadMask> masks = {},
                SampleSelection keep = SampleSelection::kAll);
Pmf EstimatePmf(const Waveform &w);

// Throws Error(kInput) on negative entries or a total away from 1 by > 1e-9.
void ValidatePmf(const Pmf &p);

// Running sum with Neumaier compensation.
Cdf CdfFromPmf(const Pmf &p);

// Value of the extended CDF at refined level m (1-based), computed from the
// base PMF and CDF without materializing the whole vector. ExtendCdf and the
// perturbed genuinizer share this so their values agree bit for bit.
inline double ExtendedLevel(const Pmf &p, const Cdf &base, std::uint64_t m, int extra_bits) {
  const std::uint64_t sub = std::uint64_t{1} << extra_bits;
  const std::uint64_t k = (m - 1) / sub + 1;
  const std::uint64_t i = m - (k - 1) * sub;
  const double upper = base.cum(static_cast<Eigen::Index>(k) - 1);
  if (i == sub) return upper;
  const double lower = k > 1 ? base.cum(static_cast<Eigen::Index>(k) - 2) : 0.0;
  const double v = lower + (static_cast<double>(i) / static_cast<double>(sub)) *
                               p.mass(static_cast<Eigen::Index>(k) - 1);
  return v < upper ? v : upper;
}

// Throws Error(kCapacity) if 2^(D+d) exceeds `level_cap`. d = 0 returns the
// base CDF unchanged.
ExtendedCdf ExtendCdf(const Pmf &p, int extra_bits,
                      std::uint64_t level_cap = kDefaultExtendedLevelCap);

// Half the L1 distance between two PMFs on the same grid.
double TvDistance(const Pmf &a, const Pmf &b);

// CSV `index,probability`, one row per nonzero bin; values are written in
// shortest round-trip form.
void WritePmfCsv(const std::filesystem::path &path, const Pmf &p);
Pmf ReadPmfCsv(const std::filesystem::path &path, int bits = kStorageBits);

// Binary: "GPMF", version byte, D byte, 2^D little-endian doubles.
void WritePmfBinary(const std::filesystem::path &path, const Pmf &p);
Pmf ReadPmfBinary(const std::filesystem::path &path);

// Sniffs the binary magic, falls back to CSV.
Pmf LoadPmf(const std::filesystem::path &path);
void SavePmf(const std::filesystem::path &path, const Pmf &p);

}  // namespace genuin

#endif  // GENUIN_PMF_HPP_
