// genuin/genuinize.hpp

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

#ifndef GENUIN_GENUINIZE_HPP_
#define GENUIN_GENUINIZE_HPP_

#include <cstdint>
#include <span>
#include <string>

#include "genuin/pmf.hpp"
#include "genuin/waveform.hpp"

namespace genuin {

enum class GenuinizeMode { kBasic, kPerturbed, kRandom };

const char *ModeName(GenuinizeMode mode);
GenuinizeMode ParseMode(const std::string &name);

struct GenuinizeParams {
  int extra_bits = 5;  // ignored in basic mode
  std::uint64_t seed = 0;
  GenuinizeMode mode = GenuinizeMode::kPerturbed;
  std::uint64_t level_cap = kDefaultExtendedLevelCap;
};

// Quantile lookup against a target CDF:
//   q* = max { q : F(q) <= v }
// restricted to the target's support [first, last]. Values below F(first)
// map to `first`; runs of equal F resolve to the largest index in the run.
class TargetQuantiles {
 public:
  explicit TargetQuantiles(Cdf target);

  AmplitudeIndex Lookup(double v) const;
  AmplitudeIndex first() const { return first_; }
  AmplitudeIndex last() const { return last_; }
  const Cdf &cdf() const { return target_; }

 private:
  Cdf target_;
  AmplitudeIndex first_ = 1;
  AmplitudeIndex last_ = 1;
};

// Maps each sample through the file's own CDF and the target quantiles.
Waveform GenuinizeBasic(const Waveform &src, const Cdf &target);
Waveform GenuinizeBasic(const Waveform &src, const TargetQuantiles &target);

// Same mapping on the source grid refined by `extra_bits`. A sample with index
// k is first moved to refined level k * 2^d - n, n ~ U{0 .. 2^d - 1}, drawn
// from a stream seeded with params.seed. d = 0 reproduces GenuinizeBasic.
Waveform GenuinizePerturbed(const Waveform &src, const Cdf &target,
                            const GenuinizeParams &params);
Waveform GenuinizePerturbed(const Waveform &src, const TargetQuantiles &target,
                            const GenuinizeParams &params);

// Index of the pool member drawn for this seed. Selection uses its own
// substream, so the dither draws match GenuinizePerturbed for the same seed.
std::size_t SelectReference(std::size_t pool_size, std::uint64_t seed);

// Perturbed genuinization against the per-file CDF of one pool member drawn
// uniformly at random. Throws Error(kConfig) on an empty pool.
Waveform GenuinizeRandom(const Waveform &src, std::span<const Waveform> reference_pool,
                         const GenuinizeParams &params);

}  // namespace genuin

#endif  // GENUIN_GENUINIZE_HPP_
