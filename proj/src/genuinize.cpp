// genuin/genuinize.cpp

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

#include "genuin/genuinize.hpp"

#include <algorithm>
#include <vector>

#include "genuin/error.hpp"
#include "genuin/rng.hpp"

namespace genuin {

namespace {

constexpr std::uint64_t kSelectStream = 0x5e1ec7ull;

void CheckCompatible(const Waveform &src, const TargetQuantiles &target) {
  ValidateWaveform(src);
  if (src.bits != target.cdf().bits)
    throw Error(ErrorKind::kInput, "source grid (" + std::to_string(src.bits) +
                                       " bits) differs from target grid (" +
                                       std::to_string(target.cdf().bits) + " bits)");
}

Waveform WithSamples(const Waveform &src, std::vector<AmplitudeIndex> samples) {
  Waveform out;
  out.samples = std::move(samples);
  out.sample_rate = src.sample_rate;
  out.source_path = src.source_path;
  out.bits = src.bits;
  return out;
}

}  // namespace

const char *ModeName(GenuinizeMode mode) {
  switch (mode) {
    case GenuinizeMode::kBasic: return "basic";
    case GenuinizeMode::kPerturbed: return "perturbed";
    case GenuinizeMode::kRandom: return "random";
  }
  return "?";
}

GenuinizeMode ParseMode(const std::string &name) {
  if (name == "basic") return GenuinizeMode::kBasic;
  if (name == "perturbed") return GenuinizeMode::kPerturbed;
  if (name == "random") return GenuinizeMode::kRandom;
  throw Error(ErrorKind::kUsage, "unknown genuinization mode '" + name + "'");
}

TargetQuantiles::TargetQuantiles(Cdf target) : target_(std::move(target)) {
  const auto &cum = target_.cum;
  if (cum.size() == 0) throw Error(ErrorKind::kInput, "empty target CDF");
  Eigen::Index first = -1, last = -1;
  double prev = 0.0;
  for (Eigen::Index i = 0; i < cum.size(); ++i) {
    if (cum(i) < prev) throw Error(ErrorKind::kInput, "target CDF is decreasing");
    if (cum(i) > prev) {
      if (first < 0) first = i;
      last = i;
    }
    prev = cum(i);
  }
  if (first < 0) throw Error(ErrorKind::kInput, "target CDF carries no mass");
  first_ = static_cast<AmplitudeIndex>(first + 1);
  last_ = static_cast<AmplitudeIndex>(last + 1);
}

AmplitudeIndex TargetQuantiles::Lookup(double v) const {
  const double *begin = target_.cum.data() + (first_ - 1);
  const double *end = target_.cum.data() + last_;
  const double *it = std::upper_bound(begin, end, v);
  if (it == begin) return first_;
  return static_cast<AmplitudeIndex>(it - target_.cum.data());
}

Waveform GenuinizeBasic(const Waveform &src, const Cdf &target) {
  return GenuinizeBasic(src, TargetQuantiles(target));
}

Waveform GenuinizeBasic(const Waveform &src, const TargetQuantiles &target) {
  CheckCompatible(src, target);
  const Cdf source = CdfFromPmf(EstimatePmf(src));
  // One lookup per occupied source level.
  std::vector<AmplitudeIndex> table(src.levels(), 0);
  std::vector<AmplitudeIndex> out(src.size());
  for (std::size_t n = 0; n < src.size(); ++n) {
    const AmplitudeIndex k = src.samples[n];
    AmplitudeIndex &q = table[k - 1];
    if (q == 0) q = target.Lookup(source.at(k));
    out[n] = q;
  }
  return WithSamples(src, std::move(out));
}

Waveform GenuinizePerturbed(const Waveform &src, const Cdf &target,
                            const GenuinizeParams &params) {
  return GenuinizePerturbed(src, TargetQuantiles(target), params);
}

Waveform GenuinizePerturbed(const Waveform &src, const TargetQuantiles &target,
                            const GenuinizeParams &params) {
  CheckCompatible(src, target);
  const int d = params.extra_bits;
  if (d < 0) throw Error(ErrorKind::kRange, "extra bits must be non-negative");
  if (src.bits + d > 62 || (std::uint64_t{1} << (src.bits + d)) > params.level_cap)
    throw Error(ErrorKind::kCapacity, "extended grid with " + std::to_string(src.bits + d) +
                                          " bits exceeds the level cap of " +
                                          std::to_string(params.level_cap));
  const Pmf pmf = EstimatePmf(src);
  const Cdf source = CdfFromPmf(pmf);
  const std::uint64_t sub = std::uint64_t{1} << d;

  // Lookup table over the refined levels of occupied segments only; the
  // other segments are never addressed.
  std::vector<std::uint32_t> block(src.levels(), 0);
  std::uint32_t blocks = 0;
  for (AmplitudeIndex k : src.samples)
    if (block[k - 1] == 0) block[k - 1] = ++blocks;
  std::vector<AmplitudeIndex> table(static_cast<std::size_t>(blocks) * sub, 0);

  Rng rng(params.seed);
  std::vector<AmplitudeIndex> out(src.size());
  for (std::size_t n = 0; n < src.size(); ++n) {
    const AmplitudeIndex k = src.samples[n];
    const std::uint64_t offset = DrawBits(rng, d);
    const std::uint64_t m = std::uint64_t{k} * sub - offset;
    AmplitudeIndex &q = table[(block[k - 1] - 1) * sub + (sub - 1 - offset)];
    if (q == 0) q = target.Lookup(ExtendedLevel(pmf, source, m, d));
    out[n] = q;
  }
  return WithSamples(src, std::move(out));
}

std::size_t SelectReference(std::size_t pool_size, std::uint64_t seed) {
  if (pool_size == 0) throw Error(ErrorKind::kConfig, "random genuinization needs a non-empty reference pool");
  Rng rng(DeriveSeed(seed, kSelectStream));
  return static_cast<std::size_t>(UniformBelow(rng, pool_size));
}

Waveform GenuinizeRandom(const Waveform &src, std::span<const Waveform> reference_pool,
                         const GenuinizeParams &params) {
  const std::size_t pick = SelectReference(reference_pool.size(), params.seed);
  const Cdf target = CdfFromPmf(EstimatePmf(reference_pool[pick]));
  return GenuinizePerturbed(src, target, params);
}

}  // namespace genuin
