// tests/genuinize_test.cpp

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

#include <functional>
#include <set>

#include <gtest/gtest.h>

#include "genuin/error.hpp"
#include "genuin/genuinize.hpp"
#include "test_util.hpp"

namespace genuin {
namespace {

using testing::CountPmf;
using testing::SampleFromPmf;

ErrorKind KindOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kConfig;
}

// Every level of the grid at least once, then random fill.
Waveform FullSupportFile(Rng &rng, int bits, std::size_t extra) {
  Waveform w = testing::RandomWaveform(rng, extra, bits);
  for (AmplitudeIndex k = 1; k <= w.levels(); ++k) w.samples.push_back(k);
  std::shuffle(w.samples.begin(), w.samples.end(), rng);
  return w;
}

// Extended-precision running sum, rounded once per entry.
std::vector<double> PlainCdf(const Pmf &p) {
  std::vector<double> c(p.mass.size());
  long double acc = 0;
  for (Eigen::Index i = 0; i < p.mass.size(); ++i) c[i] = static_cast<double>(acc += p.mass(i));
  return c;
}

// max { q in support : F(q) <= v }, by linear scan; below-support values go to
// the first support level.
AmplitudeIndex BruteArgmax(const std::vector<double> &target_cum, const Pmf &target, double v) {
  AmplitudeIndex first = 0, last = 0;
  for (std::size_t i = 0; i < target_cum.size(); ++i)
    if (target.mass(i) > 0) {
      if (!first) first = i + 1;
      last = i + 1;
    }
  AmplitudeIndex best = first;
  for (AmplitudeIndex q = first; q <= last; ++q)
    if (target_cum[q - 1] <= v) best = q;
  return best;
}

TEST(Genuinize, IdentityOnOwnCdf) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Waveform w = FullSupportFile(rng, t % 2 ? 8 : 10, 3000);
    const Waveform out = GenuinizeBasic(w, CdfFromPmf(EstimatePmf(w)));
    ASSERT_EQ(out.samples, w.samples);
  }
}

TEST(Genuinize, ConstantFileMapsToTopOfSupport) {
  Waveform w;
  w.bits = 8;
  w.samples.assign(100, 77);
  Pmf target;
  target.bits = 8;
  target.mass = Eigen::VectorXd::Zero(256);
  target.mass(29) = 0.5;  // level 30
  target.mass(199) = 0.5;  // level 200
  const Waveform out = GenuinizeBasic(w, CdfFromPmf(target));
  for (auto k : out.samples) EXPECT_EQ(k, 200u);
}

TEST(Genuinize, BasicMatchesBruteForce) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const Pmf target = testing::RandomPmf(rng, 3, 0.4);
    Waveform w = testing::RandomWaveform(rng, 1 + UniformBelow(rng, 40), 3);
    const Waveform out = GenuinizeBasic(w, CdfFromPmf(target));
    const auto src_cum = PlainCdf(CountPmf(w));
    const auto tgt_cum = PlainCdf(target);
    for (std::size_t n = 0; n < w.size(); ++n)
      ASSERT_EQ(out.samples[n], BruteArgmax(tgt_cum, target, src_cum[w.samples[n] - 1]))
          << "trial " << t << " sample " << n;
  }
}

TEST(Genuinize, PerturbedMatchesBruteForce) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const int d = static_cast<int>(UniformBelow(rng, 6));
    const Pmf target = testing::RandomPmf(rng, 4, 0.3);
    const Waveform w = testing::RandomWaveform(rng, 1 + UniformBelow(rng, 200), 4);
    GenuinizeParams params;
    params.extra_bits = d;
    params.seed = 1000 + t;
    const Waveform out = GenuinizePerturbed(w, CdfFromPmf(target), params);
    const Pmf sp = CountPmf(w);
    const auto src_cum = PlainCdf(sp);
    const auto tgt_cum = PlainCdf(target);
    Rng draws(params.seed);
    for (std::size_t n = 0; n < w.size(); ++n) {
      const std::uint64_t offset = d ? draws() >> (64 - d) : 0;
      const AmplitudeIndex k = w.samples[n];
      const double lower = k > 1 ? src_cum[k - 2] : 0.0;
      const double frac = std::ldexp(static_cast<double>((std::uint64_t{1} << d) - offset), -d);
      const double v = offset == 0 ? src_cum[k - 1] : std::min(lower + frac * sp.at(k), src_cum[k - 1]);
      ASSERT_EQ(out.samples[n], BruteArgmax(tgt_cum, target, v)) << "trial " << t << " d " << d;
    }
  }
}

TEST(Genuinize, ZeroExtraBitsEqualsBasic) {
  Rng rng(4);
  const Pmf target = testing::RandomPmf(rng, 16, 0.5);
  const Waveform w = testing::RandomWaveform(rng, 20000);
  GenuinizeParams params;
  params.extra_bits = 0;
  params.seed = 99;
  EXPECT_EQ(GenuinizePerturbed(w, CdfFromPmf(target), params).samples,
            GenuinizeBasic(w, CdfFromPmf(target)).samples);
}

TEST(Genuinize, BasicIsMonotone) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const Pmf target = testing::RandomPmf(rng, 8, 0.5);
    const Waveform w = testing::RandomWaveform(rng, 5000, 8);
    const Waveform out = GenuinizeBasic(w, CdfFromPmf(target));
    for (std::size_t a = 0; a < w.size(); a += 7)
      for (std::size_t b = 0; b < w.size(); b += 13)
        if (w.samples[a] <= w.samples[b]) ASSERT_LE(out.samples[a], out.samples[b]);
  }
}

TEST(Genuinize, ConstantToUniform) {
  Waveform w;
  w.bits = 8;
  w.samples.assign(1000000, 128);
  Pmf target;
  target.bits = 8;
  target.mass = Eigen::VectorXd::Zero(256);
  target.mass.segment(100, 32).setConstant(1.0 / 32);  // levels 101..132
  GenuinizeParams params;
  params.seed = 5;
  const Waveform out = GenuinizePerturbed(w, CdfFromPmf(target), params);
  EXPECT_LT(TvDistance(CountPmf(out), target), 0.01);
  std::set<AmplitudeIndex> hit(out.samples.begin(), out.samples.end());
  EXPECT_EQ(hit.size(), 32u);
}

TEST(Genuinize, SmoothDistributionMatching) {
  Rng rng(6);
  const Pmf target = testing::SmoothTargetPmf();
  const Waveform src = SampleFromPmf(testing::SmoothSourcePmf(), 1000000, rng);
  GenuinizeParams params;
  params.seed = 17;
  const double tv = TvDistance(CountPmf(GenuinizePerturbed(src, CdfFromPmf(target), params)), target);
  EXPECT_LT(tv, 0.02);
}

TEST(Genuinize, NotchRepairedByPerturbation) {
  Rng rng(7);
  Pmf source = testing::SmoothSourcePmf();
  source.mass *= 0.1;
  source.mass(127) += 0.9;
  const Pmf target = testing::SmoothTargetPmf();
  const Waveform src = SampleFromPmf(source, 200000, rng);
  const Waveform basic = GenuinizeBasic(src, CdfFromPmf(target));
  GenuinizeParams params;
  params.seed = 3;
  const Waveform pert = GenuinizePerturbed(src, CdfFromPmf(target), params);
  const Pmf pb = CountPmf(basic);
  int unhit = 0;
  for (int i = 0; i < 256; ++i) unhit += target.mass(i) > 0 && pb.mass(i) == 0;
  EXPECT_GE(unhit, 1);
  EXPECT_LT(TvDistance(CountPmf(pert), target), TvDistance(pb, target));
}

TEST(Genuinize, SeededDeterminism) {
  Rng rng(8);
  const Pmf target = testing::SmoothTargetPmf();
  const Waveform src = SampleFromPmf(testing::SmoothSourcePmf(), 5000, rng);
  GenuinizeParams a;
  a.seed = 123;
  GenuinizeParams b = a;
  b.seed = 124;
  const Cdf t = CdfFromPmf(target);
  EXPECT_EQ(GenuinizePerturbed(src, t, a).samples, GenuinizePerturbed(src, t, a).samples);
  EXPECT_NE(GenuinizePerturbed(src, t, a).samples, GenuinizePerturbed(src, t, b).samples);
}

TEST(Genuinize, SingleMemberPoolEqualsPerturbed) {
  Rng rng(9);
  const Waveform ref = SampleFromPmf(testing::SmoothTargetPmf(), 20000, rng);
  const Waveform src = SampleFromPmf(testing::SmoothSourcePmf(), 20000, rng);
  GenuinizeParams params;
  params.seed = 31;
  const std::vector<Waveform> pool{ref};
  EXPECT_EQ(GenuinizeRandom(src, pool, params).samples,
            GenuinizePerturbed(src, CdfFromPmf(EstimatePmf(ref)), params).samples);
}

TEST(Genuinize, RandomFollowsOneMember) {
  Rng rng(10);
  Pmf low, high;
  low.bits = high.bits = 8;
  low.mass = high.mass = Eigen::VectorXd::Zero(256);
  low.mass.segment(10, 64).setConstant(1.0 / 64);
  high.mass.segment(170, 64).setConstant(1.0 / 64);
  const std::vector<Waveform> pool{SampleFromPmf(low, 100000, rng),
                                   SampleFromPmf(high, 100000, rng)};
  const Waveform src = SampleFromPmf(testing::SmoothSourcePmf(), 100000, rng);
  std::set<std::size_t> picked;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    GenuinizeParams params;
    params.seed = seed;
    const Pmf out = CountPmf(GenuinizeRandom(src, pool, params));
    const double tl = TvDistance(out, low), th = TvDistance(out, high);
    EXPECT_TRUE((tl < 0.05) != (th < 0.05)) << tl << " " << th;
    const std::size_t pick = SelectReference(2, seed);
    EXPECT_LT(pick == 0 ? tl : th, 0.05);
    picked.insert(pick);
  }
  EXPECT_EQ(picked.size(), 2u);
}

TEST(Genuinize, Errors) {
  Waveform w;
  w.bits = 16;
  w.samples = {1, 2, 3};
  Pmf target;
  target.bits = 16;
  target.mass = Eigen::VectorXd::Constant(65536, 1.0 / 65536);
  GenuinizeParams params;
  params.extra_bits = 11;
  EXPECT_EQ(KindOf([&] { GenuinizePerturbed(w, CdfFromPmf(target), params); }),
            ErrorKind::kCapacity);
  EXPECT_EQ(KindOf([&] { GenuinizeRandom(w, {}, GenuinizeParams{}); }), ErrorKind::kConfig);
  Pmf small;
  small.bits = 8;
  small.mass = Eigen::VectorXd::Constant(256, 1.0 / 256);
  EXPECT_EQ(KindOf([&] { GenuinizeBasic(w, CdfFromPmf(small)); }), ErrorKind::kInput);
  EXPECT_EQ(KindOf([] { ParseMode("fancy"); }), ErrorKind::kUsage);
  EXPECT_EQ(ParseMode(ModeName(GenuinizeMode::kRandom)), GenuinizeMode::kRandom);
}

}  // namespace
}  // namespace genuin
