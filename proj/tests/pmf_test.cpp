// tests/pmf_test.cpp

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

#include <algorithm>
#include <cstring>
#include <fstream>
#include <functional>

#include <gtest/gtest.h>

#include "genuin/error.hpp"
#include "genuin/pmf.hpp"
#include "genuin/vad.hpp"
#include "test_util.hpp"

namespace genuin {
namespace {

using testing::TempDir;

ErrorKind KindOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kConfig;
}

Waveform Make(std::vector<AmplitudeIndex> s, int bits = 16) {
  Waveform w;
  w.bits = bits;
  w.samples = std::move(s);
  return w;
}

TEST(Pmf, DeltaFromConstantFile) {
  const Pmf p = EstimatePmf(Make(std::vector<AmplitudeIndex>(1000, 32768)));
  EXPECT_EQ(p.mass.size(), 65536);
  EXPECT_EQ(p.total_count, 1000u);
  EXPECT_EQ(p.at(32768), 1.0);
  EXPECT_EQ(p.mass.sum(), 1.0);
}

TEST(Pmf, TwoFilesPooled) {
  const std::vector<Waveform> ws = {Make({1, 1, 2}), Make({2, 65536})};
  const Pmf p = EstimatePmf(ws);
  EXPECT_DOUBLE_EQ(p.at(1), 0.4);
  EXPECT_DOUBLE_EQ(p.at(2), 0.4);
  EXPECT_DOUBLE_EQ(p.at(65536), 0.2);
  EXPECT_EQ(p.total_count, 5u);
}

TEST(Pmf, MaskedSelectionMatchesCounting) {
  Rng rng(3);
  std::vector<Waveform> ws;
  std::vector<VadMask> masks;
  for (int f = 0; f < 5; ++f) {
    ws.push_back(testing::RandomWaveform(rng, 400 + 50 * f, 8));
    VadMask m;
    for (std::size_t i = 0; i < ws.back().size(); ++i) m.speech.push_back(UniformUnit(rng) < 0.3);
    masks.push_back(m);
  }
  for (auto keep : {SampleSelection::kSpeech, SampleSelection::kNonSpeech, SampleSelection::kAll}) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(256);
    for (std::size_t f = 0; f < ws.size(); ++f)
      for (std::size_t i = 0; i < ws[f].size(); ++i) {
        const bool s = masks[f].speech[i];
        if (keep == SampleSelection::kAll || (keep == SampleSelection::kSpeech) == s)
          counts(ws[f].samples[i] - 1) += 1;
      }
    const Pmf p = EstimatePmf(ws, masks, keep);
    EXPECT_LT((p.mass - counts / counts.sum()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Pmf, NothingRetained) {
  Waveform w = Make({5, 6, 7}, 8);
  VadMask none;
  none.speech.assign(3, false);
  const std::vector<Waveform> ws{w};
  const std::vector<VadMask> ms{none};
  EXPECT_EQ(KindOf([&] { EstimatePmf(ws, ms, SampleSelection::kSpeech); }),
            ErrorKind::kEstimation);
  EXPECT_EQ(KindOf([&] { EstimatePmf(std::span<const Waveform>{}); }), ErrorKind::kEstimation);
}

TEST(Pmf, OrderAndPartitionInvariance) {
  Rng rng(5);
  std::vector<Waveform> ws;
  for (int f = 0; f < 6; ++f) ws.push_back(testing::RandomWaveform(rng, 300, 8));
  const Pmf a = EstimatePmf(ws);
  std::vector<Waveform> rev(ws.rbegin(), ws.rend());
  const Pmf b = EstimatePmf(rev);
  EXPECT_EQ(a.mass, b.mass);
  Histogram h1(8), h2(8);
  for (int f = 0; f < 3; ++f) h1.Add(ws[f]);
  for (int f = 3; f < 6; ++f) h2.Add(ws[f]);
  h2.Merge(h1);
  EXPECT_EQ(h2.ToPmf().mass, a.mass);
  // Shuffling samples inside one file does not change its PMF.
  Waveform shuffled = ws[0];
  std::shuffle(shuffled.samples.begin(), shuffled.samples.end(), rng);
  EXPECT_EQ(EstimatePmf(shuffled).mass, EstimatePmf(ws[0]).mass);
}

TEST(Cdf, MatchesPrefixSums) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const Pmf p = testing::RandomPmf(rng, 10, 0.5);
    const Cdf c = CdfFromPmf(p);
    long double acc = 0;
    for (Eigen::Index i = 0; i < p.mass.size(); ++i) {
      acc += p.mass(i);
      ASSERT_NEAR(c.cum(i), static_cast<double>(acc), 1e-12);
      if (i > 0) ASSERT_GE(c.cum(i), c.cum(i - 1));
    }
    EXPECT_NEAR(c.cum(c.cum.size() - 1), 1.0, 1e-12);
  }
}

TEST(Cdf, UniformFourLevels) {
  Pmf p;
  p.bits = 2;
  p.mass = Eigen::Vector4d::Constant(0.25);
  const Cdf c = CdfFromPmf(p);
  EXPECT_EQ(c.at(1), 0.25);
  EXPECT_EQ(c.at(2), 0.5);
  EXPECT_EQ(c.at(3), 0.75);
  EXPECT_EQ(c.at(4), 1.0);
}

TEST(ExtendedCdf, ZeroExtraBitsIsBase) {
  Rng rng(1);
  const Pmf p = testing::RandomPmf(rng, 8);
  const Cdf c = CdfFromPmf(p);
  const ExtendedCdf e = ExtendCdf(p, 0);
  ASSERT_EQ(e.cum.size(), c.cum.size());
  EXPECT_EQ(std::memcmp(e.cum.data(), c.cum.data(), sizeof(double) * c.cum.size()), 0);
}

TEST(ExtendedCdf, DeltaSubdivision) {
  Pmf p;
  p.bits = 3;
  p.mass = Eigen::VectorXd::Zero(8);
  p.mass(4) = 1.0;  // k0 = 5
  const ExtendedCdf e = ExtendCdf(p, 2);
  ASSERT_EQ(e.cum.size(), 32);
  for (int m = 1; m <= 16; ++m) EXPECT_EQ(e.cum(m - 1), 0.0) << m;
  EXPECT_EQ(e.cum(16), 0.25);
  EXPECT_EQ(e.cum(17), 0.5);
  EXPECT_EQ(e.cum(18), 0.75);
  EXPECT_EQ(e.cum(19), 1.0);
  for (int m = 21; m <= 32; ++m) EXPECT_EQ(e.cum(m - 1), 1.0) << m;
}

TEST(ExtendedCdf, BoundaryIdentityAndMonotone) {
  Rng rng(2);
  for (int d : {0, 1, 3, 5}) {
    const Pmf p = testing::RandomPmf(rng, 8, 0.3);
    const Cdf c = CdfFromPmf(p);
    const ExtendedCdf e = ExtendCdf(p, d);
    ASSERT_EQ(e.cum.size(), Eigen::Index{256} << d);
    for (Eigen::Index k = 1; k <= 256; ++k) ASSERT_EQ(e.cum((k << d) - 1), c.at(k)) << d;
    for (Eigen::Index m = 1; m < e.cum.size(); ++m) ASSERT_GE(e.cum(m), e.cum(m - 1));
    // Linear interpolation inside each segment.
    for (Eigen::Index m = 1; m <= e.cum.size(); ++m) {
      const Eigen::Index k = (m - 1) / (Eigen::Index{1} << d) + 1;
      const Eigen::Index i = m - (k - 1) * (Eigen::Index{1} << d);
      const double lower = k > 1 ? c.at(k - 1) : 0.0;
      ASSERT_NEAR(e.cum(m - 1), lower + std::ldexp(double(i), -d) * p.at(k), 1e-14);
    }
  }
}

TEST(ExtendedCdf, SizeAndCapacity) {
  Pmf p;
  p.bits = 16;
  p.mass = Eigen::VectorXd::Constant(65536, 1.0 / 65536);
  EXPECT_EQ(ExtendCdf(p, 5).cum.size(), Eigen::Index{1} << 21);
  EXPECT_EQ(KindOf([&] { ExtendCdf(p, 11); }), ErrorKind::kCapacity);
  EXPECT_EQ(KindOf([&] { ExtendCdf(p, 5, std::uint64_t{1} << 20); }), ErrorKind::kCapacity);
}

TEST(Tv, Examples) {
  Pmf a, b;
  a.bits = b.bits = 2;
  a.mass = Eigen::Vector4d(1, 0, 0, 0);
  b.mass = Eigen::Vector4d(0, 0, 0, 1);
  EXPECT_EQ(TvDistance(a, b), 1.0);
  EXPECT_EQ(TvDistance(a, a), 0.0);
  b.mass = Eigen::Vector4d(0.5, 0.5, 0, 0);
  EXPECT_DOUBLE_EQ(TvDistance(a, b), 0.5);
  EXPECT_DOUBLE_EQ(TvDistance(b, a), 0.5);
  Pmf c;
  c.bits = 3;
  c.mass = Eigen::VectorXd::Constant(8, 0.125);
  EXPECT_EQ(KindOf([&] { TvDistance(a, c); }), ErrorKind::kInput);
}

TEST(Pmf, Validate) {
  Pmf p;
  p.bits = 2;
  p.mass = Eigen::Vector4d(0.5, 0.5, 0, 0);
  EXPECT_NO_THROW(ValidatePmf(p));
  p.mass(0) = 0.6;
  EXPECT_EQ(KindOf([&] { ValidatePmf(p); }), ErrorKind::kInput);
  p.mass = Eigen::Vector4d(1.5, -0.5, 0, 0);
  EXPECT_EQ(KindOf([&] { ValidatePmf(p); }), ErrorKind::kInput);
}

TEST(PmfFiles, RoundTrips) {
  TempDir dir;
  Rng rng(4);
  Pmf p = testing::RandomPmf(rng, 16, 0.9);
  SavePmf(dir / "p.csv", p);
  SavePmf(dir / "p.bin", p);
  const Pmf from_csv = LoadPmf(dir / "p.csv");
  const Pmf from_bin = LoadPmf(dir / "p.bin");
  EXPECT_EQ(from_csv.mass, p.mass);
  EXPECT_EQ(from_bin.mass, p.mass);
  EXPECT_EQ(from_bin.bits, 16);

  Pmf small = testing::RandomPmf(rng, 8);
  WritePmfBinary(dir / "s.bin", small);
  EXPECT_EQ(ReadPmfBinary(dir / "s.bin").bits, 8);
  WritePmfCsv(dir / "s.csv", small);
  EXPECT_EQ(ReadPmfCsv(dir / "s.csv", 8).mass, small.mass);
}

TEST(PmfFiles, BadInput) {
  TempDir dir;
  {
    std::ofstream f(dir / "bad.csv");
    f << "idx,prob\n1,1\n";
  }
  {
    std::ofstream f(dir / "range.csv");
    f << "index,probability\n70000,1\n";
  }
  EXPECT_EQ(KindOf([&] { LoadPmf(dir / "bad.csv"); }), ErrorKind::kFormat);
  EXPECT_EQ(KindOf([&] { LoadPmf(dir / "range.csv"); }), ErrorKind::kFormat);
  EXPECT_EQ(KindOf([&] { LoadPmf(dir / "none.csv"); }), ErrorKind::kIo);
}

}  // namespace
}  // namespace genuin
