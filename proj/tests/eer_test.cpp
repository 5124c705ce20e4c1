// tests/eer_test.cpp

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
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "genuin/eer.hpp"
#include "genuin/error.hpp"
#include "test_util.hpp"

namespace genuin {
namespace {

// O(n^2) sweep straight from the definition.
double BruteEer(const std::vector<double> &g, const std::vector<double> &s) {
  std::set<double> ts(g.begin(), g.end());
  ts.insert(s.begin(), s.end());
  std::vector<double> thresholds(ts.begin(), ts.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());
  double pf = 0, pa = 1;
  for (double t : thresholds) {
    long rej = 0, acc = 0;
    for (double v : g) rej += v < t;
    for (double v : s) acc += v >= t;
    const double frr = double(rej) / g.size(), far = double(acc) / s.size();
    if (rej * long(s.size()) == acc * long(g.size())) return 100 * frr;
    if (rej * long(s.size()) > acc * long(g.size())) {
      const double lambda = (pa - pf) / ((frr - far) - (pf - pa));
      return 100 * (pf + lambda * (frr - pf));
    }
    pf = frr;
    pa = far;
  }
  return -1;
}

TEST(Eer, Separated) {
  const std::vector<double> g{5, 6, 7}, s{1, 2, 3};
  EXPECT_EQ(ComputeEer(g, s), 0.0);
  const std::vector<double> touching{3, 4};
  EXPECT_GT(ComputeEer(touching, s), 0.0);
}

TEST(Eer, AllEqualIsFifty) {
  const std::vector<double> g(7, 1.5), s(4, 1.5);
  EXPECT_DOUBLE_EQ(ComputeEer(g, s), 50.0);
}

TEST(Eer, FullyInverted) {
  const std::vector<double> g{1, 2}, s{3, 4};
  EXPECT_DOUBLE_EQ(ComputeEer(g, s), 100.0);
}

TEST(Eer, MatchesBruteForce) {
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t ng = 1 + UniformBelow(rng, 100), ns = 1 + UniformBelow(rng, 100);
    const int levels = 2 + static_cast<int>(UniformBelow(rng, 40));  // forces ties
    const double shift = 3 * UniformUnit(rng);
    std::vector<double> g(ng), s(ns);
    for (double &v : g) v = std::floor(levels * UniformUnit(rng)) + shift;
    for (double &v : s) v = std::floor(levels * UniformUnit(rng));
    const double e = ComputeEer(g, s);
    ASSERT_NEAR(e, BruteEer(g, s), 1e-9) << t;
    ASSERT_GE(e, 0.0);
    ASSERT_LE(e, 100.0);
  }
}

TEST(Eer, OrderOnly) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> g(60), s(40);
    for (double &v : g) v = UniformUnit(rng) + 0.3;
    for (double &v : s) v = UniformUnit(rng);
    auto warp = [](std::vector<double> v) {
      for (double &x : v) x = std::exp(3 * x) - 7;
      return v;
    };
    EXPECT_NEAR(ComputeEer(g, s), ComputeEer(warp(g), warp(s)), 1e-12);
    std::reverse(g.begin(), g.end());
    std::shuffle(s.begin(), s.end(), rng);
    EXPECT_NEAR(ComputeEer(g, s), BruteEer(g, s), 1e-9);
  }
}

TEST(Eer, Errors) {
  auto kind = [](const std::function<void()> &fn) {
    try {
      fn();
    } catch (const Error &e) {
      return e.kind();
    }
    return ErrorKind::kUsage;
  };
  const std::vector<double> one{1.0}, none, bad{std::nan("")};
  EXPECT_EQ(kind([&] { ComputeEer(one, none); }), ErrorKind::kInput);
  EXPECT_EQ(kind([&] { ComputeEer(none, one); }), ErrorKind::kInput);
  EXPECT_EQ(kind([&] { ComputeEer(bad, one); }), ErrorKind::kInput);
  EXPECT_EQ(kind([] { ParseLabel("human"); }), ErrorKind::kFormat);
  EXPECT_EQ(ParseLabel("bonafide"), TrialLabel::kGenuine);
}

TEST(Scores, CsvRoundTrip) {
  testing::TempDir dir;
  ScoreSet set;
  set.trials = {{"a.wav", TrialLabel::kGenuine, 1.25},
                {"b.wav", TrialLabel::kSpoof, -0.1},
                {"c.wav", TrialLabel::kSpoof, 1e-300}};
  WriteScores(dir / "s.csv", set);
  const ScoreSet back = ReadScores(dir / "s.csv");
  ASSERT_EQ(back.trials.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.trials[i].id, set.trials[i].id);
    EXPECT_EQ(back.trials[i].label, set.trials[i].label);
    EXPECT_EQ(back.trials[i].score, set.trials[i].score);
  }
  EXPECT_EQ(ComputeEer(back), ComputeEer(set));
}

}  // namespace
}  // namespace genuin
