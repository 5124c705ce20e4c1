// tests/gmm_test.cpp

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

#include <cmath>
#include <functional>
#include <numbers>

#include <gtest/gtest.h>

#include "genuin/error.hpp"
#include "genuin/gmm.hpp"
#include "test_util.hpp"

namespace genuin {
namespace {

double Gauss(Rng &rng) {
  // Box-Muller, one value per call.
  const double u = UniformUnit(rng) + 0x1.0p-54, v = UniformUnit(rng);
  return std::sqrt(-2 * std::log(u)) * std::cos(2 * std::numbers::pi * v);
}

Eigen::MatrixXd Mixture(Rng &rng, Eigen::Index n, const Eigen::MatrixXd &means, double sd) {
  Eigen::MatrixXd x(n, means.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(UniformBelow(rng, means.rows()));
    for (Eigen::Index f = 0; f < x.cols(); ++f) x(i, f) = means(k, f) + sd * Gauss(rng);
  }
  return x;
}

double NaiveLogLik(const Gmm &m, const Eigen::MatrixXd &x) {
  double total = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double p = 0;
    for (Eigen::Index k = 0; k < m.num_components(); ++k) {
      double logd = std::log(m.weights(k));
      for (Eigen::Index f = 0; f < x.cols(); ++f) {
        const double v = m.variances(k, f), d = x(i, f) - m.means(k, f);
        logd += -0.5 * std::log(2 * std::numbers::pi * v) - 0.5 * d * d / v;
      }
      p += std::exp(logd);
    }
    total += std::log(p);
  }
  return total / x.rows();
}

TEST(Gmm, SingleComponentClosedForm) {
  Rng rng(1);
  Eigen::MatrixXd means(1, 4);
  means << 1, -2, 0.5, 10;
  const Eigen::MatrixXd x = Mixture(rng, 3000, means, 0.7);
  GmmTrainOptions opts;
  opts.components = 1;
  const Gmm m = TrainGmm(x, opts);
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const Eigen::RowVectorXd var = (x.rowwise() - mu).cwiseAbs2().colwise().mean();
  EXPECT_NEAR(m.weights(0), 1.0, 1e-12);
  EXPECT_LT((m.means.row(0) - mu).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((m.variances.row(0) - var).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Gmm, RecoversTwoGaussians) {
  Rng rng(2);
  Eigen::MatrixXd means(2, 2);
  means << -3, 1, 3, -1;
  const Eigen::MatrixXd x = Mixture(rng, 4000, means, 1.0);
  GmmTrainOptions opts;
  opts.components = 2;
  opts.iterations = 50;
  opts.seed = 4;
  const Gmm m = TrainGmm(x, opts);
  const Eigen::Index a = m.means(0, 0) < m.means(1, 0) ? 0 : 1;
  EXPECT_LT((m.means.row(a) - means.row(0)).cwiseAbs().maxCoeff(), 0.1);
  EXPECT_LT((m.means.row(1 - a) - means.row(1)).cwiseAbs().maxCoeff(), 0.1);
  EXPECT_NEAR(m.weights(a), 0.5, 0.05);
}

TEST(Gmm, LogLikelihoodNonDecreasing) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(UniformBelow(rng, 5));
    Eigen::MatrixXd means(4, dim);
    for (Eigen::Index i = 0; i < means.size(); ++i) means.data()[i] = 6 * UniformUnit(rng);
    const Eigen::MatrixXd x = Mixture(rng, 500, means, 0.8);
    GmmTrainOptions opts;
    opts.components = 1 + static_cast<int>(UniformBelow(rng, 6));
    opts.iterations = 30;
    opts.rel_tolerance = 0;
    opts.seed = t;
    GmmTrainTrace trace;
    TrainGmm(x, opts, &trace);
    for (std::size_t i = 1; i < trace.loglik.size(); ++i)
      EXPECT_GE(trace.loglik[i], trace.loglik[i - 1] - 1e-6 * std::abs(trace.loglik[i - 1]))
          << "trial " << t << " step " << i;
  }
}

TEST(Gmm, ScoringMatchesNaiveFormula) {
  Rng rng(4);
  Eigen::MatrixXd means(3, 3);
  means << 0, 0, 0, 2, 2, 2, -2, 1, 0;
  const Eigen::MatrixXd x = Mixture(rng, 600, means, 0.5);
  GmmTrainOptions opts;
  opts.components = 3;
  const Gmm m = TrainGmm(x, opts);
  EXPECT_NEAR(GmmLogLikelihood(m, x), NaiveLogLik(m, x), 1e-9);
  // Far-away frames still give finite scores.
  const Eigen::MatrixXd far = Eigen::MatrixXd::Constant(2, 3, 1e3);
  EXPECT_TRUE(std::isfinite(GmmLogLikelihood(m, far)));
}

TEST(Gmm, ScoreInvariantToFrameOrderAndDuplication) {
  Rng rng(5);
  Eigen::MatrixXd means(2, 2);
  means << 0, 0, 3, 3;
  const Eigen::MatrixXd x = Mixture(rng, 300, means, 1.0);
  GmmTrainOptions opts;
  opts.components = 2;
  const Gmm m = TrainGmm(x, opts);
  const Eigen::MatrixXd y = x.topRows(50);
  Eigen::MatrixXd twice(100, 2);
  twice << y, y;
  const Eigen::MatrixXd reversed = y.colwise().reverse();
  EXPECT_NEAR(GmmLogLikelihood(m, twice), GmmLogLikelihood(m, y), 1e-12);
  EXPECT_NEAR(GmmLogLikelihood(m, reversed), GmmLogLikelihood(m, y), 1e-12);
}

TEST(Gmm, ThreadedTrainingIsIdentical) {
  Rng rng(6);
  Eigen::MatrixXd means(3, 2);
  means << 0, 0, 3, 3, -3, 2;
  const Eigen::MatrixXd x = Mixture(rng, 5000, means, 0.6);
  GmmTrainOptions opts;
  opts.components = 4;
  opts.block_rows = 700;
  const Gmm a = TrainGmm(x, opts);
  opts.threads = 3;
  const Gmm b = TrainGmm(x, opts);
  EXPECT_EQ(a.means, b.means);
  EXPECT_EQ(a.variances, b.variances);
  EXPECT_EQ(a.weights, b.weights);
}

TEST(Gmm, ScoreTrialSigns) {
  Rng rng(7);
  Eigen::MatrixXd mg(1, 2), ms(1, 2);
  mg << 0, 0;
  ms << 2, 2;
  GmmTrainOptions opts;
  opts.components = 2;
  const Gmm g = TrainGmm(Mixture(rng, 2000, mg, 1.0), opts);
  const Gmm s = TrainGmm(Mixture(rng, 2000, ms, 1.0), opts);
  int positive = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    FeatureMatrix f;
    f.frames = Mixture(rng, 200, mg, 1.0);
    const double llr = ScoreTrial(g, s, f);
    EXPECT_NEAR(ScoreTrial(s, g, f), -llr, 1e-12);
    EXPECT_EQ(ScoreTrial(g, g, f), 0.0);
    positive += llr > 0;
  }
  EXPECT_GT(positive, 0.99 * trials);
}

TEST(Gmm, FileRoundTripAndErrors) {
  testing::TempDir dir;
  Rng rng(8);
  Eigen::MatrixXd means(2, 3);
  means << 0, 1, 2, 3, 4, 5;
  GmmTrainOptions opts;
  opts.components = 2;
  Gmm m = TrainGmm(Mixture(rng, 400, means, 1.0), opts);
  m.provenance = "G";
  m.fingerprint = "lfcc:test";
  WriteGmm(dir / "m.gmm", m);
  const Gmm back = ReadGmm(dir / "m.gmm");
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.means, m.means);
  EXPECT_EQ(back.variances, m.variances);
  EXPECT_EQ(back.provenance, "G");
  EXPECT_EQ(back.fingerprint, "lfcc:test");

  auto kind = [](const std::function<void()> &fn) {
    try {
      fn();
    } catch (const Error &e) {
      return e.kind();
    }
    return ErrorKind::kUsage;
  };
  opts.components = 10;
  EXPECT_EQ(kind([&] { TrainGmm(Eigen::MatrixXd::Zero(5, 2), opts); }), ErrorKind::kInput);
  EXPECT_EQ(kind([&] { GmmLogLikelihood(m, Eigen::MatrixXd::Zero(5, 2)); }), ErrorKind::kInput);
  EXPECT_EQ(kind([&] { ReadGmm(dir / "none.gmm"); }), ErrorKind::kIo);
}

TEST(Gmm, FloatScalarTracksDouble) {
  Rng rng(9);
  Eigen::MatrixXd means(2, 3);
  means << -2, 0, 2, 2, 0, -2;
  const Eigen::MatrixXd x = Mixture(rng, 2000, means, 0.8);
  GmmTrainOptions opts;
  opts.components = 2;
  const Gmm d = TrainGmm(x, opts);
  const GmmModel<float> f = TrainGmm(x.cast<float>(), opts);
  EXPECT_LT((f.means.cast<double>() - d.means).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_NEAR(GmmLogLikelihood(f, x.cast<float>()), GmmLogLikelihood(d, x), 1e-3);
}

TEST(Gmm, DegenerateDataStaysFinite) {
  // Many identical rows force empty components and the variance floor.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(200, 2);
  x.bottomRows(2).setConstant(1.0);
  GmmTrainOptions opts;
  opts.components = 8;
  GmmTrainTrace trace;
  const Gmm m = TrainGmm(x, opts, &trace);
  EXPECT_NO_THROW(ValidateGmm(m));
  EXPECT_TRUE(std::isfinite(GmmLogLikelihood(m, x)));
}

}  // namespace
}  // namespace genuin
