// genuin/gmm.hpp

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

#ifndef GENUIN_GMM_HPP_
#define GENUIN_GMM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <future>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "genuin/error.hpp"
#include "genuin/features.hpp"
#include "genuin/rng.hpp"

namespace genuin {

// Diagonal-covariance Gaussian mixture. Row k of `means` and `variances`
// belongs to component k.
template <typename Scalar>
struct GmmModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector weights;
  Matrix means;
  Matrix variances;
  std::string provenance = "O";  // O, G or R
  std::string fingerprint = "none";

  Eigen::Index num_components() const { return weights.size(); }
  Eigen::Index dim() const { return means.cols(); }
};

using Gmm = GmmModel<double>;

struct GmmTrainOptions {
  int components = 512;
  int iterations = 10;
  double rel_tolerance = 1e-5;
  // Per-dimension variance floor as a fraction of the global variance.
  double variance_floor_scale = 1e-4;
  std::uint64_t seed = 0;
  // Rows per E-step block. Sufficient statistics are summed block by block in
  // block order, so results do not depend on `threads`.
  Eigen::Index block_rows = 4096;
  int threads = 1;
};

struct GmmTrainTrace {
  std::vector<double> loglik;  // total data log-likelihood before each M-step, then final
  int reseeds = 0;
};

inline constexpr double kAbsoluteVarianceFloor = 1e-10;

namespace internal {

// log N(x_t; mu_k, var_k) + log w_k for every frame t and component k.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> WeightedLogDensities(
    const GmmModel<Scalar> &m, const Eigen::MatrixBase<Derived> &x) {
  using Matrix = typename GmmModel<Scalar>::Matrix;
  using Vector = typename GmmModel<Scalar>::Vector;
  const Matrix inv_var = m.variances.cwiseInverse();
  const Matrix mean_scaled = m.means.cwiseProduct(inv_var);
  const Scalar log_two_pi = std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
  Vector constant(m.num_components());
  for (Eigen::Index k = 0; k < m.num_components(); ++k) {
    constant(k) = std::log(m.weights(k)) -
                  Scalar(0.5) * (m.variances.row(k).array().log().sum() +
                                 m.dim() * log_two_pi +
                                 m.means.row(k).dot(mean_scaled.row(k)));
  }
  Matrix out = x.cwiseAbs2() * inv_var.transpose();
  out *= Scalar(-0.5);
  out.noalias() += x * mean_scaled.transpose();
  out.rowwise() += constant.transpose();
  return out;
}

// Row-wise log-sum-exp.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> LogSumExpRows(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &a) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mx = a.rowwise().maxCoeff();
  return mx + ((a.colwise() - mx).array().exp().rowwise().sum().log()).matrix();
}

template <typename Scalar>
struct BlockStats {
  using Matrix = typename GmmModel<Scalar>::Matrix;
  using Vector = typename GmmModel<Scalar>::Vector;
  Vector occupancy;
  Matrix first;
  Matrix second;
  double loglik = 0.0;
  // Per component: best responsibility seen in this block and its row.
  Vector best_resp;
  std::vector<Eigen::Index> best_row;
};

template <typename Scalar, typename Derived>
BlockStats<Scalar> AccumulateBlock(const GmmModel<Scalar> &m, const Eigen::MatrixBase<Derived> &x,
                                   Eigen::Index row_offset) {
  using Matrix = typename GmmModel<Scalar>::Matrix;
  const Matrix logp = WeightedLogDensities(m, x);
  const auto lse = LogSumExpRows<Scalar>(logp);
  const Matrix resp = (logp.colwise() - lse).array().exp().matrix();
  BlockStats<Scalar> s;
  s.occupancy = resp.colwise().sum().transpose();
  s.first = resp.transpose() * x;
  s.second = resp.transpose() * x.cwiseAbs2();
  s.loglik = static_cast<double>(lse.sum());
  s.best_resp.resize(m.num_components());
  s.best_row.resize(static_cast<std::size_t>(m.num_components()));
  for (Eigen::Index k = 0; k < m.num_components(); ++k) {
    Eigen::Index r = 0;
    s.best_resp(k) = resp.col(k).maxCoeff(&r);
    s.best_row[static_cast<std::size_t>(k)] = r + row_offset;
  }
  return s;
}

}  // namespace internal

// Mean per-frame log-likelihood. Throws Error(kInput) on a width mismatch.
template <typename Scalar, typename Derived>
Scalar GmmLogLikelihood(const GmmModel<Scalar> &m, const Eigen::MatrixBase<Derived> &x) {
  if (x.cols() != m.dim())
    throw Error(ErrorKind::kInput, "feature width " + std::to_string(x.cols()) +
                                       " does not match model width " + std::to_string(m.dim()));
  if (x.rows() == 0) throw Error(ErrorKind::kInput, "no frames to score");
  const auto logp = internal::WeightedLogDensities(m, x.template cast<Scalar>());
  return internal::LogSumExpRows<Scalar>(logp).mean();
}

// EM from a k-means++ style seeding. Requires rows >= components >= 1.
template <typename Derived>
GmmModel<typename Derived::Scalar> TrainGmm(const Eigen::MatrixBase<Derived> &data,
                                            const GmmTrainOptions &opts,
                                            GmmTrainTrace *trace = nullptr) {
  using Scalar = typename Derived::Scalar;
  using Model = GmmModel<Scalar>;
  using Matrix = typename Model::Matrix;
  using Vector = typename Model::Vector;

  const Eigen::Index n = data.rows();
  const Eigen::Index dim = data.cols();
  const Eigen::Index k_count = opts.components;
  if (k_count < 1) throw Error(ErrorKind::kInput, "GMM needs at least one component");
  if (n < k_count)
    throw Error(ErrorKind::kInput, "GMM training has " + std::to_string(n) + " rows for " +
                                       std::to_string(k_count) + " components");
  if (dim < 1) throw Error(ErrorKind::kInput, "GMM training data has no columns");
  if (!data.allFinite()) throw Error(ErrorKind::kInput, "GMM training data is not finite");
  if (opts.iterations < 1) throw Error(ErrorKind::kRange, "GMM needs at least one iteration");

  const Matrix x = data;
  const Vector global_mean = x.colwise().mean().transpose();
  const Vector global_var =
      ((x.rowwise() - global_mean.transpose()).cwiseAbs2().colwise().sum() / Scalar(n))
          .transpose();
  const Vector floor = (global_var * Scalar(opts.variance_floor_scale))
                           .cwiseMax(Scalar(kAbsoluteVarianceFloor));

  // Seeding: first centre uniform, the rest proportional to squared distance
  // from the nearest centre chosen so far.
  Rng rng(opts.seed);
  Model m;
  m.means.resize(k_count, dim);
  m.variances = global_var.cwiseMax(floor).transpose().replicate(k_count, 1);
  m.weights = Vector::Constant(k_count, Scalar(1) / Scalar(k_count));
  m.means.row(0) = x.row(static_cast<Eigen::Index>(UniformBelow(rng, static_cast<std::uint64_t>(n))));
  Vector nearest = (x.rowwise() - m.means.row(0)).cwiseAbs2().rowwise().sum();
  for (Eigen::Index k = 1; k < k_count; ++k) {
    const double total = static_cast<double>(nearest.sum());
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double target = UniformUnit(rng) * total;
      double run = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        run += static_cast<double>(nearest(i));
        if (run > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(UniformBelow(rng, static_cast<std::uint64_t>(n)));
    }
    m.means.row(k) = x.row(pick);
    nearest = nearest.cwiseMin((x.rowwise() - m.means.row(k)).cwiseAbs2().rowwise().sum());
  }

  const Eigen::Index block = std::max<Eigen::Index>(opts.block_rows, 1);
  const Eigen::Index num_blocks = (n + block - 1) / block;
  auto e_step = [&](const Model &model) {
    std::vector<internal::BlockStats<Scalar>> parts(static_cast<std::size_t>(num_blocks));
    auto run_block = [&](Eigen::Index b) {
      const Eigen::Index start = b * block;
      const Eigen::Index rows = std::min(block, n - start);
      parts[static_cast<std::size_t>(b)] =
          internal::AccumulateBlock(model, x.middleRows(start, rows), start);
    };
    if (opts.threads <= 1 || num_blocks == 1) {
      for (Eigen::Index b = 0; b < num_blocks; ++b) run_block(b);
    } else {
      std::vector<std::future<void>> jobs;
      const Eigen::Index stride = opts.threads;
      for (Eigen::Index t = 0; t < stride; ++t) {
        jobs.push_back(std::async(std::launch::async, [&, t] {
          for (Eigen::Index b = t; b < num_blocks; b += stride) run_block(b);
        }));
      }
      for (auto &j : jobs) j.get();
    }
    internal::BlockStats<Scalar> total = std::move(parts.front());
    for (std::size_t b = 1; b < parts.size(); ++b) {
      total.occupancy += parts[b].occupancy;
      total.first += parts[b].first;
      total.second += parts[b].second;
      total.loglik += parts[b].loglik;
      for (Eigen::Index k = 0; k < k_count; ++k) {
        if (parts[b].best_resp(k) > total.best_resp(k)) {
          total.best_resp(k) = parts[b].best_resp(k);
          total.best_row[static_cast<std::size_t>(k)] = parts[b].best_row[static_cast<std::size_t>(k)];
        }
      }
    }
    return total;
  };

  double previous = -std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 0; it < opts.iterations; ++it) {
    const auto stats = e_step(m);
    if (trace) trace->loglik.push_back(stats.loglik);
    if (it > 0 && stats.loglik - previous <= opts.rel_tolerance * std::abs(previous)) {
      converged = true;
      break;
    }
    previous = stats.loglik;

    for (Eigen::Index k = 0; k < k_count; ++k) {
      const Scalar occ = stats.occupancy(k);
      if (!(occ > Scalar(1e-6))) {
        // Empty component: restart it on the datum it explains best.
        m.means.row(k) = x.row(stats.best_row[static_cast<std::size_t>(k)]);
        m.variances.row(k) = global_var.cwiseMax(floor).transpose();
        m.weights(k) = Scalar(1) / Scalar(n);
        if (trace) ++trace->reseeds;
        continue;
      }
      m.weights(k) = occ / Scalar(n);
      m.means.row(k) = stats.first.row(k) / occ;
      m.variances.row(k) = (stats.second.row(k) / occ - m.means.row(k).cwiseAbs2())
                               .cwiseMax(floor.transpose());
    }
    m.weights /= m.weights.sum();
  }
  if (trace && !converged) trace->loglik.push_back(e_step(m).loglik);
  return m;
}

// genuine minus spoof mean per-frame log-likelihood; higher is more genuine.
double ScoreTrial(const Gmm &genuine, const Gmm &spoof, const FeatureMatrix &x);

// Text header "GGMM1 <K> <F> <provenance> <fingerprint>\n" followed by
// little-endian doubles: weights, then means and variances row-major.
void WriteGmm(const std::filesystem::path &path, const Gmm &m);
Gmm ReadGmm(const std::filesystem::path &path);

// Throws Error(kInput) if weights do not sum to one or a variance is not
// positive.
void ValidateGmm(const Gmm &m);

}  // namespace genuin

#endif  // GENUIN_GMM_HPP_
