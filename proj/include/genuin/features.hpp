// genuin/features.hpp

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

#ifndef GENUIN_FEATURES_HPP_
#define GENUIN_FEATURES_HPP_

#include <filesystem>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "genuin/waveform.hpp"

namespace genuin {

struct LfccConfig {
  double frame_len_ms = 20.0;
  double frame_hop_ms = 10.0;
  int fft_size = 512;
  int num_filters = 20;
  int num_ceps = 19;
  bool include_energy = true;
  int delta_window = 2;
  bool append_deltas = true;

  std::string Fingerprint(int sample_rate) const;
};

inline constexpr double kLogFloor = 1e-12;

// T x F frames, one row per analysis frame.
struct FeatureMatrix {
  Eigen::MatrixXd frames;
  std::string fingerprint;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

void ValidateLfccConfig(const LfccConfig &cfg, int sample_rate);

// Frame length and hop in samples at a given rate.
std::size_t FrameLength(const LfccConfig &cfg, int sample_rate);
std::size_t FrameHop(const LfccConfig &cfg, int sample_rate);

// Triangular filters with centres evenly spaced on 0..fs/2, one row per
// filter, one column per non-negative DFT bin.
Eigen::MatrixXd LinearFilterbank(int num_filters, int fft_size, int sample_rate);

// Orthonormal DCT-II, rows are output coefficients.
Eigen::MatrixXd DctMatrix(int num_out, int num_in);

// Hamming-windowed power spectra of every frame pushed through the
// filterbank (T x num_filters), before the log.
Eigen::MatrixXd FilterbankEnergies(const Waveform &w, const LfccConfig &cfg);

// Regression deltas over +-window frames with edge replication, followed by
// deltas of the deltas. Output is [m, delta, delta-delta].
Eigen::MatrixXd AppendDeltas(const Eigen::MatrixXd &m, int window);

// [log-energy,] c0..c(num_ceps-1) per frame, plus deltas when configured.
FeatureMatrix Lfcc(const Waveform &w, const LfccConfig &cfg);

// Seam for alternative front-ends. Only "lfcc" is built in; "cqcc" is a
// recognized id that is not implemented.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string id() const = 0;
  virtual std::string Fingerprint(int sample_rate) const = 0;
  virtual FeatureMatrix Extract(const Waveform &w) const = 0;
};

std::unique_ptr<FeatureExtractor> MakeExtractor(const std::string &id,
                                                const LfccConfig &lfcc = {});

// Cache file: text line "GFEAT1 <fingerprint> <T> <F>\n", then T*F
// little-endian float32 values in row-major order.
void WriteFeatures(const std::filesystem::path &path, const FeatureMatrix &m);
FeatureMatrix ReadFeatures(const std::filesystem::path &path);

}  // namespace genuin

#endif  // GENUIN_FEATURES_HPP_
