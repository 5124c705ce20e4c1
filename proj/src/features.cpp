// genuin/features.cpp

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

#include "genuin/features.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "genuin/error.hpp"
#include "io_util.hpp"

namespace genuin {

namespace {

class LfccExtractor : public FeatureExtractor {
 public:
  explicit LfccExtractor(LfccConfig cfg) : cfg_(cfg) {}
  std::string id() const override { return "lfcc"; }
  std::string Fingerprint(int sample_rate) const override { return cfg_.Fingerprint(sample_rate); }
  FeatureMatrix Extract(const Waveform &w) const override { return Lfcc(w, cfg_); }

 private:
  LfccConfig cfg_;
};

Eigen::VectorXd HammingWindow(std::size_t n) {
  Eigen::VectorXd win(static_cast<Eigen::Index>(n));
  if (n == 1) {
    win(0) = 1.0;
    return win;
  }
  for (std::size_t i = 0; i < n; ++i)
    win(static_cast<Eigen::Index>(i)) =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(n - 1));
  return win;
}

std::size_t NumFrames(std::size_t num_samples, std::size_t len, std::size_t hop) {
  if (num_samples < len) return 0;
  return 1 + (num_samples - len) / hop;
}

}  // namespace

std::string LfccConfig::Fingerprint(int sample_rate) const {
  std::ostringstream os;
  os << "lfcc:sr=" << sample_rate << ":win=" << detail::FormatDouble(frame_len_ms)
     << ":hop=" << detail::FormatDouble(frame_hop_ms) << ":nfft=" << fft_size
     << ":filt=" << num_filters << ":ceps=" << num_ceps << ":e=" << include_energy
     << ":dw=" << (append_deltas ? delta_window : 0);
  return os.str();
}

std::size_t FrameLength(const LfccConfig &cfg, int sample_rate) {
  return static_cast<std::size_t>(std::lround(cfg.frame_len_ms * 1e-3 * sample_rate));
}

std::size_t FrameHop(const LfccConfig &cfg, int sample_rate) {
  return static_cast<std::size_t>(std::lround(cfg.frame_hop_ms * 1e-3 * sample_rate));
}

void ValidateLfccConfig(const LfccConfig &cfg, int sample_rate) {
  if (sample_rate <= 0) throw Error(ErrorKind::kInput, "sample rate must be positive");
  const std::size_t len = FrameLength(cfg, sample_rate);
  const std::size_t hop = FrameHop(cfg, sample_rate);
  if (len < 1 || hop < 1) throw Error(ErrorKind::kRange, "LFCC frame length and hop must be >= 1 sample");
  if (cfg.fft_size < 2 || (cfg.fft_size & (cfg.fft_size - 1)) != 0)
    throw Error(ErrorKind::kRange, "fft_size must be a power of two");
  if (static_cast<std::size_t>(cfg.fft_size) < len)
    throw Error(ErrorKind::kRange, "fft_size " + std::to_string(cfg.fft_size) +
                                       " is shorter than the frame (" + std::to_string(len) + ")");
  if (cfg.num_filters < 1) throw Error(ErrorKind::kRange, "num_filters must be >= 1");
  if (cfg.num_ceps < 1 || cfg.num_ceps > cfg.num_filters)
    throw Error(ErrorKind::kRange, "num_ceps must lie in 1..num_filters");
  if (cfg.delta_window < 1) throw Error(ErrorKind::kRange, "delta_window must be >= 1");
}

Eigen::MatrixXd LinearFilterbank(int num_filters, int fft_size, int sample_rate) {
  const int bins = fft_size / 2 + 1;
  const double nyquist = 0.5 * sample_rate;
  const double spacing = nyquist / (num_filters + 1);
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(num_filters, bins);
  for (int j = 0; j < num_filters; ++j) {
    const double lo = spacing * j, mid = spacing * (j + 1), hi = spacing * (j + 2);
    for (int b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * sample_rate / fft_size;
      if (f > lo && f < hi) fb(j, b) = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
    }
  }
  return fb;
}

Eigen::MatrixXd DctMatrix(int num_out, int num_in) {
  Eigen::MatrixXd dct(num_out, num_in);
  for (int n = 0; n < num_out; ++n) {
    const double scale = std::sqrt((n == 0 ? 1.0 : 2.0) / num_in);
    for (int m = 0; m < num_in; ++m)
      dct(n, m) = scale * std::cos(std::numbers::pi * n * (m + 0.5) / num_in);
  }
  return dct;
}

Eigen::MatrixXd FilterbankEnergies(const Waveform &w, const LfccConfig &cfg) {
  ValidateWaveform(w);
  ValidateLfccConfig(cfg, w.sample_rate);
  const std::size_t len = FrameLength(cfg, w.sample_rate);
  const std::size_t hop = FrameHop(cfg, w.sample_rate);
  const std::size_t frames = NumFrames(w.size(), len, hop);
  if (frames == 0)
    throw Error(ErrorKind::kInput, "waveform of " + std::to_string(w.size()) +
                                       " samples is shorter than one feature frame (" +
                                       std::to_string(len) + ")");
  const std::vector<double> x = Amplitudes(w);
  const Eigen::VectorXd win = HammingWindow(len);
  const Eigen::MatrixXd fb = LinearFilterbank(cfg.num_filters, cfg.fft_size, w.sample_rate);
  const int bins = cfg.fft_size / 2 + 1;

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buf(static_cast<std::size_t>(cfg.fft_size), 0.0);
  std::vector<std::complex<double>> spec;
  Eigen::VectorXd power(bins);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(frames), cfg.num_filters);
  for (std::size_t t = 0; t < frames; ++t) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < len; ++i)
      buf[i] = x[t * hop + i] * win(static_cast<Eigen::Index>(i));
    fft.fwd(spec, buf);
    for (int b = 0; b < bins; ++b) power(b) = std::norm(spec[static_cast<std::size_t>(b)]);
    out.row(static_cast<Eigen::Index>(t)) = (fb * power).transpose();
  }
  return out;
}

Eigen::MatrixXd AppendDeltas(const Eigen::MatrixXd &m, int window) {
  if (window < 1) throw Error(ErrorKind::kRange, "delta window must be >= 1");
  const Eigen::Index rows = m.rows();
  if (rows < 1) throw Error(ErrorKind::kInput, "delta computation needs at least one frame");
  double norm = 0.0;
  for (int n = 1; n <= window; ++n) norm += 2.0 * n * n;
  auto delta = [&](const Eigen::MatrixXd &c) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, c.cols());
    for (Eigen::Index t = 0; t < rows; ++t) {
      for (int n = 1; n <= window; ++n) {
        const Eigen::Index ahead = std::min<Eigen::Index>(t + n, rows - 1);
        const Eigen::Index behind = std::max<Eigen::Index>(t - n, 0);
        d.row(t) += n * (c.row(ahead) - c.row(behind));
      }
    }
    return Eigen::MatrixXd(d / norm);
  };
  const Eigen::MatrixXd d1 = delta(m);
  const Eigen::MatrixXd d2 = delta(d1);
  Eigen::MatrixXd out(rows, 3 * m.cols());
  out << m, d1, d2;
  return out;
}

FeatureMatrix Lfcc(const Waveform &w, const LfccConfig &cfg) {
  const Eigen::MatrixXd energies = FilterbankEnergies(w, cfg);
  const Eigen::MatrixXd log_fb = energies.array().max(kLogFloor).log().matrix();
  const Eigen::MatrixXd ceps = log_fb * DctMatrix(cfg.num_ceps, cfg.num_filters).transpose();

  Eigen::MatrixXd base = ceps;
  if (cfg.include_energy) {
    const std::size_t len = FrameLength(cfg, w.sample_rate);
    const std::size_t hop = FrameHop(cfg, w.sample_rate);
    const std::vector<double> x = Amplitudes(w);
    Eigen::VectorXd log_energy(ceps.rows());
    for (Eigen::Index t = 0; t < ceps.rows(); ++t) {
      const Eigen::Map<const Eigen::VectorXd> frame(x.data() + t * hop,
                                                    static_cast<Eigen::Index>(len));
      log_energy(t) = std::log(std::max(frame.squaredNorm(), kLogFloor));
    }
    base.resize(ceps.rows(), ceps.cols() + 1);
    base << log_energy, ceps;
  }

  FeatureMatrix fm;
  fm.frames = cfg.append_deltas ? AppendDeltas(base, cfg.delta_window) : base;
  fm.fingerprint = cfg.Fingerprint(w.sample_rate);
  return fm;
}

std::unique_ptr<FeatureExtractor> MakeExtractor(const std::string &id, const LfccConfig &lfcc) {
  if (id == "lfcc") return std::make_unique<LfccExtractor>(lfcc);
  if (id == "cqcc")
    throw Error(ErrorKind::kConfig, "feature extractor 'cqcc' is not available in this build");
  throw Error(ErrorKind::kConfig, "unknown feature extractor '" + id + "'");
}

void WriteFeatures(const std::filesystem::path &path, const FeatureMatrix &m) {
  if (m.fingerprint.empty() || m.fingerprint.find_first_of(" \n\t") != std::string::npos)
    throw Error(ErrorKind::kFormat, "feature fingerprint must be a non-empty token");
  std::ostringstream os;
  os << "GFEAT1 " << m.fingerprint << ' ' << m.frames.rows() << ' ' << m.frames.cols() << '\n';
  for (Eigen::Index t = 0; t < m.frames.rows(); ++t)
    for (Eigen::Index f = 0; f < m.frames.cols(); ++f)
      detail::PutLe32f(os, static_cast<float>(m.frames(t, f)));
  detail::AtomicWrite(path, os.str());
}

FeatureMatrix ReadFeatures(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::kIo, path.string() + ": empty file");
  std::istringstream hs(header);
  std::string magic;
  FeatureMatrix m;
  long long rows = -1, cols = -1;
  hs >> magic >> m.fingerprint >> rows >> cols;
  if (magic != "GFEAT1" || !hs || rows < 0 || cols < 0)
    throw Error(ErrorKind::kFormat, path.string() + ": bad feature header");
  m.frames.resize(rows, cols);
  for (Eigen::Index t = 0; t < rows; ++t)
    for (Eigen::Index f = 0; f < cols; ++f) m.frames(t, f) = detail::GetLe32f(in);
  return m;
}

}  // namespace genuin
