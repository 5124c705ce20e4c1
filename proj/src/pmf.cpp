// genuin/pmf.cpp

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

#include "genuin/pmf.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "genuin/error.hpp"
#include "io_util.hpp"

namespace genuin {

namespace {

constexpr char kPmfMagic[4] = {'G', 'P', 'M', 'F'};
constexpr unsigned char kPmfVersion = 1;

bool Retained(bool speech, SampleSelection keep) {
  switch (keep) {
    case SampleSelection::kAll: return true;
    case SampleSelection::kSpeech: return speech;
    case SampleSelection::kNonSpeech: return !speech;
  }
  return true;
}

void CheckGrid(int bits) {
  if (bits < 1 || bits > kMaxBits)
    throw Error(ErrorKind::kRange, "bit depth " + std::to_string(bits) + " out of range");
}

}  // namespace

Histogram::Histogram(int bits) : bits_(bits) {
  CheckGrid(bits);
  counts_.assign(std::size_t{1} << bits, 0);
}

void Histogram::Add(const Waveform &w) {
  if (w.bits != bits_)
    throw Error(ErrorKind::kInput, "waveform grid does not match histogram grid");
  for (AmplitudeIndex k : w.samples) {
    if (k < 1 || k > counts_.size())
      throw Error(ErrorKind::kInput, "amplitude index " + std::to_string(k) + " out of range");
    ++counts_[k - 1];
  }
  total_ += w.samples.size();
}

void Histogram::Add(const Waveform &w, const VadMask &mask, SampleSelection keep) {
  if (keep == SampleSelection::kAll) return Add(w);
  if (w.bits != bits_)
    throw Error(ErrorKind::kInput, "waveform grid does not match histogram grid");
  if (mask.size() != w.size())
    throw Error(ErrorKind::kInput, "VAD mask length " + std::to_string(mask.size()) +
                                       " does not match waveform length " +
                                       std::to_string(w.size()));
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    if (!Retained(mask.speech[n], keep)) continue;
    const AmplitudeIndex k = w.samples[n];
    if (k < 1 || k > counts_.size())
      throw Error(ErrorKind::kInput, "amplitude index " + std::to_string(k) + " out of range");
    ++counts_[k - 1];
    ++total_;
  }
}

void Histogram::Merge(const Histogram &other) {
  if (other.bits_ != bits_) throw Error(ErrorKind::kInput, "histogram grids differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

Pmf Histogram::ToPmf() const {
  if (total_ == 0) throw Error(ErrorKind::kEstimation, "no samples retained for PMF estimation");
  Pmf p;
  p.bits = bits_;
  p.total_count = total_;
  p.mass.resize(static_cast<Eigen::Index>(counts_.size()));
  const double denom = static_cast<double>(total_);
  for (std::size_t i = 0; i < counts_.size(); ++i)
    p.mass(static_cast<Eigen::Index>(i)) = static_cast<double>(counts_[i]) / denom;
  return p;
}

Pmf EstimatePmf(std::span<const Waveform> waveforms, std::span<const VadMask> masks,
                SampleSelection keep) {
  if (waveforms.empty()) throw Error(ErrorKind::kEstimation, "no waveforms for PMF estimation");
  if (!masks.empty() && masks.size() != waveforms.size())
    throw Error(ErrorKind::kInput, "need one VAD mask per waveform");
  if (masks.empty() && keep != SampleSelection::kAll)
    throw Error(ErrorKind::kInput, "speech/non-speech selection requires VAD masks");
  Histogram h(waveforms.front().bits);
  for (std::size_t i = 0; i < waveforms.size(); ++i) {
    if (masks.empty())
      h.Add(waveforms[i]);
    else
      h.Add(waveforms[i], masks[i], keep);
  }
  return h.ToPmf();
}

Pmf EstimatePmf(const Waveform &w) { return EstimatePmf(std::span<const Waveform>(&w, 1)); }

void ValidatePmf(const Pmf &p) {
  CheckGrid(p.bits);
  if (p.mass.size() != (Eigen::Index{1} << p.bits))
    throw Error(ErrorKind::kInput, "PMF length does not match its grid");
  if ((p.mass.array() < 0.0).any() || !p.mass.allFinite())
    throw Error(ErrorKind::kInput, "PMF has a negative or non-finite entry");
  const double total = p.mass.sum();
  if (std::abs(total - 1.0) > 1e-9)
    throw Error(ErrorKind::kInput, "PMF sums to " + detail::FormatDouble(total));
}

Cdf CdfFromPmf(const Pmf &p) {
  ValidatePmf(p);
  Cdf c;
  c.bits = p.bits;
  c.cum.resize(p.mass.size());
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < p.mass.size(); ++i) {
    const double x = p.mass(i);
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
    c.cum(i) = sum + comp;
  }
  // Rounding of the compensated total can leave a one-ulp dip; keep the
  // sequence non-decreasing.
  for (Eigen::Index i = 1; i < c.cum.size(); ++i)
    if (c.cum(i) < c.cum(i - 1)) c.cum(i) = c.cum(i - 1);
  return c;
}

ExtendedCdf ExtendCdf(const Pmf &p, int extra_bits, std::uint64_t level_cap) {
  if (extra_bits < 0) throw Error(ErrorKind::kRange, "extra bits must be non-negative");
  const Cdf base = CdfFromPmf(p);
  ExtendedCdf e;
  e.base_bits = p.bits;
  e.extra_bits = extra_bits;
  if (extra_bits == 0) {
    e.cum = base.cum;
    return e;
  }
  if (p.bits + extra_bits > 62 || (std::uint64_t{1} << (p.bits + extra_bits)) > level_cap)
    throw Error(ErrorKind::kCapacity,
                "extended CDF with " + std::to_string(p.bits + extra_bits) +
                    " bits exceeds the level cap of " + std::to_string(level_cap));
  const std::uint64_t levels = std::uint64_t{1} << (p.bits + extra_bits);
  e.cum.resize(static_cast<Eigen::Index>(levels));
  for (std::uint64_t m = 1; m <= levels; ++m)
    e.cum(static_cast<Eigen::Index>(m) - 1) = ExtendedLevel(p, base, m, extra_bits);
  return e;
}

double TvDistance(const Pmf &a, const Pmf &b) {
  if (a.bits != b.bits || a.mass.size() != b.mass.size())
    throw Error(ErrorKind::kInput, "PMFs live on different grids");
  return 0.5 * (a.mass - b.mass).cwiseAbs().sum();
}

void WritePmfCsv(const std::filesystem::path &path, const Pmf &p) {
  ValidatePmf(p);
  std::ostringstream os;
  os << "index,probability\n";
  for (Eigen::Index i = 0; i < p.mass.size(); ++i)
    if (p.mass(i) != 0.0) os << (i + 1) << ',' << detail::FormatDouble(p.mass(i)) << '\n';
  detail::AtomicWrite(path, os.str());
}

Pmf ReadPmfCsv(const std::filesystem::path &path, int bits) {
  CheckGrid(bits);
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || detail::StripCr(line) != "index,probability")
    throw Error(ErrorKind::kFormat, path.string() + ": expected header 'index,probability'");
  Pmf p;
  p.bits = bits;
  p.mass = Eigen::VectorXd::Zero(Eigen::Index{1} << bits);
  const std::string where = path.string();
  while (std::getline(in, line)) {
    const auto row = detail::StripCr(line);
    if (row.empty()) continue;
    const auto cols = detail::SplitCsv(row);
    if (cols.size() != 2) throw Error(ErrorKind::kFormat, where + ": expected 2 columns");
    const auto k = detail::ParseInt<std::uint64_t>(cols[0], where);
    if (k < 1 || k > static_cast<std::uint64_t>(p.mass.size()))
      throw Error(ErrorKind::kFormat, where + ": index " + std::to_string(k) + " out of range");
    p.mass(static_cast<Eigen::Index>(k) - 1) = detail::ParseDouble(cols[1], where);
  }
  ValidatePmf(p);
  return p;
}

void WritePmfBinary(const std::filesystem::path &path, const Pmf &p) {
  ValidatePmf(p);
  std::ostringstream os;
  os.write(kPmfMagic, 4);
  os.put(static_cast<char>(kPmfVersion));
  os.put(static_cast<char>(p.bits));
  for (Eigen::Index i = 0; i < p.mass.size(); ++i) detail::PutLe64(os, p.mass(i));
  detail::AtomicWrite(path, os.str());
}

Pmf ReadPmfBinary(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  char head[6];
  if (!in.read(head, 6)) throw Error(ErrorKind::kIo, path.string() + ": truncated header");
  if (std::memcmp(head, kPmfMagic, 4) != 0)
    throw Error(ErrorKind::kFormat, path.string() + ": missing GPMF magic");
  if (static_cast<unsigned char>(head[4]) != kPmfVersion)
    throw Error(ErrorKind::kFormat, path.string() + ": unsupported version " +
                                        std::to_string(static_cast<unsigned char>(head[4])));
  Pmf p;
  p.bits = static_cast<unsigned char>(head[5]);
  CheckGrid(p.bits);
  p.mass.resize(Eigen::Index{1} << p.bits);
  for (Eigen::Index i = 0; i < p.mass.size(); ++i) p.mass(i) = detail::GetLe64(in);
  ValidatePmf(p);
  return p;
}

Pmf LoadPmf(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  char head[4] = {};
  in.read(head, 4);
  if (in.gcount() == 4 && std::memcmp(head, kPmfMagic, 4) == 0) return ReadPmfBinary(path);
  return ReadPmfCsv(path);
}

void SavePmf(const std::filesystem::path &path, const Pmf &p) {
  if (path.extension() == ".csv")
    WritePmfCsv(path, p);
  else
    WritePmfBinary(path, p);
}

}  // namespace genuin
