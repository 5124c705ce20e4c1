// genuin/waveform.cpp

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

#include "genuin/waveform.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "genuin/error.hpp"

namespace genuin {

namespace {

std::uint32_t LoadU32(const unsigned char *p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
         (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

std::uint16_t LoadU16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string *out, std::uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>(v >> 8));
}

void CheckBits(int bits) {
  if (bits < 1 || bits > kMaxBits)
    throw Error(ErrorKind::kRange, "bit depth " + std::to_string(bits) + " outside 1.." +
                                       std::to_string(kMaxBits));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

void ValidateWaveform(const Waveform &w) {
  CheckBits(w.bits);
  if (w.samples.empty()) throw Error(ErrorKind::kInput, "empty waveform");
  if (w.sample_rate <= 0)
    throw Error(ErrorKind::kInput, "sample rate must be positive");
  const AmplitudeIndex top = w.levels();
  for (AmplitudeIndex k : w.samples) {
    if (k < 1 || k > top)
      throw Error(ErrorKind::kInput, "amplitude index " + std::to_string(k) +
                                         " outside 1.." + std::to_string(top));
  }
}

AmplitudeIndex AmpToIndex(double s, int bits) {
  CheckBits(bits);
  if (!(s > -1.0 && s <= 1.0))
    throw Error(ErrorKind::kRange, "amplitude " + std::to_string(s) + " outside (-1, 1]");
  const double scaled = std::ceil((s + 1.0) * std::ldexp(1.0, bits - 1));
  const double top = std::ldexp(1.0, bits);
  if (scaled < 1.0) return 1;
  if (scaled > top) return static_cast<AmplitudeIndex>(top);
  return static_cast<AmplitudeIndex>(scaled);
}

double IndexToAmp(AmplitudeIndex k, int bits) {
  CheckBits(bits);
  if (k < 1 || k > (AmplitudeIndex{1} << bits))
    throw Error(ErrorKind::kRange, "amplitude index " + std::to_string(k) + " out of range");
  return -1.0 + std::ldexp(static_cast<double>(k), -(bits - 1));
}

std::vector<double> Amplitudes(const Waveform &w) {
  CheckBits(w.bits);
  const double step = std::ldexp(1.0, -(w.bits - 1));
  std::vector<double> out(w.samples.size());
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = -1.0 + static_cast<double>(w.samples[n]) * step;
  return out;
}

AmplitudeIndex PcmToIndex(std::int16_t code) {
  return static_cast<AmplitudeIndex>(static_cast<std::int32_t>(code) + 32769);
}

std::int16_t IndexToPcm(AmplitudeIndex k) {
  if (k < 1 || k > 65536)
    throw Error(ErrorKind::kRange, "amplitude index " + std::to_string(k) + " out of range");
  return static_cast<std::int16_t>(static_cast<std::int32_t>(k) - 32769);
}

Waveform ReadWav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12) throw Error(ErrorKind::kIo, where + "truncated RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(ErrorKind::kFormat, where + "not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t channels = 0, bits_per_sample = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    const std::uint32_t chunk_size = LoadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + chunk_size > bytes.size())
        throw Error(ErrorKind::kIo, where + "truncated fmt chunk");
      const unsigned char *f = bytes.data() + body;
      std::uint16_t format = LoadU16(f);
      channels = LoadU16(f + 2);
      rate = LoadU32(f + 4);
      bits_per_sample = LoadU16(f + 14);
      if (format == kFormatExtensible && chunk_size >= 40) format = LoadU16(f + 24);
      if (format != kFormatPcm)
        throw Error(ErrorKind::kFormat, where + "unsupported format tag " + std::to_string(format) +
                                            " (only PCM)");
      if (channels != 1)
        throw Error(ErrorKind::kFormat, where + "unsupported channel count " +
                                            std::to_string(channels) + " (only mono)");
      if (bits_per_sample != 16)
        throw Error(ErrorKind::kFormat, where + "unsupported bits per sample " +
                                            std::to_string(bits_per_sample) + " (only 16)");
      if (rate == 0) throw Error(ErrorKind::kFormat, where + "zero sample rate");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw Error(ErrorKind::kFormat, where + "data chunk before fmt chunk");
      if (body + chunk_size > bytes.size())
        throw Error(ErrorKind::kIo, where + "truncated data chunk");
      if (chunk_size % 2 != 0)
        throw Error(ErrorKind::kIo, where + "data chunk holds a partial sample");
      if (chunk_size == 0) throw Error(ErrorKind::kInput, where + "empty waveform");
      Waveform w;
      w.sample_rate = static_cast<int>(rate);
      w.source_path = path.string();
      w.samples.resize(chunk_size / 2);
      const unsigned char *d = bytes.data() + body;
      for (std::size_t n = 0; n < w.samples.size(); ++n)
        w.samples[n] = PcmToIndex(static_cast<std::int16_t>(LoadU16(d + 2 * n)));
      return w;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_fmt) throw Error(ErrorKind::kIo, where + "missing fmt chunk");
  throw Error(ErrorKind::kIo, where + "missing data chunk");
}

void WriteWav(const std::filesystem::path &path, const Waveform &w) {
  ValidateWaveform(w);
  if (w.bits != kStorageBits)
    throw Error(ErrorKind::kFormat, "only 16-bit waveforms can be written, got " +
                                        std::to_string(w.bits));
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, kFormatPcm);
  PutU16(&out, 1);
  PutU32(&out, static_cast<std::uint32_t>(w.sample_rate));
  PutU32(&out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, data_bytes);
  for (AmplitudeIndex k : w.samples) PutU16(&out, static_cast<std::uint16_t>(IndexToPcm(k)));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace genuin
