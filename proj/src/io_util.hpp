// io_util.hpp (private)

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

#ifndef GENUIN_SRC_IO_UTIL_HPP_
#define GENUIN_SRC_IO_UTIL_HPP_

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "genuin/error.hpp"

namespace genuin::detail {

inline void PutLe64(std::ostream &os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

inline double GetLe64(std::istream &is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char *>(buf), 8))
    throw Error(ErrorKind::kIo, "unexpected end of binary payload");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{buf[i]} << (8 * i);
  return std::bit_cast<double>(bits);
}

inline void PutLe32f(std::ostream &os, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(buf, 4);
}

inline float GetLe32f(std::istream &is) {
  unsigned char buf[4];
  if (!is.read(reinterpret_cast<char *>(buf), 4))
    throw Error(ErrorKind::kIo, "unexpected end of binary payload");
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= std::uint32_t{buf[i]} << (8 * i);
  return std::bit_cast<float>(bits);
}

// Shortest representation that parses back to the same double.
inline std::string FormatDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double ParseDouble(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::kFormat, "bad number '" + std::string(s) + "' in " + std::string(what));
  return v;
}

template <typename Int>
inline Int ParseInt(std::string_view s, std::string_view what) {
  Int v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::kFormat, "bad integer '" + std::string(s) + "' in " + std::string(what));
  return v;
}

inline std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string_view StripCr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

// Writes to a sibling temporary and renames over the target, so concurrent
// readers see either the old or the new file.
void AtomicWrite(const std::filesystem::path &path, const std::string &contents);

// FNV-1a, 64 bit.
inline std::uint64_t Fnv1a(const void *data, std::size_t n,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto *p = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t Fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  return Fnv1a(s.data(), s.size(), h);
}

std::string Hex64(std::uint64_t v);

}  // namespace genuin::detail

#endif  // GENUIN_SRC_IO_UTIL_HPP_
