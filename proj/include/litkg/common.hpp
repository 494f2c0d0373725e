// Copyright 2026 The litkg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LITKG_COMMON_HPP
#define LITKG_COMMON_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "litkg/error.hpp"

namespace litkg {

inline constexpr std::string_view kToolName = "litkg";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// 64-bit FNV-1a. Used for input fingerprints and fixture file names, never
/// for anything security related.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("read failure: " + path);
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open output file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failure: " + path);
}

/// Shortest round-trippable text for a double, `%.17g`.
/// Shortest text that reads back to the same double, or `significant` digits.
inline std::string format_double(double v, int significant = 0) {
  char buf[64];
  if (significant <= 0) return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

/// Key/value record embedded at the top of every output file. Keys are
/// kept sorted so the rendered form is stable.
struct Provenance {
  std::map<std::string, std::string> fields;

  Provenance() {
    fields["tool"] = std::string(kToolName) + "/" + std::string(kToolVersion);
  }

  Provenance& set(const std::string& key, std::string value) {
    fields[key] = std::move(value);
    return *this;
  }

  /// Space separated `key=value` pairs; values containing spaces are quoted.
  std::string render() const {
    std::string out;
    for (const auto& [k, v] : fields) {
      if (!out.empty()) out += ' ';
      out += k;
      out += '=';
      if (v.find_first_of(" \t\"") != std::string::npos) {
        out += '"';
        for (char c : v) {
          if (c == '"' || c == '\\') out += '\\';
          out += c;
        }
        out += '"';
      } else {
        out += v;
      }
    }
    return out;
  }
};

}  // namespace litkg

#endif  // LITKG_COMMON_HPP
