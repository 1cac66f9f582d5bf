/*
 * Copyright (C) 2026 The EmbodiKit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EKIT_COMMON_HPP
#define EKIT_COMMON_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ekit {

/// Error raised on contract violations: malformed inputs, schema errors,
/// infeasible requests. The message carries enough context to locate the
/// offending field or entity.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] void fail(const std::string& message);

/// FNV-1a over raw bytes. Stable across platforms; used for shard checksums
/// and seed derivation, not for security.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t state = 1469598103934665603ull);

std::string to_hex(std::uint64_t value);

/// Derives a child seed from a parent seed and a list of string keys.
/// Generation code uses this to give every item an independent, reproducible
/// random stream regardless of iteration order or parallel scheduling.
std::uint64_t derive_seed(std::uint64_t parent,
                          std::initializer_list<std::string_view> keys);

/// Deterministic RNG (splitmix64 core). The standard distributions are
/// implementation-defined, so all sampling helpers are hand-rolled here to
/// keep shards byte-identical across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1).
  double uniform_double();

  /// Uniform double in [lo, hi).
  double uniform_double(double lo, double hi);

  bool bernoulli(double p);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(values[i - 1], values[j]);
    }
  }

  /// k distinct indices drawn uniformly from [0, n), in ascending order.
  /// Requires k <= n.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  template <typename T>
  const T& pick(const std::vector<T>& values) {
    if (values.empty()) fail("Rng::pick on empty vector");
    return values[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(values.size()) - 1))];
  }

 private:
  std::uint64_t state_;
};

enum class LogLevel { Debug, Info, Warn };

/// Minimal logger: human-readable lines at info and above on stderr,
/// optional JSONL sink that also receives debug records.
class Logger {
 public:
  static Logger& instance();

  void set_level(LogLevel level) { level_ = level; }
  void set_jsonl_sink(const std::string& path);

  void log(LogLevel level, std::string_view event, std::string_view detail);

  void debug(std::string_view event, std::string_view detail) { log(LogLevel::Debug, event, detail); }
  void info(std::string_view event, std::string_view detail) { log(LogLevel::Info, event, detail); }
  void warn(std::string_view event, std::string_view detail) { log(LogLevel::Warn, event, detail); }

 private:
  Logger() = default;
  LogLevel level_ = LogLevel::Info;
  std::optional<std::string> jsonl_path_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::string trim(std::string_view text);
std::string lowercase(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);

/// Lowercases, collapses runs of whitespace, and strips punctuation.
/// Used wherever two pieces of surface text must compare as "the same step".
std::string canonical_text(std::string_view text);

/// True if `token` occurs in `text` as a whole word, case-insensitive.
bool contains_word(std::string_view text, std::string_view token);

}  // namespace ekit

#endif  // EKIT_COMMON_HPP
