// Copyright 2026 The grel Authors.
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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace grel {

inline constexpr std::string_view kToolVersion = "grel/0.1.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for an independent stream keyed by `key`. Used so that work
/// split across threads (per caption, per worker, per HIT) stays reproducible
/// regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

/// Seeded generator with platform-independent distributions. The standard
/// <random> distributions are implementation-defined, so only the engine is
/// borrowed from the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi].
  int between(int lo, int hi);
  /// Uniform real in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

std::string read_file(const std::string& path);
/// Writes to a temporary sibling and renames over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

std::string digest_hex(std::string_view bytes);

/// Provenance line written as the first line of every artifact:
///   # grel-artifact {"inputs":{...},"seed":N,"stage":"...","tool":"grel/x"}
/// Inputs are recorded by basename so reruns from another directory produce
/// identical bytes.
struct ArtifactHeader {
  std::string stage;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> digest

  void add_input_file(const std::string& path);
  void add_input(const std::string& name, std::string_view bytes);
  std::string line() const;
};

inline constexpr std::string_view kHeaderPrefix = "# grel-artifact ";

}  // namespace grel
