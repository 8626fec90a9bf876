// Copyright 2026 The essp authors
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

#ifndef ESSP_RNG_HPP_
#define ESSP_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace essp {

// Deterministic random source for the benchmark generators.
//
// Generated instances must be byte-identical across runs and platforms for a
// given seed, so every sampling site draws from a named stream: the stream is
// keyed by (master seed, ward id, purpose string) and is independent of how
// many draws other streams have consumed. Adding a new sampling site therefore
// never perturbs existing output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derives the stream for one (ward, purpose) pair under a master seed.
  static Rng stream(std::uint64_t master, std::uint64_t ward,
                    std::string_view purpose) {
    std::uint64_t h = fnv1a(purpose);
    h ^= mix(master + 0x9e3779b97f4a7c15ULL);
    h ^= mix(ward + 0x632be59bd9b4e019ULL);
    return Rng(mix(h));
  }

  // Uniform double in [lo, hi). Uses the top 53 bits of the engine output so
  // the value does not depend on the platform's std::uniform_real_distribution
  // implementation.
  double uniform(double lo, double hi) {
    double u01 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + u01 * (hi - lo);
  }

  // Uniform integer in [lo, hi], rejection sampled for exact uniformity.
  int uniform_int(int lo, int hi) {
    std::uint64_t n = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % n);
  }

  std::uint64_t next() { return engine_(); }

 private:
  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  // splitmix64 finalizer; spreads low-entropy keys over the full word.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace essp

#endif  // ESSP_RNG_HPP_
