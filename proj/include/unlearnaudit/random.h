//
// Copyright 2026 The unlearnaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Seeded randomness. Every random draw in the library goes through Rng so
// runs replay bit-for-bit from a master seed, independent of the standard
// library's distribution implementations.

#ifndef UNLEARNAUDIT_RANDOM_H_
#define UNLEARNAUDIT_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace unlearnaudit {

// Counter-based seed splitting: a seed for (master, index, tag) that does
// not depend on how many other seeds were drawn before it.
uint64_t DeriveSeed(uint64_t master, uint64_t index, std::string_view tag);

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  // Uniform on [0, n); n > 0.
  uint64_t UniformInt(uint64_t n);
  double Normal(double mean = 0.0, double stddev = 1.0);
  bool Coin() { return (NextU64() >> 63) != 0; }
  int Bit() { return Coin() ? 1 : 0; }

  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformInt(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  // k distinct indices from [0, n), in draw order.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace unlearnaudit

#endif  // UNLEARNAUDIT_RANDOM_H_
