//
// Copyright 2026 The Spectrum Sharing Authors
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

#ifndef SPECTRUM_RNG_H_
#define SPECTRUM_RNG_H_

#include <cstdint>
#include <limits>

namespace spectrum {

// Identifies which mechanism a random stream belongs to. Values are part of
// the reproducibility contract: changing them changes every seeded output.
enum class StreamTag : std::uint32_t {
  kSparCostThreshold = 1,
  kSparCostItem = 2,
  kExpSelect = 3,
  kRexp = 4,
  kScenario = 5,
  kScenarioGain = 6,
  kScenarioPosition = 7,
  kScenarioAction = 8,
  kScenarioStrategy = 9,
  kOptInAssignment = 10,
  kTest = 99,
};

// Key of one independent random stream. Every noise draw in the library is
// addressed by (run seed, mechanism tag, user, channel, period).
struct StreamKey {
  std::uint64_t seed = 0;
  StreamTag tag = StreamTag::kTest;
  std::uint32_t user = 0;
  std::uint32_t channel = 0;
  std::uint32_t period = 0;
};

// Counter-based generator: output i is a SplitMix64 finalizer applied to
// hash(key) + i * golden-ratio increment. Satisfies
// UniformRandomBitGenerator.
class KeyedStream {
 public:
  using result_type = std::uint64_t;

  explicit KeyedStream(const StreamKey& key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return NextU64(); }
  result_type NextU64();

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double NextOpenUniform();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// Derives a child seed, e.g. one per run of a sweep.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

}  // namespace spectrum

#endif  // SPECTRUM_RNG_H_
