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

#include "spectrum/rng.h"

#include <iostream>
#include <utility>

#include "spectrum/errors.h"

namespace spectrum {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Combine(std::uint64_t h, std::uint64_t v) {
  return Mix(h ^ (v + kGolden + (h << 6) + (h >> 2)));
}

WarningSink& Sink() {
  static WarningSink sink = [](const std::string& message) {
    std::cerr << "warning: " << message << '\n';
  };
  return sink;
}

}  // namespace

KeyedStream::KeyedStream(const StreamKey& key) {
  std::uint64_t h = Mix(key.seed);
  h = Combine(h, static_cast<std::uint64_t>(key.tag));
  h = Combine(h, key.user);
  h = Combine(h, key.channel);
  h = Combine(h, key.period);
  base_ = h;
}

std::uint64_t KeyedStream::NextU64() {
  ++counter_;
  return Mix(base_ + counter_ * kGolden);
}

double KeyedStream::NextOpenUniform() {
  // 53 random bits, shifted by half an ulp so the endpoints are excluded.
  const std::uint64_t bits = NextU64() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index) {
  return Combine(Mix(seed), index);
}

WarningSink SetWarningSink(WarningSink sink) {
  return std::exchange(Sink(), std::move(sink));
}

void Warn(const std::string& message) {
  if (Sink()) Sink()(message);
}

}  // namespace spectrum
