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

// Self-checks run by `spectrum_sim verify` on seeded small instances.

#ifndef SPECTRUM_VERIFY_H_
#define SPECTRUM_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace spectrum {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> RunPropertySuites(std::uint64_t seed);

}  // namespace spectrum

#endif  // SPECTRUM_VERIFY_H_
