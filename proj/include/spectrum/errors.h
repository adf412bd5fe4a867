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

#ifndef SPECTRUM_ERRORS_H_
#define SPECTRUM_ERRORS_H_

#include <functional>
#include <stdexcept>
#include <string>

namespace spectrum {

// Invalid argument, e.g. a probability outside (0, 1) or a dimension
// mismatch.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A log or ratio hit a singular point (p at 0 or 1, zero data rate).
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative solver failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Brute-force oracles refuse instances they cannot enumerate.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// KL projection was asked to place mass where none is allowed.
class DegenerateSupportError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal conditions are routed through a process-wide sink. The default writes to stderr.
using WarningSink = std::function<void(const std::string&)>;

// Installs `sink` and returns the previous one. Passing an empty function
// silences warnings.
WarningSink SetWarningSink(WarningSink sink);

void Warn(const std::string& message);

}  // namespace spectrum

#endif  // SPECTRUM_ERRORS_H_
