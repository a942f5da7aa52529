// Copyright 2026 The VSG Authors.
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

#ifndef VSG_CHECK_H_
#define VSG_CHECK_H_

#include <stdexcept>
#include <string>

namespace vsg {

// Base class for all solver errors.
class VsgError : public std::runtime_error {
 public:
  explicit VsgError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument / precondition violation (bad eta, mode conflict, wrong
// game kind, dimension mismatch, ...).
class ParameterError : public VsgError {
 public:
  explicit ParameterError(const std::string& msg) : VsgError(msg) {}
};

// A fixed-point iteration hit its iteration cap before reaching tolerance.
class ConvergenceError : public VsgError {
 public:
  ConvergenceError(const std::string& msg, double residual)
      : VsgError(msg), residual(residual) {}
  double residual;
};

// Importance weights collapsed below useful precision.
class DegenerateWeightsError : public VsgError {
 public:
  explicit DegenerateWeightsError(const std::string& msg) : VsgError(msg) {}
};

// Fisher pseudo-inverse kept no usable directions.
class DegenerateFisherError : public VsgError {
 public:
  explicit DegenerateFisherError(const std::string& msg) : VsgError(msg) {}
};

#define VSG_CHECK(cond, msg)                  \
  do {                                        \
    if (!(cond)) throw ::vsg::ParameterError(msg); \
  } while (false)

}  // namespace vsg

#endif  // VSG_CHECK_H_
