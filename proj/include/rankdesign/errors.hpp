/*
 * Copyright 2026 The rankdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKDESIGN_ERRORS_HPP_
#define RANKDESIGN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rankdesign {

// Root of every error thrown by the library. Callers that only care about
// "configuration vs. numerics" can catch SpecError / NumericalError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad function parameters, malformed policies,
// unsupported group shares.
class SpecError : public Error {
 public:
  using Error::Error;
};

class DomainError : public SpecError {
 public:
  using SpecError::SpecError;
};

class RangeError : public SpecError {
 public:
  using SpecError::SpecError;
};

class CapacityError : public SpecError {
 public:
  using SpecError::SpecError;
};

class PerturbationError : public SpecError {
 public:
  using SpecError::SpecError;
};

class RegionError : public SpecError {
 public:
  using SpecError::SpecError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// The population/policy combination produced a value the model cannot
// represent (e.g. a required effort outside the image of g).
class ModelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A standing model assumption (sign of a derivative, g(e0) = 0, ...) does
// not hold for the supplied inputs.
class AssumptionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double partial_estimate)
      : NumericalError(what), partial_estimate_(partial_estimate) {}

  double partial_estimate() const noexcept { return partial_estimate_; }

 private:
  double partial_estimate_;
};

}  // namespace rankdesign

#endif  // RANKDESIGN_ERRORS_HPP_
