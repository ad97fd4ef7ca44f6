// Copyright 2026 The dfsim Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dfsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input to a constructor or builder.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition (Hermiticity, normalization, ...) does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A pair operator does not have the two-dimensional kernel the code needs.
class CodeConstructionError : public Error {
 public:
  CodeConstructionError(std::size_t pair_index, std::size_t kernel_dim)
      : Error("code construction failed: pair " + std::to_string(pair_index) + " has kernel dimension " +
              std::to_string(kernel_dim) + " (expected 2)"),
        pair_index_(pair_index),
        kernel_dim_(kernel_dim) {}

  std::size_t pair_index() const { return pair_index_; }
  std::size_t kernel_dim() const { return kernel_dim_; }

 private:
  std::size_t pair_index_;
  std::size_t kernel_dim_;
};

/// Bad or missing scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfsim
