// common/error.h

// Copyright 2026  The BargeBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef BARGEBENCH_COMMON_ERROR_H_
#define BARGEBENCH_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace bargebench {

/// Root of every exception thrown by the toolkit.  The CLI maps the
/// subclasses onto stable exit codes (see cli/commands.h).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent user-supplied configuration / arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Missing files, unwritable paths, short reads.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file payload (WAV header, manifest line, checkpoint).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Tensor shape incompatibility.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, divergence.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Silent or otherwise degenerate signals where a power ratio is required.
class DegenerateSignalError : public Error {
 public:
  using Error::Error;
};

/// Impossible room or source geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A metric that is undefined for the given input (e.g. AUC on one class).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

}  // namespace bargebench

#endif  // BARGEBENCH_COMMON_ERROR_H_
