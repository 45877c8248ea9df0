// Copyright 2026 The dither-codec Authors
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

#include <stdexcept>
#include <string>

namespace dcodec {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed in-memory input (bad spec, NaN sample, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// WAV decoding failure; the message names the offending header field.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Encoded bitstream is malformed: bad magic/version, truncated, trailing data.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Symbol indices outside the quantizer alphabet.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// A numeric routine could not produce a defined result (zero-energy
/// normalization, quadrature non-convergence, log of a nonpositive value).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace dcodec
