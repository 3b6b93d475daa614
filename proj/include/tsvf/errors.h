// Copyright 2026 The tsvf Authors
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

#ifndef TSVF_ERRORS_H
#define TSVF_ERRORS_H

#include <stdexcept>
#include <string>

namespace tsvf {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, invalid states/operators, schema violations.
struct InputError : Error {
    using Error::Error;
};

struct DimensionMismatch : InputError {
    DimensionMismatch(const std::string &where, size_t a, size_t b)
        : InputError(where + ": dimension mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")") {
    }
};

struct InvalidState : InputError {
    using InputError::InputError;
};

struct InvalidOperator : InputError {
    using InputError::InputError;
};

/// A scenario document violates the schema. `path` locates the offending field.
struct SchemaError : InputError {
    SchemaError(std::string path, const std::string &what)
        : InputError(path + ": " + what), path(std::move(path)) {
    }
    std::string path;
};

/// A quantity is undefined for the given inputs (ABL denominator or pre/post overlap vanishes).
struct UndefinedQuantity : Error {
    using Error::Error;
};

/// Post-selection is unreachable through every branch of the intermediate measurement.
struct ZeroDenominator : UndefinedQuantity {
    using UndefinedQuantity::UndefinedQuantity;
};

/// Pre- and post-selected states are orthogonal; the weak value does not exist.
struct ZeroOverlap : UndefinedQuantity {
    using UndefinedQuantity::UndefinedQuantity;
};

/// Monte-Carlo run did not produce enough post-selected trials.
struct RejectionError : Error {
    using Error::Error;
};

struct AllRejected : RejectionError {
    using RejectionError::RejectionError;
};

struct InsufficientAcceptedTrials : RejectionError {
    using RejectionError::RejectionError;
};

}  // namespace tsvf

#endif
