// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace meshgate {

/// Base class for all meshgate errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad flags, unknown identifiers, malformed configuration or input files.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A contract violates one of its type invariants; message names the field.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Model provider could not be reached after exhausting retries.
class TransportError : public Error {
public:
    TransportError(const std::string& msg, int attempts)
        : Error(msg), attempts_(attempts) {}

    int attempts() const { return attempts_; }

private:
    int attempts_;
};

/// Store contents disagree with the index or an existing file.
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// The store lock could not be acquired; callers may retry.
class StoreBusyError : public IntegrityError {
public:
    using IntegrityError::IntegrityError;
};

/// Evaluation time precedes the data timestamp.
class ClockSkewError : public Error {
public:
    using Error::Error;
};

/// A median was requested over an empty series.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

/// A byte-identical draft is already awaiting review.
class DuplicateSubmissionError : public Error {
public:
    using Error::Error;
};

} // namespace meshgate
