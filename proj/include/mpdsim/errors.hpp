// Copyright 2026 The mpdsim Authors
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

namespace mpd {

/// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
    domain,        // argument outside an operation's domain
    validation,    // malformed or inconsistent configuration
    singular,      // vanishing denominator in a closed-form step
    verification,  // a cross-check did not hold
    grid,          // sampling grid inadequate (Nyquist, clipping, cap)
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {
    }
    ErrorKind kind() const {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

class DomainError : public Error {
   public:
    explicit DomainError(const std::string &what) : Error(ErrorKind::domain, what) {
    }
};

class ValidationError : public Error {
   public:
    explicit ValidationError(const std::string &what) : Error(ErrorKind::validation, what) {
    }
};

class SingularError : public Error {
   public:
    explicit SingularError(const std::string &what) : Error(ErrorKind::singular, what) {
    }
};

class VerificationError : public Error {
   public:
    explicit VerificationError(const std::string &what) : Error(ErrorKind::verification, what) {
    }
};

/// Raised when a sampling grid cannot represent the integrand. Carries the
/// point count that would satisfy the bound, so callers can retry.
class GridError : public Error {
   public:
    GridError(const std::string &what, std::size_t required_points)
        : Error(ErrorKind::grid, what), required_points_(required_points) {
    }
    std::size_t required_points() const {
        return required_points_;
    }

   private:
    std::size_t required_points_;
};

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation:
        case ErrorKind::domain:
            return 2;
        case ErrorKind::singular:
        case ErrorKind::grid:
            return 3;
        case ErrorKind::verification:
            return 4;
    }
    return 1;
}

}  // namespace mpd
