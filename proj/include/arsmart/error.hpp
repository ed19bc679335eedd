// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <stdexcept>
#include <string>

namespace arsmart {

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// bad platform / timing / sim configuration
class ConfigError : public Error {
   public:
    using Error::Error;
};

class InvalidMessage : public Error {
   public:
    using Error::Error;
};

class GraphError : public Error {
   public:
    using Error::Error;
};

class ParseError : public Error {
   public:
    ParseError(const std::string &what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

   private:
    int line_;
};

class DecodeError : public Error {
   public:
    using Error::Error;
};

// two router inputs driven onto one output; always a controller bug
class ConfigConflict : public Error {
   public:
    using Error::Error;
};

// a simulation invariant failed; the engine aborts on these
class InvariantViolation : public Error {
   public:
    using Error::Error;
};

}  // namespace arsmart
