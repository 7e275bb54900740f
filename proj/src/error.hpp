// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace litefocus {

enum class ErrorCode {
    validation,        // bad argument, shape mismatch, non-finite data
    format,            // malformed file header
    truncated,         // file shorter than its header declares
    io,                // open/read/write failure
    degenerate_focus,  // empty focus set (softmax over zero keys is undefined)
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace litefocus

#define LF_REQUIRE(cond, code, msg)                                       \
    do {                                                                  \
        if (!(cond)) ::litefocus::fail(::litefocus::ErrorCode::code, msg); \
    } while (0)
