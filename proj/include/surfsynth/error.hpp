// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace surfsynth {

enum class Errc {
    invalid_argument,  // violated precondition on a parameter
    parse,             // malformed input file
    io,                // file system failure
    degenerate,        // input is well-formed but mathematically unusable
};

/// Error type thrown by every library operation. Carries a category and,
/// for parse errors, the offending (0-based) data row.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::optional<std::size_t> row = std::nullopt)
        : std::runtime_error(message), code_(code), row_(row) {}

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    Errc code_;
    std::optional<std::size_t> row_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message)
{
    throw Error(code, message);
}

inline void require(bool condition, const std::string& message)
{
    if (!condition) throw Error(Errc::invalid_argument, message);
}

}  // namespace surfsynth
