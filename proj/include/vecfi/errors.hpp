// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace vecfi {

// Bad user input: unknown names, invalid dimensions, malformed files.
// The CLI reports these as usage errors (exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal assumption. The CLI reports these as exit code 3.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

} // namespace vecfi
