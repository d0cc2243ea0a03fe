// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace meshgate {

/// SHA-256 of `data` as 64 lowercase hex characters.
std::string sha256_hex(std::string_view data);

/// True for a 64-character lowercase hex string.
bool is_hex_digest(std::string_view s);

} // namespace meshgate
