// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symedit {

// Standard alphabet, with padding.
std::string base64_encode(std::span<const std::uint8_t> bytes);

// Throws Error(ProtocolError) on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace symedit
