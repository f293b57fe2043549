// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <sodium.h>

#include "symedit/common/base64.hpp"
#include "symedit/common/error.hpp"
#include "symedit/common/hash.hpp"

namespace symedit {

std::string to_hex(std::uint64_t v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = kDigits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    constexpr int kVariant = sodium_base64_VARIANT_ORIGINAL;
    std::string out(sodium_base64_encoded_len(bytes.size(), kVariant), '\0');
    sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), kVariant);
    out.resize(out.size() - 1);  // drop the terminator sodium writes
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
    size_t written = 0;
    const char* end = nullptr;
    if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &written, &end,
                          sodium_base64_VARIANT_ORIGINAL) != 0 ||
        end != text.data() + text.size()) {
        throw Error(ErrorCode::ProtocolError, "malformed base64 payload");
    }
    out.resize(written);
    return out;
}

}  // namespace symedit
