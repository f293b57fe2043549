// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace symedit {

/// Incremental 64-bit FNV-1a. Used for value digests, artifact ids and
/// prompt-embedding seeds, so the constants are part of the on-disk format.
class Fnv1a {
public:
    static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
    static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

    Fnv1a& update(std::span<const std::uint8_t> bytes) noexcept {
        for (std::uint8_t b : bytes) {
            state_ ^= b;
            state_ *= kPrime;
        }
        return *this;
    }
    Fnv1a& update(std::string_view text) noexcept {
        return update(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
    // Little-endian encoding regardless of host order.
    Fnv1a& update_u64(std::uint64_t v) noexcept {
        std::uint8_t buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
        return update(std::span<const std::uint8_t>(buf, 8));
    }
    Fnv1a& update_f64(double v) noexcept {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        return update_u64(bits);
    }

    std::uint64_t digest() const noexcept { return state_; }

private:
    std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
    return Fnv1a{}.update(bytes).digest();
}

inline std::uint64_t fnv1a64(std::string_view text) noexcept {
    return Fnv1a{}.update(text).digest();
}

/// Fixed-width lowercase hex, 16 characters.
std::string to_hex(std::uint64_t v);

}  // namespace symedit
