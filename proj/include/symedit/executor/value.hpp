// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "symedit/geometry/image.hpp"
#include "symedit/geometry/roi.hpp"

namespace symedit::executor {

struct Prompt {
    std::string text;
    bool operator==(const Prompt&) const = default;
};

using RegionList = std::vector<geometry::Roi>;

enum class ValueTag { Image, Region, Prompt, Number, RegionList };

std::string_view to_string(ValueTag tag) noexcept;

/// Tagged union bound to program variables.
class Value {
public:
    Value(geometry::ImageBuffer image) : v_(std::move(image)) {}
    Value(geometry::Roi region) : v_(std::move(region)) {}
    Value(Prompt prompt) : v_(std::move(prompt)) {}
    Value(double number) : v_(number) {}
    Value(RegionList regions) : v_(std::move(regions)) {}

    ValueTag tag() const noexcept { return static_cast<ValueTag>(v_.index()); }

    /// Throw Error(TypeMismatch) when the tag differs.
    const geometry::ImageBuffer& image() const;
    const geometry::Roi& region() const;
    const Prompt& prompt() const;
    double number() const;
    const RegionList& regions() const;

    /// FNV-1a over the tag and a canonical payload encoding.
    std::uint64_t digest() const;
    std::string digest_hex() const;

    bool operator==(const Value&) const = default;

private:
    std::variant<geometry::ImageBuffer, geometry::Roi, Prompt, double, RegionList> v_;
};

}  // namespace symedit::executor
