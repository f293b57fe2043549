// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace symedit::dsl {

enum class Positional { All, Left, Right, Middle, FarLeft, FarRight, Index };

/// Grounding predicate such as "far right pigeon" or "#2 red dog".
///
/// The last word is always the class; positional keywords and free-form
/// attribute words may precede it. Printing yields the canonical phrase,
/// which parses back to an equal Selector.
struct Selector {
    std::string class_name;
    Positional positional = Positional::All;
    int index = 0;  // meaningful only for Positional::Index, always >= 0
    std::vector<std::string> attributes;

    bool operator==(const Selector&) const = default;
};

/// Throws Error(EmptySelector) when no words remain, Error(SyntaxError) for a
/// malformed "#k" index token.
Selector parse_selector(std::string_view text);

std::string print_selector(const Selector& selector);

std::string_view to_string(Positional positional) noexcept;

}  // namespace symedit::dsl
