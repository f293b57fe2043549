// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "symedit/geometry/image.hpp"

namespace symedit::geometry {

/// A region cut from an image.
///
/// Invariants: the mask has at least one set bit, bbox is the tight bounding
/// box of the set bits, centroid is the mean of set-bit coordinates (pixel
/// centers sit on integer coordinates), and patch covers bbox with alpha 255
/// exactly on mask bits and 0 elsewhere.
struct Roi {
    Mask mask;
    BBox bbox;
    std::string label;
    Point centroid;
    ImageBuffer patch;

    Size bounds() const noexcept { return mask.size(); }
    std::size_t area() const noexcept { return mask.count(); }

    bool operator==(const Roi&) const = default;

    /// Cuts the masked pixels of source. Throws Error(DegenerateResult) for an
    /// empty mask and Error(ShapeMismatch) when sizes differ.
    static Roi from_mask(const ImageBuffer& source, const Mask& mask, std::string label);

    /// Places patch with its top-left corner at (x0, y0) on a canvas of the
    /// given bounds. Pixels with non-zero alpha that land inside the canvas
    /// become the mask. Returns nullopt when nothing lands inside.
    static std::optional<Roi> from_patch(const ImageBuffer& patch, int x0, int y0, Size bounds, std::string label);
};

}  // namespace symedit::geometry
