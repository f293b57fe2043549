// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symedit/dsl/selector.hpp"
#include "symedit/geometry/image.hpp"
#include "symedit/geometry/roi.hpp"

namespace symedit::geometry {

struct PaletteEntry {
    Rgba color;  // alpha ignored for lookup
    std::string label;
};

/// Color -> class-name table used by the deterministic segmenter.
class Palette {
public:
    explicit Palette(std::vector<PaletteEntry> entries) : entries_(std::move(entries)) {}

    /// Built-in table covering the classes used by the planner templates.
    static const Palette& standard();

    /// Label for an exact RGB match, otherwise "region".
    std::string label_for(Rgba color) const;
    std::optional<Rgba> color_for(std::string_view label) const;
    const std::vector<PaletteEntry>& entries() const noexcept { return entries_; }

private:
    std::vector<PaletteEntry> entries_;
};

/// Modal color; ties resolve to the smallest packed RGBA value.
Rgba background_color(const ImageBuffer& image);

/// 4-connected components of every non-background color class, labeled via
/// the palette and sorted by centroid x, then centroid y, then first pixel in
/// scan order. Throws Error(NoForeground) for single-color images.
std::vector<Roi> segment_components(const ImageBuffer& image, const Palette& palette = Palette::standard());

/// Picks one region. Class match is case-insensitive; attribute words filter
/// by basic color name (red, blue, ...) or relative size (big, small).
/// Throws Error(SelectorUnresolved) or Error(SelectorAmbiguous).
Roi resolve_selector(std::span<const Roi> rois, const dsl::Selector& selector);

/// Name of the basic color nearest to the region's mean masked color.
std::string basic_color_name(const Roi& roi);

/// Onion-peel fill: every pass assigns each masked pixel that touches a known
/// 4-neighbor the rounded mean RGB of its known neighbors (alpha 255), then
/// marks the whole pass known. Unmasked pixels are copied bit-for-bit.
/// An empty mask returns the input. Throws Error(MaskCoversImage).
ImageBuffer inpaint_fill(const ImageBuffer& image, const Mask& mask);

enum class Direction { Left, Right, Up, Down };

std::optional<Direction> direction_from_string(std::string_view text) noexcept;
std::string_view to_string(Direction direction) noexcept;

/// Throws Error(RegionFullyClipped) when nothing is left inside bounds.
Roi move_roi(const Roi& roi, Direction direction, int amount, Size bounds);

/// Nearest-neighbor resample of patch and mask to round(dims * factor),
/// placed so the resampled centroid lands on the old one.
/// Throws Error(DegenerateResult) when the result has no pixels.
Roi scale_roi(const Roi& roi, double factor, Size bounds);

/// Alpha-over composite with the region's centroid moved to `at` (default:
/// where it already is). Throws Error(FullyOutOfBounds).
ImageBuffer paste(const ImageBuffer& background, const Roi& roi, std::optional<Point> at = std::nullopt);

/// Fills both regions, then pastes a at b's centroid and b at a's centroid.
/// Throws Error(OverlappingRegions).
ImageBuffer swap_rois(const ImageBuffer& image, const Roi& a, const Roi& b);

}  // namespace symedit::geometry
