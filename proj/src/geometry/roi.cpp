// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdint>

#include "symedit/common/error.hpp"
#include "symedit/geometry/roi.hpp"

namespace symedit::geometry {

namespace {

// Fills bbox/centroid from the mask; false when the mask is empty.
bool tighten(const Mask& mask, BBox& bbox, Point& centroid) {
    bbox = {mask.width(), mask.height(), -1, -1};
    std::int64_t sx = 0, sy = 0, n = 0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.get(x, y)) continue;
            bbox.x0 = std::min(bbox.x0, x);
            bbox.y0 = std::min(bbox.y0, y);
            bbox.x1 = std::max(bbox.x1, x);
            bbox.y1 = std::max(bbox.y1, y);
            sx += x;
            sy += y;
            ++n;
        }
    }
    if (n == 0) return false;
    centroid = {static_cast<double>(sx) / static_cast<double>(n), static_cast<double>(sy) / static_cast<double>(n)};
    return true;
}

}  // namespace

Roi Roi::from_mask(const ImageBuffer& source, const Mask& mask, std::string label) {
    if (source.size() != mask.size()) throw Error(ErrorCode::ShapeMismatch, "mask and image sizes differ");
    Roi roi;
    roi.mask = mask;
    roi.label = std::move(label);
    if (!tighten(roi.mask, roi.bbox, roi.centroid)) throw Error(ErrorCode::DegenerateResult, "region mask is empty");
    roi.patch = ImageBuffer(roi.bbox.width(), roi.bbox.height(), Rgba{0, 0, 0, 0});
    for (int y = roi.bbox.y0; y <= roi.bbox.y1; ++y) {
        for (int x = roi.bbox.x0; x <= roi.bbox.x1; ++x) {
            Rgba c = source.at(x, y);
            c.a = mask.get(x, y) ? 255 : 0;
            roi.patch.set(x - roi.bbox.x0, y - roi.bbox.y0, c);
        }
    }
    return roi;
}

std::optional<Roi> Roi::from_patch(const ImageBuffer& patch, int x0, int y0, Size bounds, std::string label) {
    Roi roi;
    roi.mask = Mask(bounds.width, bounds.height);
    roi.label = std::move(label);
    for (int py = 0; py < patch.height(); ++py) {
        for (int px = 0; px < patch.width(); ++px) {
            int x = x0 + px, y = y0 + py;
            if (x < 0 || y < 0 || x >= bounds.width || y >= bounds.height) continue;
            if (patch.at(px, py).a != 0) roi.mask.set(x, y);
        }
    }
    if (!tighten(roi.mask, roi.bbox, roi.centroid)) return std::nullopt;
    roi.patch = ImageBuffer(roi.bbox.width(), roi.bbox.height(), Rgba{0, 0, 0, 0});
    for (int y = roi.bbox.y0; y <= roi.bbox.y1; ++y) {
        for (int x = roi.bbox.x0; x <= roi.bbox.x1; ++x) {
            Rgba c = patch.at(x - x0, y - y0);
            c.a = roi.mask.get(x, y) ? 255 : 0;
            roi.patch.set(x - roi.bbox.x0, y - roi.bbox.y0, c);
        }
    }
    return roi;
}

}  // namespace symedit::geometry
