// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "symedit/common/error.hpp"
#include "symedit/geometry/image.hpp"

namespace symedit::geometry {

ImageBuffer::ImageBuffer(int width, int height, Rgba fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw Error(ErrorCode::EmptyImage, "image must be at least 1x1");
    pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4);
    for (std::size_t i = 0; i < pixels_.size(); i += 4) {
        pixels_[i] = fill.r;
        pixels_[i + 1] = fill.g;
        pixels_[i + 2] = fill.b;
        pixels_[i + 3] = fill.a;
    }
}

ImageBuffer ImageBuffer::from_rgba(int width, int height, std::vector<std::uint8_t> rgba) {
    if (width < 1 || height < 1) throw Error(ErrorCode::EmptyImage, "image must be at least 1x1");
    if (rgba.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4) {
        throw Error(ErrorCode::InvalidArgument, "pixel byte count does not match width*height*4");
    }
    ImageBuffer img;
    img.width_ = width;
    img.height_ = height;
    img.pixels_ = std::move(rgba);
    return img;
}

std::size_t Mask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool Mask::intersects(const Mask& other) const noexcept {
    if (size() != other.size()) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] && other.bits_[i]) return true;
    }
    return false;
}

Mask Mask::united(const Mask& other) const {
    if (size() != other.size()) throw Error(ErrorCode::ShapeMismatch, "mask sizes differ");
    Mask out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | other.bits_[i];
    return out;
}

}  // namespace symedit::geometry
