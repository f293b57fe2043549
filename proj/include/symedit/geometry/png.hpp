// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "symedit/geometry/image.hpp"

namespace symedit::geometry {

/// 8-bit RGBA PNG. Encoding is deterministic for a given buffer.
std::vector<std::uint8_t> encode_png(const ImageBuffer& image);

/// Any PNG libpng understands, converted to RGBA8. Throws Error(BadImage).
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);

ImageBuffer read_png(const std::filesystem::path& path);  // Error(IoError) / Error(BadImage)
void write_png(const std::filesystem::path& path, const ImageBuffer& image);

/// Masks travel as grayscale-looking RGBA PNGs: white opaque where set.
ImageBuffer mask_to_image(const Mask& mask);
Mask mask_from_image(const ImageBuffer& image);

}  // namespace symedit::geometry
