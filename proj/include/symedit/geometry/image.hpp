// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace symedit::geometry {

struct Rgba {
    std::uint8_t r = 0, g = 0, b = 0, a = 255;

    bool operator==(const Rgba&) const = default;
    std::uint32_t packed() const noexcept {
        return (std::uint32_t{r} << 24) | (std::uint32_t{g} << 16) | (std::uint32_t{b} << 8) | a;
    }
};

struct Size {
    int width = 0;
    int height = 0;
    bool operator==(const Size&) const = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

/// Inclusive pixel bounds.
struct BBox {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

    int width() const noexcept { return x1 - x0 + 1; }
    int height() const noexcept { return y1 - y0 + 1; }
    bool operator==(const BBox&) const = default;
};

/// Row-major RGBA8 raster. A default-constructed buffer is the 0x0 image;
/// every other buffer has width, height >= 1.
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, Rgba fill = {});

    /// Throws Error(EmptyImage) on zero extent, Error(InvalidArgument) when
    /// the byte count does not match.
    static ImageBuffer from_rgba(int width, int height, std::vector<std::uint8_t> rgba);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    Size size() const noexcept { return {width_, height_}; }
    bool empty() const noexcept { return width_ == 0 || height_ == 0; }
    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    Rgba at(int x, int y) const noexcept {
        const std::uint8_t* p = &pixels_[offset(x, y)];
        return {p[0], p[1], p[2], p[3]};
    }
    void set(int x, int y, Rgba c) noexcept {
        std::uint8_t* p = &pixels_[offset(x, y)];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
        p[3] = c.a;
    }

    std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }

    bool operator==(const ImageBuffer&) const = default;

private:
    std::size_t offset(int x, int y) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 4;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Per-pixel bit set over a width x height grid.
class Mask {
public:
    Mask() = default;
    Mask(int width, int height) : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    Size size() const noexcept { return {width_, height_}; }

    bool get(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool on = true) noexcept { bits_[index(x, y)] = on ? 1 : 0; }

    std::size_t count() const noexcept;
    bool intersects(const Mask& other) const noexcept;
    Mask united(const Mask& other) const;

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    bool operator==(const Mask&) const = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// floor(v + 0.5); the single quantization rule used for coordinates.
inline int round_half_up(double v) noexcept { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace symedit::geometry
