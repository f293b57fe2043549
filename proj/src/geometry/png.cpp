// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <png.h>

#include <fstream>
#include <iterator>

#include "symedit/common/error.hpp"
#include "symedit/geometry/png.hpp"

namespace symedit::geometry {

std::vector<std::uint8_t> encode_png(const ImageBuffer& image) {
    if (image.empty()) throw Error(ErrorCode::EmptyImage, "cannot encode an empty image");
    png_image desc{};
    desc.version = PNG_IMAGE_VERSION;
    desc.width = static_cast<png_uint_32>(image.width());
    desc.height = static_cast<png_uint_32>(image.height());
    desc.format = PNG_FORMAT_RGBA;

    png_alloc_size_t size = 0;
    const void* pixels = image.bytes().data();
    if (!png_image_write_to_memory(&desc, nullptr, &size, 0, pixels, 0, nullptr)) {
        throw Error(ErrorCode::Internal, std::string("png encode failed: ") + desc.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&desc, out.data(), &size, 0, pixels, 0, nullptr)) {
        throw Error(ErrorCode::Internal, std::string("png encode failed: ") + desc.message);
    }
    out.resize(size);
    return out;
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
    png_image desc{};
    desc.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size())) {
        throw Error(ErrorCode::BadImage, std::string("not a decodable PNG: ") + desc.message);
    }
    desc.format = PNG_FORMAT_RGBA;
    if (desc.width == 0 || desc.height == 0) {
        png_image_free(&desc);
        throw Error(ErrorCode::BadImage, "PNG has zero extent");
    }
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(desc));
    if (!png_image_finish_read(&desc, nullptr, pixels.data(), 0, nullptr)) {
        throw Error(ErrorCode::BadImage, std::string("corrupt PNG: ") + desc.message);
    }
    return ImageBuffer::from_rgba(static_cast<int>(desc.width), static_cast<int>(desc.height), std::move(pixels));
}

ImageBuffer read_png(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

void write_png(const std::filesystem::path& path, const ImageBuffer& image) {
    auto bytes = encode_png(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

ImageBuffer mask_to_image(const Mask& mask) {
    ImageBuffer img(mask.width(), mask.height(), Rgba{0, 0, 0, 255});
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask.get(x, y)) img.set(x, y, Rgba{255, 255, 255, 255});
    return img;
}

Mask mask_from_image(const ImageBuffer& image) {
    Mask mask(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) {
            Rgba c = image.at(x, y);
            if (c.a >= 128 && (int{c.r} + c.g + c.b) >= 384) mask.set(x, y);
        }
    return mask;
}

}  // namespace symedit::geometry
