// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/executor/value.hpp"

#include "symedit/common/error.hpp"
#include "symedit/common/hash.hpp"

namespace symedit::executor {

namespace {

[[noreturn]] void mismatch(ValueTag want, ValueTag got) {
    throw Error(ErrorCode::TypeMismatch,
                "expected " + std::string(to_string(want)) + ", found " + std::string(to_string(got)));
}

void hash_image(Fnv1a& h, const geometry::ImageBuffer& image) {
    h.update_u64(static_cast<std::uint64_t>(image.width()));
    h.update_u64(static_cast<std::uint64_t>(image.height()));
    h.update(image.bytes());
}

void hash_region(Fnv1a& h, const geometry::Roi& roi) {
    h.update_u64(roi.label.size()).update(roi.label);
    h.update_u64(static_cast<std::uint64_t>(roi.mask.width()));
    h.update_u64(static_cast<std::uint64_t>(roi.mask.height()));
    h.update(roi.mask.bits());
    for (int v : {roi.bbox.x0, roi.bbox.y0, roi.bbox.x1, roi.bbox.y1}) h.update_u64(static_cast<std::uint64_t>(v));
    h.update_f64(roi.centroid.x).update_f64(roi.centroid.y);
    hash_image(h, roi.patch);
}

}  // namespace

std::string_view to_string(ValueTag tag) noexcept {
    switch (tag) {
        case ValueTag::Image: return "Image";
        case ValueTag::Region: return "Region";
        case ValueTag::Prompt: return "Prompt";
        case ValueTag::Number: return "Number";
        case ValueTag::RegionList: return "RegionList";
    }
    return "Image";
}

const geometry::ImageBuffer& Value::image() const {
    if (tag() != ValueTag::Image) mismatch(ValueTag::Image, tag());
    return std::get<geometry::ImageBuffer>(v_);
}

const geometry::Roi& Value::region() const {
    if (tag() != ValueTag::Region) mismatch(ValueTag::Region, tag());
    return std::get<geometry::Roi>(v_);
}

const Prompt& Value::prompt() const {
    if (tag() != ValueTag::Prompt) mismatch(ValueTag::Prompt, tag());
    return std::get<Prompt>(v_);
}

double Value::number() const {
    if (tag() != ValueTag::Number) mismatch(ValueTag::Number, tag());
    return std::get<double>(v_);
}

const RegionList& Value::regions() const {
    if (tag() != ValueTag::RegionList) mismatch(ValueTag::RegionList, tag());
    return std::get<RegionList>(v_);
}

std::uint64_t Value::digest() const {
    Fnv1a h;
    h.update(to_string(tag())).update(std::string_view("\0", 1));
    switch (tag()) {
        case ValueTag::Image: hash_image(h, image()); break;
        case ValueTag::Region: hash_region(h, region()); break;
        case ValueTag::Prompt: h.update_u64(prompt().text.size()).update(prompt().text); break;
        case ValueTag::Number: h.update_f64(number()); break;
        case ValueTag::RegionList:
            h.update_u64(regions().size());
            for (const auto& r : regions()) hash_region(h, r);
            break;
    }
    return h.digest();
}

std::string Value::digest_hex() const { return to_hex(digest()); }

}  // namespace symedit::executor
