// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/geometry/scene.hpp"

#include <algorithm>
#include <random>

#include "symedit/common/error.hpp"
#include "symedit/geometry/ops.hpp"

namespace symedit::geometry {

ImageBuffer render_scene(const SceneSpec& spec) {
    ImageBuffer image(spec.width, spec.height, spec.background);
    const Palette& palette = Palette::standard();
    for (const auto& obj : spec.objects) {
        auto color = palette.color_for(obj.label);
        if (!color) throw Error(ErrorCode::InvalidArgument, "no palette color for '" + obj.label + "'");
        const int r = obj.radius;
        for (int y = obj.cy - r; y <= obj.cy + r; ++y) {
            for (int x = obj.cx - r; x <= obj.cx + r; ++x) {
                if (!image.contains(x, y)) continue;
                const int dx = x - obj.cx, dy = y - obj.cy;
                if (obj.shape == Shape::Disc && dx * dx + dy * dy > r * r) continue;
                image.set(x, y, *color);
            }
        }
    }
    return image;
}

SceneSpec random_scene(std::uint64_t seed, int width, int height, int max_objects,
                       const std::vector<std::string>& labels) {
    if (width < 8 || height < 8) throw Error(ErrorCode::InvalidArgument, "scene must be at least 8x8");
    std::vector<std::string> pool = labels;
    if (pool.empty()) {
        for (const auto& e : Palette::standard().entries()) pool.push_back(e.label);
    }
    std::mt19937_64 rng(seed);
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    SceneSpec spec;
    spec.width = width;
    spec.height = height;
    const int max_radius = std::max(1, std::min(width, height) / 6);
    for (int attempt = 0; attempt < 50 * std::max(1, max_objects) && static_cast<int>(spec.objects.size()) < max_objects;
         ++attempt) {
        SceneObject obj;
        obj.radius = uniform(1, max_radius);
        obj.cx = uniform(obj.radius + 1, width - obj.radius - 2);
        obj.cy = uniform(obj.radius + 1, height - obj.radius - 2);
        obj.shape = uniform(0, 1) == 0 ? Shape::Disc : Shape::Square;
        obj.label = pool[static_cast<std::size_t>(uniform(0, static_cast<int>(pool.size()) - 1))];
        bool clear = std::all_of(spec.objects.begin(), spec.objects.end(), [&](const SceneObject& o) {
            const int gap = obj.radius + o.radius + 3;
            return std::abs(obj.cx - o.cx) >= gap || std::abs(obj.cy - o.cy) >= gap;
        });
        if (clear) spec.objects.push_back(std::move(obj));
    }
    return spec;
}

}  // namespace symedit::geometry
