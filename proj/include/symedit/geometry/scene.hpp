// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symedit/geometry/image.hpp"

namespace symedit::geometry {

enum class Shape { Disc, Square };

/// One flat-colored object. `radius` is the half-extent for both shapes.
struct SceneObject {
    std::string label;
    Shape shape = Shape::Disc;
    int cx = 0;
    int cy = 0;
    int radius = 1;
};

struct SceneSpec {
    int width = 64;
    int height = 64;
    Rgba background{60, 130, 70, 255};
    std::vector<SceneObject> objects;
};

/// Draws objects in order over the background using the standard palette.
/// Throws Error(InvalidArgument) for labels missing from the palette.
ImageBuffer render_scene(const SceneSpec& spec);

/// Places up to max_objects non-touching objects (at least a 2-pixel gap
/// between bounding squares, 1 pixel from the border). Labels are drawn from
/// `labels`, or from the whole standard palette when it is empty.
SceneSpec random_scene(std::uint64_t seed, int width, int height, int max_objects,
                       const std::vector<std::string>& labels = {});

}  // namespace symedit::geometry
