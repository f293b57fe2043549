// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "symedit/executor/executor.hpp"
#include "symedit/geometry/ops.hpp"
#include "symedit/geometry/scene.hpp"

namespace pipelines {

using symedit::geometry::ImageBuffer;
using symedit::geometry::Mask;
using symedit::geometry::Roi;

// A selector naming exactly one component: the bare class when unique,
// otherwise the class with its left-to-right index.
inline std::string unique_selector(const std::vector<Roi>& rois, std::size_t i) {
    int before = 0, total = 0;
    for (std::size_t j = 0; j < rois.size(); ++j) {
        if (rois[j].label != rois[i].label) continue;
        ++total;
        if (j < i) ++before;
    }
    return total == 1 ? rois[i].label : "#" + std::to_string(before) + " " + rois[i].label;
}

// Edit programs that touch exactly one RoI.
inline std::vector<std::string> single_roi_programs(const std::string& sel, const std::string& label) {
    const std::string seg = "OBJ0 = Segment(IMAGE, \"" + sel + "\")\n";
    return {
        seg + "IMG0 = Inpaint(IMAGE, OBJ0)\nOBJ1 = Translate(OBJ0, \"" + label + "\", \"sheep\")\nIMG1 = Paste(IMG0, OBJ1)\n",
        seg + "IMG0 = Inpaint(IMAGE, OBJ0)\nOBJ1 = Move(OBJ0, \"right\", 3)\nIMG1 = Paste(IMG0, OBJ1)\n",
        seg + "IMG0 = Inpaint(IMAGE, OBJ0)\nOBJ1 = Move(OBJ0, \"up\")\nIMG1 = Paste(IMG0, OBJ1)\n",
        seg + "IMG0 = Inpaint(IMAGE, OBJ0)\nOBJ1 = Scale(OBJ0, 1.25)\nIMG1 = Paste(IMG0, OBJ1)\n",
        seg + "IMG0 = Inpaint(IMAGE, OBJ0)\n",
    };
}

inline symedit::dsl::Program parse_or_throw(const std::string& text) {
    auto r = symedit::dsl::parse_program(text);
    if (!r.ok()) throw std::runtime_error("test program does not parse: " + text);
    return r.program;
}

struct Executed {
    symedit::executor::ExecutionState state;
    ImageBuffer output;
};

inline Executed execute(const symedit::dsl::Program& program, const ImageBuffer& input, std::uint64_t seed = 0) {
    Executed e{symedit::executor::init_state(input, seed), {}};
    while (e.state.pc < program.statements.size()) symedit::executor::step(e.state, program, symedit::backends::Registry{});
    e.output = e.state.bindings.at(program.statements.back().output_var).image();
    return e;
}

// Union of every Region bound during execution, in canvas coordinates.
inline Mask write_set(const symedit::executor::ExecutionState& state, symedit::geometry::Size size) {
    Mask m(size.width, size.height);
    for (const auto& [name, v] : state.bindings)
        if (v.tag() == symedit::executor::ValueTag::Region) m = m.united(v.region().mask);
    return m;
}

inline std::size_t pixels_changed_outside(const ImageBuffer& a, const ImageBuffer& b, const Mask& allowed) {
    std::size_t n = 0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            if (!allowed.get(x, y) && !(a.at(x, y) == b.at(x, y))) ++n;
    return n;
}

// Two pigeons plus a distractor; "right pigeon" names the second.
inline ImageBuffer pigeon_pair() {
    symedit::geometry::SceneSpec spec;
    spec.width = 64;
    spec.height = 40;
    spec.objects = {{"pigeon", symedit::geometry::Shape::Disc, 14, 20, 6},
                    {"cat", symedit::geometry::Shape::Square, 32, 8, 3},
                    {"pigeon", symedit::geometry::Shape::Disc, 48, 22, 6}};
    return symedit::geometry::render_scene(spec);
}

}  // namespace pipelines
