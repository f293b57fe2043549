// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/backends/registry.hpp"

#include "symedit/common/endpoint.hpp"
#include "symedit/common/error.hpp"
#include "symedit/dsl/program.hpp"
#include "symedit/geometry/ops.hpp"

namespace symedit::backends {

using executor::Value;
using executor::ValueTag;

std::string_view to_string(Role role) noexcept {
    switch (role) {
        case Role::Prompter: return "prompter";
        case Role::Segmenter: return "segmenter";
        case Role::Inpainter: return "inpainter";
        case Role::Translator: return "translator";
        case Role::Planner: return "planner";
    }
    return "prompter";
}

std::optional<Role> role_from_string(std::string_view name) noexcept {
    for (Role r : kAllRoles) {
        if (to_string(r) == name) return r;
    }
    return std::nullopt;
}

Registry::Registry() {
    for (Role r : kAllRoles) bindings_[static_cast<std::size_t>(r)] = ProviderBinding::stub(r);
}

Registry Registry::with(ProviderBinding binding) const {
    if (binding.kind == ProviderBinding::Kind::Remote) {
        parse_endpoint(binding.endpoint);
        if (binding.timeout_ms <= 0) throw Error(ErrorCode::InvalidEndpoint, "remote timeout must be positive");
    }
    Registry copy = *this;
    copy.bindings_[static_cast<std::size_t>(binding.role)] = std::move(binding);
    return copy;
}

Registry Registry::with_translate_config(inversion::TranslateConfig cfg) const {
    Registry copy = *this;
    copy.translate_ = std::move(cfg);
    return copy;
}

ProviderBinding parse_binding(std::string_view spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "backend must be role=url or role=stub");
    auto role = role_from_string(spec.substr(0, eq));
    if (!role) throw Error(ErrorCode::InvalidArgument, "unknown role '" + std::string(spec.substr(0, eq)) + "'");
    std::string_view target = spec.substr(eq + 1);
    if (target == "stub") return ProviderBinding::stub(*role);
    parse_endpoint(target);
    return ProviderBinding::remote(*role, std::string(target));
}

std::optional<ValueTag> expected_result(Role role, std::string_view op) noexcept {
    if (role == Role::Prompter && op == "PG") return ValueTag::Prompt;
    if (role == Role::Segmenter && op == "Segment") return ValueTag::RegionList;
    if (role == Role::Inpainter && op == "Inpaint") return ValueTag::Image;
    if (role == Role::Translator && op == "Translate") return ValueTag::Region;
    return std::nullopt;
}

std::string stub_prompter(const geometry::ImageBuffer& image) {
    std::vector<geometry::Roi> rois;
    try {
        rois = geometry::segment_components(image);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoForeground) throw;
        return "an image with a uniform background";
    }
    std::string text = "an image containing: ";
    for (std::size_t i = 0; i < rois.size(); ++i) {
        if (i > 0) text += "; ";
        text += rois[i].label + " at (" + dsl::format_number(rois[i].centroid.x) + "," +
                dsl::format_number(rois[i].centroid.y) + ")";
    }
    return text;
}

namespace {

void require_args(const std::vector<Value>& args, std::size_t min, std::size_t max, std::string_view op) {
    if (args.size() < min || args.size() > max) {
        throw Error(ErrorCode::InvalidArgument, std::string(op) + " takes " + std::to_string(min) +
                                                    (min == max ? "" : "-" + std::to_string(max)) + " arguments");
    }
}

}  // namespace

Value invoke_stub(Role role, std::string_view op, const std::vector<Value>& args,
                  const inversion::TranslateConfig& translate, const InvokeContext& ctx) {
    if (!expected_result(role, op)) {
        throw Error(ErrorCode::InvalidArgument,
                    "role " + std::string(to_string(role)) + " does not provide '" + std::string(op) + "'");
    }
    switch (role) {
        case Role::Prompter:
            require_args(args, 1, 1, op);
            return executor::Prompt{stub_prompter(args[0].image())};
        case Role::Segmenter:
            require_args(args, 1, 2, op);
            try {
                return geometry::segment_components(args[0].image());
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoForeground) throw;
                return executor::RegionList{};
            }
        case Role::Inpainter:
            require_args(args, 2, 2, op);
            return geometry::inpaint_fill(args[0].image(), args[1].region().mask);
        case Role::Translator: {
            require_args(args, 3, 3, op);
            inversion::TranslateConfig cfg = translate;
            cfg.seed = ctx.seed;
            return inversion::translate_patch(args[0].region(), args[1].prompt().text, args[2].prompt().text, cfg);
        }
        case Role::Planner: break;
    }
    throw Error(ErrorCode::Internal, "unreachable provider dispatch");
}

}  // namespace symedit::backends
