// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/common/error.hpp"

#include <array>
#include <utility>

namespace symedit {

namespace {

constexpr std::array kNames = {
    std::pair{ErrorCode::SyntaxError, "SyntaxError"},
    std::pair{ErrorCode::UnknownOperation, "UnknownOperation"},
    std::pair{ErrorCode::DuplicateAssignment, "DuplicateAssignment"},
    std::pair{ErrorCode::EmptySelector, "EmptySelector"},
    std::pair{ErrorCode::NoTemplateMatch, "NoTemplateMatch"},
    std::pair{ErrorCode::AmbiguousSelector, "AmbiguousSelector"},
    std::pair{ErrorCode::UseBeforeDef, "UseBeforeDef"},
    std::pair{ErrorCode::UnusedOutput, "UnusedOutput"},
    std::pair{ErrorCode::InvalidProgramReturned, "InvalidProgramReturned"},
    std::pair{ErrorCode::EmptyImage, "EmptyImage"},
    std::pair{ErrorCode::TypeMismatch, "TypeMismatch"},
    std::pair{ErrorCode::ProviderError, "ProviderError"},
    std::pair{ErrorCode::InvalidOverride, "InvalidOverride"},
    std::pair{ErrorCode::MissingArtifact, "MissingArtifact"},
    std::pair{ErrorCode::NoForeground, "NoForeground"},
    std::pair{ErrorCode::SelectorUnresolved, "SelectorUnresolved"},
    std::pair{ErrorCode::SelectorAmbiguous, "SelectorAmbiguous"},
    std::pair{ErrorCode::MaskCoversImage, "MaskCoversImage"},
    std::pair{ErrorCode::RegionFullyClipped, "RegionFullyClipped"},
    std::pair{ErrorCode::DegenerateResult, "DegenerateResult"},
    std::pair{ErrorCode::OverlappingRegions, "OverlappingRegions"},
    std::pair{ErrorCode::FullyOutOfBounds, "FullyOutOfBounds"},
    std::pair{ErrorCode::TooFewElements, "TooFewElements"},
    std::pair{ErrorCode::ShapeMismatch, "ShapeMismatch"},
    std::pair{ErrorCode::DimensionMismatch, "DimensionMismatch"},
    std::pair{ErrorCode::InvalidRange, "InvalidRange"},
    std::pair{ErrorCode::StepOutOfRange, "StepOutOfRange"},
    std::pair{ErrorCode::NumericalDivergence, "NumericalDivergence"},
    std::pair{ErrorCode::NonFiniteLoss, "NonFiniteLoss"},
    std::pair{ErrorCode::LengthMismatch, "LengthMismatch"},
    std::pair{ErrorCode::InvalidEndpoint, "InvalidEndpoint"},
    std::pair{ErrorCode::TransportError, "TransportError"},
    std::pair{ErrorCode::ProtocolError, "ProtocolError"},
    std::pair{ErrorCode::RemoteError, "RemoteError"},
    std::pair{ErrorCode::RoleUnbound, "RoleUnbound"},
    std::pair{ErrorCode::BadImage, "BadImage"},
    std::pair{ErrorCode::IndexOutOfRange, "IndexOutOfRange"},
    std::pair{ErrorCode::ProgramComplete, "ProgramComplete"},
    std::pair{ErrorCode::PlanNotSelected, "PlanNotSelected"},
    std::pair{ErrorCode::NotFound, "NotFound"},
    std::pair{ErrorCode::BadRequest, "BadRequest"},
    std::pair{ErrorCode::IoError, "IoError"},
    std::pair{ErrorCode::InvalidArgument, "InvalidArgument"},
    std::pair{ErrorCode::Internal, "Internal"},
};

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
    for (const auto& [c, name] : kNames) {
        if (c == code) return name;
    }
    return "Internal";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept {
    for (const auto& [c, n] : kNames) {
        if (n == name) return c;
    }
    return std::nullopt;
}

}  // namespace symedit
