// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symedit {

// Closed set of machine-readable error codes. The HTTP API exposes these
// verbatim, so existing spellings must not change.
enum class ErrorCode {
    // dsl
    SyntaxError,
    UnknownOperation,
    DuplicateAssignment,
    EmptySelector,
    // planner
    NoTemplateMatch,
    AmbiguousSelector,
    UseBeforeDef,
    UnusedOutput,
    InvalidProgramReturned,
    // executor
    EmptyImage,
    TypeMismatch,
    ProviderError,
    InvalidOverride,
    MissingArtifact,
    // geometry
    NoForeground,
    SelectorUnresolved,
    SelectorAmbiguous,
    MaskCoversImage,
    RegionFullyClipped,
    DegenerateResult,
    OverlappingRegions,
    FullyOutOfBounds,
    // guidance / inversion
    TooFewElements,
    ShapeMismatch,
    DimensionMismatch,
    InvalidRange,
    StepOutOfRange,
    NumericalDivergence,
    NonFiniteLoss,
    LengthMismatch,
    // backends
    InvalidEndpoint,
    TransportError,
    ProtocolError,
    RemoteError,
    RoleUnbound,
    // service
    BadImage,
    IndexOutOfRange,
    ProgramComplete,
    PlanNotSelected,
    NotFound,
    BadRequest,
    IoError,
    InvalidArgument,
    Internal,
};

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<int> line = std::nullopt)
        : std::runtime_error(message), code_(code), line_(line) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<int> line() const noexcept { return line_; }

    // Underlying cause for wrapper codes such as ProviderError.
    std::optional<ErrorCode> cause() const noexcept { return cause_; }
    const std::string& role() const noexcept { return role_; }

    Error& with_line(int line) {
        line_ = line;
        return *this;
    }
    Error& with_cause(ErrorCode cause) {
        cause_ = cause;
        return *this;
    }
    Error& with_role(std::string role) {
        role_ = std::move(role);
        return *this;
    }

    // Raw payload kept for diagnosis, e.g. unparseable text from a remote.
    const std::string& detail() const noexcept { return detail_; }
    Error& with_detail(std::string detail) {
        detail_ = std::move(detail);
        return *this;
    }

private:
    ErrorCode code_;
    std::optional<int> line_;
    std::optional<ErrorCode> cause_;
    std::string role_;
    std::string detail_;
};

}  // namespace symedit
