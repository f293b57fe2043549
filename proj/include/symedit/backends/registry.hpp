// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symedit/executor/value.hpp"
#include "symedit/inversion/null_text.hpp"

namespace symedit::backends {

enum class Role { Prompter, Segmenter, Inpainter, Translator, Planner };

inline constexpr std::array<Role, 5> kAllRoles = {Role::Prompter, Role::Segmenter, Role::Inpainter, Role::Translator,
                                                  Role::Planner};

std::string_view to_string(Role role) noexcept;
std::optional<Role> role_from_string(std::string_view name) noexcept;

struct ProviderBinding {
    enum class Kind { Stub, Remote };

    Role role = Role::Prompter;
    Kind kind = Kind::Stub;
    std::string endpoint;  // absolute http URL for Remote
    int timeout_ms = 30000;

    static ProviderBinding stub(Role role) { return {role, Kind::Stub, {}, 30000}; }
    static ProviderBinding remote(Role role, std::string url, int timeout_ms = 30000) {
        return {role, Kind::Remote, std::move(url), timeout_ms};
    }
    bool operator==(const ProviderBinding&) const = default;
};

/// Immutable role -> provider table. Every role starts bound to its stub.
class Registry {
public:
    Registry();

    const ProviderBinding& binding(Role role) const noexcept { return bindings_[static_cast<std::size_t>(role)]; }
    const inversion::TranslateConfig& translate_config() const noexcept { return translate_; }

    /// Copy with the binding for binding.role replaced.
    /// Throws Error(InvalidEndpoint) for a remote binding without an absolute
    /// http URL or with a non-positive timeout.
    Registry with(ProviderBinding binding) const;
    Registry with_translate_config(inversion::TranslateConfig cfg) const;

private:
    std::array<ProviderBinding, kAllRoles.size()> bindings_;
    inversion::TranslateConfig translate_;
};

inline Registry register_binding(const Registry& registry, ProviderBinding binding) {
    return registry.with(std::move(binding));
}

/// Parses "role=url" or "role=stub". Throws Error(InvalidArgument) or
/// Error(InvalidEndpoint).
ProviderBinding parse_binding(std::string_view spec);

struct InvokeContext {
    std::uint64_t seed = 0;  // feeds the translator's denoiser
};

/// Dispatches (role, op) to the bound provider. Remote failures throw
/// Error(TransportError), Error(ProtocolError) or Error(RemoteError).
executor::Value invoke(const Registry& registry, Role role, std::string_view op, const std::vector<executor::Value>& args,
                       const InvokeContext& ctx = {});

/// In-process providers:
///   prompter   PG(Image) -> Prompt
///   segmenter  Segment(Image[, Prompt]) -> RegionList (empty without foreground)
///   inpainter  Inpaint(Image, Region) -> Image
///   translator Translate(Region, Prompt, Prompt) -> Region
/// Throws Error(InvalidArgument) for unsupported (role, op) pairs and
/// Error(TypeMismatch) for bad argument kinds.
executor::Value invoke_stub(Role role, std::string_view op, const std::vector<executor::Value>& args,
                            const inversion::TranslateConfig& translate, const InvokeContext& ctx = {});

/// The value kind a provider must return for (role, op).
std::optional<executor::ValueTag> expected_result(Role role, std::string_view op) noexcept;

/// "an image containing: <label> at (<cx>,<cy>); ..." in segment order, or
/// "an image with a uniform background".
std::string stub_prompter(const geometry::ImageBuffer& image);

/// Process-wide count of remote request/response exchanges attempted.
std::uint64_t remote_exchange_count() noexcept;

}  // namespace symedit::backends
