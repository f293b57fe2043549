// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "symedit/backends/registry.hpp"
#include "symedit/dsl/program.hpp"
#include "symedit/executor/value.hpp"

namespace symedit::executor {

struct ValueSummary {
    std::string name;
    ValueTag tag = ValueTag::Image;
    std::string digest;  // 16 hex digits

    bool operator==(const ValueSummary&) const = default;
};

struct StepTrace {
    int line = 0;  // 1-based statement index
    std::string op;
    std::vector<ValueSummary> inputs;  // Ref arguments only
    ValueSummary output;
    std::vector<std::string> artifacts;
    double wall_time_ms = 0.0;
    int repeat_count = 0;

    /// Ignores wall_time_ms.
    bool operator==(const StepTrace& other) const;
};

struct ExecutionState {
    std::map<std::string, Value> bindings;
    std::size_t pc = 0;
    std::vector<StepTrace> history;
    std::uint64_t seed = 0;
};

/// Throws Error(EmptyImage).
ExecutionState init_state(geometry::ImageBuffer image, std::uint64_t seed);

/// FNV-1a over pc and every (name, value digest) binding.
std::uint64_t state_digest(const ExecutionState& state);

/// Content-addressed, append-only PNG store shared across sessions.
class ArtifactStore {
public:
    /// Stores a thumbnail (longest side at most 128 px) and returns its id.
    std::string put_thumbnail(const geometry::ImageBuffer& image);
    std::string put_png(std::vector<std::uint8_t> png);

    std::optional<std::vector<std::uint8_t>> get(const std::string& id) const;
    bool contains(const std::string& id) const;
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::vector<std::uint8_t>> items_;
};

/// Nearest-neighbour downscale so the longest side is at most max_side.
geometry::ImageBuffer thumbnail(const geometry::ImageBuffer& image, int max_side = 128);

using Overrides = std::map<std::string, std::string>;

/// Executes statement pc and advances. Errors carry the 1-based line:
/// Error(ProgramComplete), Error(UseBeforeDef), Error(TypeMismatch),
/// Error(ProviderError) with cause() and role() set, or the geometry error of
/// a Move/Scale/Swap/Paste statement.
StepTrace step(ExecutionState& state, const dsl::Program& program, const backends::Registry& providers,
               ArtifactStore* artifacts = nullptr);

/// Re-executes statement pc - 1, replacing its binding and trace entry.
/// Override keys: "provider" ("stub" or an http URL for the statement's role)
/// and "arg<i>" (literal text for argument i).
/// Throws Error(InvalidArgument) at pc 0 and Error(InvalidOverride).
StepTrace repeat(ExecutionState& state, const dsl::Program& program, const backends::Registry& providers,
                 const Overrides& overrides = {}, ArtifactStore* artifacts = nullptr);

/// Replays from the input image up to pc - 1. Throws Error(InvalidArgument) at pc 0.
void rollback(ExecutionState& state, const dsl::Program& program, const backends::Registry& providers,
              ArtifactStore* artifacts = nullptr);

struct RunResult {
    Value final;
    std::vector<StepTrace> trace;
};

/// init_state then step to completion; an empty program returns the input.
RunResult run(const dsl::Program& program, geometry::ImageBuffer image, const backends::Registry& providers,
              std::uint64_t seed, ArtifactStore* artifacts = nullptr);

/// The role serving an operation, if any.
std::optional<backends::Role> provider_role(dsl::OpName op) noexcept;

/// {"steps":[{"line","op","inputs":[{"name","tag","digest"}],"output":{...},
/// "artifacts":[...],"repeat_count"}]}; wall time is omitted.
std::string trace_to_json(std::span<const StepTrace> trace);
std::vector<StepTrace> trace_from_json(std::string_view text);  // Error(ProtocolError)

/// Self-contained HTML, one section per step with inline thumbnails.
/// Throws Error(MissingArtifact).
std::string render_trace_html(std::span<const StepTrace> trace, const ArtifactStore& artifacts);

}  // namespace symedit::executor
