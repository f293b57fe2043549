// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "symedit/backends/registry.hpp"
#include "symedit/common/error.hpp"
#include "symedit/executor/executor.hpp"
#include "symedit/planner/planner.hpp"

namespace httplib {
class Server;
}

namespace symedit::service {

struct ServiceConfig {
    backends::Registry providers;
    std::uint64_t seed = 0;
    std::size_t max_sessions = 64;
    std::size_t ordering_limit = planner::kDefaultOrderingLimit;
};

struct Session {
    std::string id;
    geometry::ImageBuffer image;
    std::string instruction;
    std::vector<planner::PlanCandidate> plans;
    std::optional<std::size_t> selected_plan;
    std::optional<executor::ExecutionState> state;
    std::int64_t created_at_ms = 0;
    std::mutex mutex;  // serializes operations on this session
};

/// Template planning over the locally segmented scene. On NoTemplateMatch,
/// falls back to the LLM planner when the planner role is bound remotely.
std::vector<planner::PlanCandidate> make_plans(const geometry::ImageBuffer& image, std::string_view instruction,
                                               const backends::Registry& providers, std::size_t ordering_limit);

/// In-memory session table (LRU, capacity max_sessions) plus the shared
/// artifact store. Every method returns a JSON document; failures throw Error.
class Service {
public:
    explicit Service(ServiceConfig config);

    /// Throws Error(BadImage), Error(BadRequest), Error(NoTemplateMatch) or
    /// Error(AmbiguousSelector).
    nlohmann::json create_session(std::span<const std::uint8_t> png, std::string_view instruction);
    nlohmann::json get_session(const std::string& id);
    /// Throws Error(IndexOutOfRange).
    nlohmann::json select_plan(const std::string& id, std::size_t index);
    /// Throws Error(PlanNotSelected), Error(ProgramComplete) or executor errors.
    nlohmann::json step(const std::string& id);
    nlohmann::json repeat(const std::string& id, const executor::Overrides& overrides);
    nlohmann::json trace(const std::string& id);
    /// PNG bytes; Error(NotFound) for unknown ids.
    std::vector<std::uint8_t> artifact(const std::string& id) const;

    executor::ArtifactStore& artifacts() noexcept { return artifacts_; }
    const ServiceConfig& config() const noexcept { return config_; }
    std::size_t session_count() const;

private:
    std::shared_ptr<Session> find(const std::string& id);
    nlohmann::json summary(const Session& s) const;

    ServiceConfig config_;
    executor::ArtifactStore artifacts_;
    mutable std::mutex table_mutex_;
    std::list<std::string> lru_;  // front = most recent
    std::unordered_map<std::string, std::pair<std::shared_ptr<Session>, std::list<std::string>::iterator>> sessions_;
};

/// HTTP status for an error code: 400 input, 404 lookup, 409 state,
/// 422 execution, 502 remote provider, 500 internal.
int http_status(const Error& error) noexcept;

/// {"code", "message", "line"?, "cause"?, "role"?}
nlohmann::json error_body(const Error& error);

/// JSON for one trace entry, with artifact URLs.
nlohmann::json step_json(const executor::StepTrace& trace);

/// Registers the session API routes (with permissive CORS headers).
void mount_routes(httplib::Server& server, Service& service);

struct AblationOutput {
    std::string name;  // "cfg_w<w>" or "in"
    geometry::ImageBuffer image;
};

struct AblationReport {
    std::vector<AblationOutput> outputs;  // CFG per w in input order, then IN
    std::vector<std::vector<double>> rms;  // pairwise RMS over RGB bytes
};

/// Translates the selected region once per w in CFG mode and once in IN mode,
/// pasting each result back into the image. Writes <name>.png per output and
/// rms.json when out_dir is set. Throws Error(InvalidArgument) for an empty w list.
AblationReport ablate(const geometry::ImageBuffer& image, const dsl::Selector& selector, std::string_view source,
                      std::string_view target, const std::vector<double>& ws, const inversion::TranslateConfig& base,
                      const std::optional<std::filesystem::path>& out_dir = std::nullopt);

double image_rms(const geometry::ImageBuffer& a, const geometry::ImageBuffer& b);

}  // namespace symedit::service
