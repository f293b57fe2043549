// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/service/service.hpp"

#include <chrono>
#include <random>

#include "symedit/common/hash.hpp"
#include "symedit/geometry/ops.hpp"
#include "symedit/geometry/png.hpp"

namespace symedit::service {

using nlohmann::json;

namespace {

std::string new_session_id() {
    static std::mutex mutex;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mutex);
    return to_hex(rng());
}

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {
    if (config_.max_sessions == 0) throw Error(ErrorCode::InvalidArgument, "session capacity must be positive");
}

std::vector<planner::PlanCandidate> make_plans(const geometry::ImageBuffer& image, std::string_view instruction,
                                               const backends::Registry& providers, std::size_t ordering_limit) {
    std::vector<geometry::Roi> rois;
    try {
        rois = geometry::segment_components(image);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoForeground) throw;
    }
    const planner::SceneSummary scene = planner::summarize_scene(rois, image.size());
    try {
        return planner::plan_from_instruction(instruction, scene, ordering_limit);
    } catch (const Error& e) {
        const auto& binding = providers.binding(backends::Role::Planner);
        if (e.code() != ErrorCode::NoTemplateMatch || binding.kind != backends::ProviderBinding::Kind::Remote) throw;
        const auto exemplars = planner::default_exemplars();
        dsl::Program program = planner::llm_plan_request(instruction, exemplars, binding.endpoint,
                                                         std::chrono::seconds(std::max(1, binding.timeout_ms / 1000)));
        planner::PlanCandidate base{program, planner::validate_dataflow(program).dag, {}};
        base.provenance.kind = planner::Provenance::Kind::Llm;
        std::vector<planner::PlanCandidate> out{base};
        const auto orders = planner::enumerate_topological_orders(base.dataflow, ordering_limit);
        for (std::size_t k = 1; k < orders.size(); ++k) {
            dsl::Program p = planner::reorder(program, orders[k]);
            planner::Dag dag = planner::validate_dataflow(p).dag;
            out.push_back({std::move(p), std::move(dag),
                           {planner::Provenance::Kind::Reordering, "", 0, static_cast<int>(k)}});
        }
        return out;
    }
}

json Service::create_session(std::span<const std::uint8_t> png, std::string_view instruction) {
    if (instruction.empty()) throw Error(ErrorCode::BadRequest, "instruction must not be empty");
    auto session = std::make_shared<Session>();
    session->image = geometry::decode_png(png);
    session->instruction = std::string(instruction);
    session->plans = make_plans(session->image, instruction, config_.providers, config_.ordering_limit);
    session->created_at_ms = now_ms();
    session->id = new_session_id();

    std::lock_guard lock(table_mutex_);
    while (sessions_.contains(session->id)) session->id = new_session_id();
    lru_.push_front(session->id);
    sessions_.emplace(session->id, std::make_pair(session, lru_.begin()));
    while (sessions_.size() > config_.max_sessions) {
        sessions_.erase(lru_.back());
        lru_.pop_back();
    }
    std::lock_guard session_lock(session->mutex);
    return summary(*session);
}

std::shared_ptr<Session> Service::find(const std::string& id) {
    std::lock_guard lock(table_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no session '" + id + "'");
    lru_.splice(lru_.begin(), lru_, it->second.second);
    return it->second.first;
}

std::size_t Service::session_count() const {
    std::lock_guard lock(table_mutex_);
    return sessions_.size();
}

json Service::summary(const Session& s) const {
    json plans = json::array();
    for (std::size_t i = 0; i < s.plans.size(); ++i) {
        const auto& p = s.plans[i];
        plans.push_back({{"index", i},
                         {"program", dsl::print_program(p.program)},
                         {"provenance", planner::to_string(p.provenance)},
                         {"statements", p.program.statements.size()}});
    }
    json out = {{"id", s.id},
                {"instruction", s.instruction},
                {"image", {{"width", s.image.width()}, {"height", s.image.height()}}},
                {"plans", std::move(plans)},
                {"selected_plan", s.selected_plan ? json(*s.selected_plan) : json(nullptr)},
                {"created_at_ms", s.created_at_ms}};
    if (s.state) {
        const auto& st = *s.state;
        const std::size_t length = s.plans[*s.selected_plan].program.statements.size();
        json history = json::array();
        for (const auto& t : st.history) history.push_back(step_json(t));
        json bindings = json::array();
        for (const auto& [name, value] : st.bindings) {
            bindings.push_back({{"name", name}, {"tag", std::string(executor::to_string(value.tag()))},
                                {"digest", value.digest_hex()}});
        }
        out["state"] = {{"pc", st.pc},
                        {"program_length", length},
                        {"complete", st.pc >= length},
                        {"history", std::move(history)},
                        {"bindings", std::move(bindings)}};
    } else {
        out["state"] = nullptr;
    }
    return out;
}

json Service::get_session(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    return summary(*s);
}

json Service::select_plan(const std::string& id, std::size_t index) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (index >= s->plans.size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "plan " + std::to_string(index) + " does not exist; session has " + std::to_string(s->plans.size()));
    }
    s->selected_plan = index;
    s->state = executor::init_state(s->image, config_.seed);
    return summary(*s);
}

json Service::step(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (!s->state) throw Error(ErrorCode::PlanNotSelected, "select a plan before stepping");
    const auto& program = s->plans[*s->selected_plan].program;
    const executor::StepTrace t = executor::step(*s->state, program, config_.providers, &artifacts_);
    return {{"step", step_json(t)}, {"pc", s->state->pc}, {"complete", s->state->pc >= program.statements.size()}};
}

json Service::repeat(const std::string& id, const executor::Overrides& overrides) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (!s->state) throw Error(ErrorCode::PlanNotSelected, "select a plan before repeating");
    const auto& program = s->plans[*s->selected_plan].program;
    const executor::StepTrace t = executor::repeat(*s->state, program, config_.providers, overrides, &artifacts_);
    return {{"step", step_json(t)}, {"pc", s->state->pc}, {"complete", s->state->pc >= program.statements.size()}};
}

json Service::trace(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (!s->state) return json{{"steps", json::array()}};
    return json::parse(executor::trace_to_json(s->state->history));
}

std::vector<std::uint8_t> Service::artifact(const std::string& id) const {
    auto png = artifacts_.get(id);
    if (!png) throw Error(ErrorCode::NotFound, "no artifact '" + id + "'");
    return *std::move(png);
}

json step_json(const executor::StepTrace& t) {
    json j = json::parse(executor::trace_to_json(std::span(&t, 1))).at("steps").at(0);
    json urls = json::array();
    for (const auto& a : t.artifacts) urls.push_back("/artifacts/" + a);
    j["artifact_urls"] = std::move(urls);
    j["wall_time_ms"] = t.wall_time_ms;
    return j;
}

int http_status(const Error& error) noexcept {
    auto remote = [](ErrorCode c) {
        return c == ErrorCode::TransportError || c == ErrorCode::ProtocolError || c == ErrorCode::RemoteError ||
               c == ErrorCode::InvalidProgramReturned;
    };
    const ErrorCode code = error.code();
    if (remote(code)) return 502;
    if (code == ErrorCode::ProviderError && error.cause() && remote(*error.cause())) return 502;
    switch (code) {
        case ErrorCode::SyntaxError:
        case ErrorCode::UnknownOperation:
        case ErrorCode::DuplicateAssignment:
        case ErrorCode::EmptySelector:
        case ErrorCode::NoTemplateMatch:
        case ErrorCode::AmbiguousSelector:
        case ErrorCode::BadImage:
        case ErrorCode::BadRequest:
        case ErrorCode::InvalidOverride:
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidEndpoint:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::EmptyImage: return 400;
        case ErrorCode::NotFound:
        case ErrorCode::MissingArtifact: return 404;
        case ErrorCode::ProgramComplete:
        case ErrorCode::PlanNotSelected: return 409;
        case ErrorCode::Internal: return 500;
        default: return 422;
    }
}

json error_body(const Error& error) {
    json j = {{"code", std::string(to_string(error.code()))}, {"message", error.what()}};
    if (error.line()) j["line"] = *error.line();
    if (error.cause()) j["cause"] = std::string(to_string(*error.cause()));
    if (!error.role().empty()) j["role"] = error.role();
    return j;
}

}  // namespace symedit::service
