// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>
#include <json.hpp>

#include "symedit/common/endpoint.hpp"
#include "symedit/common/error.hpp"
#include "symedit/planner/planner.hpp"

namespace symedit::planner {

using nlohmann::json;

std::string llm_request_body(std::string_view instruction, std::span<const Exemplar> exemplars) {
    json shots = json::array();
    for (const auto& e : exemplars) shots.push_back({{"instruction", e.instruction}, {"program", e.program}});
    json body = {{"role", "planner"},
                 {"instruction", std::string(instruction)},
                 {"exemplars", std::move(shots)},
                 {"max_length", 256},
                 {"temperature", 0}};
    return body.dump();
}

dsl::Program llm_plan_request(std::string_view instruction, std::span<const Exemplar> exemplars,
                              std::string_view endpoint, std::chrono::seconds timeout) {
    if (exemplars.empty()) throw Error(ErrorCode::InvalidArgument, "planner request needs at least one exemplar");
    const HttpEndpoint ep = parse_endpoint(endpoint);

    httplib::Client client(ep.host, ep.port);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(ep.path("invoke"), llm_request_body(instruction, exemplars), "application/json");
    if (!res) {
        throw Error(ErrorCode::TransportError, "planner endpoint " + ep.url() + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw Error(ErrorCode::TransportError, "planner endpoint returned HTTP " + std::to_string(res->status))
            .with_detail(res->body);
    }

    std::string text;
    try {
        const json reply = json::parse(res->body);
        text = reply.at("program").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidProgramReturned, std::string("planner reply has no program text: ") + e.what())
            .with_detail(res->body);
    }

    dsl::ParseResult parsed = dsl::parse_program(text);
    if (!parsed.ok()) {
        const auto& d = parsed.diagnostics.front();
        throw Error(ErrorCode::InvalidProgramReturned,
                    "returned program does not parse: line " + std::to_string(d.line) + ": " + d.message)
            .with_detail(text);
    }
    const DataflowResult flow = validate_dataflow(parsed.program);
    if (!flow.ok() || parsed.program.statements.empty()) {
        const std::string why = parsed.program.statements.empty() ? "it is empty" : flow.diagnostics.front().message;
        throw Error(ErrorCode::InvalidProgramReturned, "returned program is invalid: " + why).with_detail(text);
    }
    return parsed.program;
}

}  // namespace symedit::planner
