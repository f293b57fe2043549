// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <set>

#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "symedit/backends/wire.hpp"
#include "symedit/dsl/program.hpp"
#include "symedit/planner/planner.hpp"

using namespace symedit;
using namespace symedit::planner;
using nlohmann::json;

namespace {

SceneSummary scene_of(std::vector<std::pair<std::string, double>> objects, geometry::Size size = {100, 60}) {
    SceneSummary s;
    s.image_size = size;
    for (auto& [label, x] : objects) s.segments.push_back({label, {x, 30.0}, 25});
    return s;
}

dsl::Program parse_ok(const std::string& text) {
    auto r = dsl::parse_program(text);
    REQUIRE(r.ok());
    return r.program;
}

std::vector<std::pair<int, int>> sorted_edges(Dag d) {
    std::sort(d.edges.begin(), d.edges.end());
    return d.edges;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("in-order program has def-use edges") {
    auto flow = validate_dataflow(parse_ok(
        "OBJ0 = Segment(IMAGE, \"dog\")\nIMG0 = Inpaint(IMAGE, OBJ0)\nOBJ1 = Scale(OBJ0, 2)\nIMG1 = Paste(IMG0, OBJ1)\n"));
    CHECK(flow.ok());
    CHECK(flow.diagnostics.empty());
    CHECK(flow.dag.nodes == 4);
    CHECK(sorted_edges(flow.dag) == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

TEST_CASE("undefined inputs give one UseBeforeDef each") {
    auto flow = validate_dataflow(parse_ok("A = Paste(B, C)"));
    CHECK_FALSE(flow.ok());
    REQUIRE(flow.diagnostics.size() == 2);
    for (const auto& d : flow.diagnostics) {
        CHECK(d.code == ErrorCode::UseBeforeDef);
        CHECK(d.line == 1);
        CHECK(d.severity == dsl::Severity::Error);
    }
    CHECK(flow.diagnostics[0].message.find("'B'") != std::string::npos);
    CHECK(flow.diagnostics[1].message.find("'C'") != std::string::npos);
}

TEST_CASE("use of a later definition is UseBeforeDef") {
    auto flow = validate_dataflow(parse_ok("A = Inpaint(IMAGE, B)\nB = Segment(IMAGE, \"dog\")\n"));
    REQUIRE_FALSE(flow.ok());
    CHECK(flow.diagnostics[0].code == ErrorCode::UseBeforeDef);
    CHECK(flow.diagnostics[0].line == 1);
}

TEST_CASE("unused intermediate outputs are warnings only") {
    auto flow = validate_dataflow(parse_ok("P = PG(IMAGE)\nO = Segment(IMAGE, \"dog\")\nI = Inpaint(IMAGE, O)\n"));
    CHECK(flow.ok());
    REQUIRE(flow.diagnostics.size() == 1);
    CHECK(flow.diagnostics[0].code == ErrorCode::UnusedOutput);
    CHECK(flow.diagnostics[0].severity == dsl::Severity::Warning);
    CHECK(flow.diagnostics[0].line == 1);
}

TEST_CASE("five-line prompt-segment-inpaint-translate-paste plan has its def-use DAG") {
    // Segment and PG both read only IMAGE, so the dependency graph is a
    // diamond rather than a chain.
    auto flow = validate_dataflow(parse_ok(
        "P0 = PG(IMAGE)\nOBJ0 = Segment(IMAGE, \"left dog\")\nIMG0 = Inpaint(IMAGE, OBJ0)\n"
        "OBJ1 = Translate(OBJ0, P0, \"sheep\")\nIMG1 = Paste(IMG0, OBJ1)\n"));
    CHECK(flow.ok());
    CHECK(flow.dag.nodes == 5);
    CHECK(sorted_edges(flow.dag) == std::vector<std::pair<int, int>>{{0, 3}, {1, 2}, {1, 3}, {2, 4}, {3, 4}});
}

TEST_CASE("chain of five statements has exactly one ordering") {
    PlanCandidate c;
    c.program = parse_ok(
        "A = Segment(IMAGE, \"dog\")\nB = Scale(A, 2)\nC = Move(B, \"left\", 3)\nD = Scale(C, 0.5)\nE = Paste(IMAGE, D)\n");
    c.dataflow = validate_dataflow(c.program).dag;
    auto orders = enumerate_orderings(c);
    REQUIRE(orders.size() == 1);
    CHECK(orders[0] == c.program);
}

TEST_CASE("two independent segments feeding one swap have two orderings") {
    PlanCandidate c;
    c.program = parse_ok("A = Segment(IMAGE, \"left dog\")\nB = Segment(IMAGE, \"right dog\")\nC = Swap(IMAGE, A, B)\n");
    c.dataflow = validate_dataflow(c.program).dag;
    auto orders = enumerate_orderings(c);
    REQUIRE(orders.size() == 2);
    CHECK(orders[0] == c.program);
    CHECK(orders[1].statements[0].output_var == "B");
    CHECK(orders[1].statements[1].output_var == "A");
    CHECK(enumerate_orderings(c, 1).size() == 1);
}

TEST_CASE("topological orders equal brute-force permutation filtering") {
    std::mt19937_64 rng(99);
    for (int n = 0; n <= 6; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            Dag dag = corpus::random_dag(rng, n);
            auto expected = oracle::topo_orders(dag);
            CHECK(enumerate_topological_orders(dag, 100000) == expected);
            auto limited = enumerate_topological_orders(dag, 3);
            CHECK(limited.size() == std::min<std::size_t>(3, expected.size()));
            CHECK(std::equal(limited.begin(), limited.end(), expected.begin()));
        }
    }
}

TEST_CASE("translate instruction yields segment, inpaint, translate, paste") {
    auto plans = plan_from_instruction("Change the left dog to a sheep.", scene_of({{"dog", 20}, {"dog", 70}}));
    REQUIRE(plans.size() >= 2);
    CHECK(dsl::print_program(plans[0].program) ==
          "OBJ0 = Segment(IMAGE, \"left dog\")\n"
          "IMG0 = Inpaint(IMAGE, OBJ0)\n"
          "OBJ1 = Translate(OBJ0, \"dog\", \"sheep\")\n"
          "IMG1 = Paste(IMG0, OBJ1)\n");
    CHECK(to_string(plans[0].provenance) == "template:translate");
    CHECK(to_string(plans[1].provenance) == "reordering-of(0)");
}

TEST_CASE("alternate plans differ in inpaint and translate order") {
    auto plans = plan_from_instruction("change the left woman to an astronaut", scene_of({{"woman", 20}, {"woman", 70}}));
    REQUIRE(plans.size() >= 2);
    auto ops = [](const dsl::Program& p) {
        std::vector<dsl::OpName> v;
        for (const auto& s : p.statements) v.push_back(s.op);
        return v;
    };
    CHECK(ops(plans[0].program)[1] == dsl::OpName::Inpaint);
    CHECK(ops(plans[1].program)[1] == dsl::OpName::Translate);
    CHECK(plans[1].provenance.reordering_of == 0);
    CHECK(plans[1].provenance.ordering_index == 1);
}

TEST_CASE("swap instruction ends in Swap") {
    auto plans = plan_from_instruction("swap the two pigeons", scene_of({{"pigeon", 20}, {"pigeon", 70}}));
    REQUIRE_FALSE(plans.empty());
    CHECK(plans[0].program.statements.back().op == dsl::OpName::Swap);
    CHECK(dsl::print_program(plans[0].program) ==
          "OBJ0 = Segment(IMAGE, \"left pigeon\")\n"
          "OBJ1 = Segment(IMAGE, \"right pigeon\")\n"
          "IMG0 = Swap(IMAGE, OBJ0, OBJ1)\n");
    CHECK(plans.size() == 2);
}

TEST_CASE("far-right to far-left swap phrasing") {
    auto plans = plan_from_instruction("Swap the dog on the far right to the most left",
                                       scene_of({{"dog", 10}, {"dog", 50}, {"dog", 90}}));
    REQUIRE_FALSE(plans.empty());
    CHECK(plans[0].program.statements[0].args[1] == dsl::Arg{dsl::parse_selector("far right dog")});
    CHECK(plans[0].program.statements[1].args[1] == dsl::Arg{dsl::parse_selector("far left dog")});
}

TEST_CASE("position and scale instructions") {
    const SceneSummary scene = scene_of({{"cat", 30}});
    struct Case {
        const char* instruction;
        const char* line;  // the manipulation statement
    };
    const Case cases[] = {
        {"move the cat left", "OBJ1 = Move(OBJ0, \"left\", 10)"},
        {"move the cat down by 50%", "OBJ1 = Move(OBJ0, \"down\", 30)"},
        {"move the cat to the right by 25%", "OBJ1 = Move(OBJ0, \"right\", 25)"},
        {"enlarge the cat", "OBJ1 = Scale(OBJ0, 1.5)"},
        {"enlarge the cat by 3", "OBJ1 = Scale(OBJ0, 3)"},
        {"shrink the cat", "OBJ1 = Scale(OBJ0, 0.5)"},
        {"shrink the cat by 4", "OBJ1 = Scale(OBJ0, 0.25)"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.instruction);
        auto plans = plan_from_instruction(c.instruction, scene);
        REQUIRE_FALSE(plans.empty());
        const std::string text = dsl::print_program(plans[0].program);
        CHECK(text.find(c.line) != std::string::npos);
        CHECK(text.find("Paste(IMG0, OBJ1)") != std::string::npos);
    }
}

TEST_CASE("remove instruction inpaints the region") {
    auto plans = plan_from_instruction("remove the right dog", scene_of({{"dog", 20}, {"dog", 70}}));
    REQUIRE(plans.size() == 1);
    CHECK(dsl::print_program(plans[0].program) == "OBJ0 = Segment(IMAGE, \"right dog\")\nIMG0 = Inpaint(IMAGE, OBJ0)\n");
}

TEST_CASE("planning errors") {
    const SceneSummary dogs = scene_of({{"dog", 20}, {"dog", 70}});
    CHECK(code_of([&] { plan_from_instruction("", dogs); }) == ErrorCode::NoTemplateMatch);
    CHECK(code_of([&] { plan_from_instruction("   ", dogs); }) == ErrorCode::NoTemplateMatch);
    CHECK(code_of([&] { plan_from_instruction("please make it nicer", dogs); }) == ErrorCode::NoTemplateMatch);
    CHECK(code_of([&] { plan_from_instruction("change the dog to a sheep", dogs); }) == ErrorCode::AmbiguousSelector);
    CHECK(code_of([&] { plan_from_instruction("remove the cat", dogs); }) == ErrorCode::AmbiguousSelector);
    CHECK_NOTHROW(plan_from_instruction("remove the brown dog", dogs));
}

TEST_CASE("every emitted candidate round-trips and validates; planning is deterministic") {
    const SceneSummary scene = scene_of({{"dog", 10}, {"cat", 40}, {"dog", 70}, {"fox", 90}});
    const char* instructions[] = {
        "change the left dog to a sheep", "turn the fox into an arctic wolf", "move the cat up",
        "enlarge the right dog by 2",    "shrink the fox",                   "swap the cat and the fox",
        "swap the two dogs",              "remove the left dog",              "replace the cat with a tiger",
    };
    for (const char* instruction : instructions) {
        CAPTURE(instruction);
        auto plans = plan_from_instruction(instruction, scene);
        REQUIRE_FALSE(plans.empty());
        std::set<std::string> texts;
        for (const auto& c : plans) {
            const std::string text = dsl::print_program(c.program);
            CHECK(texts.insert(text).second);
            auto reparsed = dsl::parse_program(text);
            REQUIRE(reparsed.ok());
            CHECK(reparsed.program == c.program);
            auto flow = validate_dataflow(reparsed.program);
            CHECK(flow.ok());
            CHECK(flow.dag == c.dataflow);
        }
        auto again = plan_from_instruction(instruction, scene);
        REQUIRE(again.size() == plans.size());
        for (std::size_t i = 0; i < plans.size(); ++i) {
            CHECK(again[i].program == plans[i].program);
            CHECK(again[i].provenance == plans[i].provenance);
        }
    }
}

TEST_CASE("scene summary mirrors segments") {
    geometry::ImageBuffer img(20, 10, {60, 130, 70, 255});
    img.set(3, 4, *geometry::Palette::standard().color_for("dog"));
    img.set(15, 2, *geometry::Palette::standard().color_for("cat"));
    auto rois = geometry::segment_components(img);
    auto s = summarize_scene(rois, img.size());
    REQUIRE(s.segments.size() == 2);
    CHECK(s.segments[0].label == "dog");
    CHECK(s.segments[0].centroid == geometry::Point{3, 4});
    CHECK(s.segments[0].area == 1);
    CHECK(s.segments[1].label == "cat");
    CHECK(s.image_size == img.size());
}

TEST_CASE("default exemplars are valid programs") {
    auto shots = default_exemplars();
    REQUIRE_FALSE(shots.empty());
    for (const auto& e : shots) {
        auto r = dsl::parse_program(e.program);
        CHECK(r.ok());
        CHECK(validate_dataflow(r.program).ok());
    }
}

TEST_CASE("LLM planner request carries the fixed generation parameters") {
    const std::string canned = "OBJ0 = Segment(IMAGE, \"left dog\")\nIMG0 = Inpaint(IMAGE, OBJ0)\n";
    backends::LoopbackServer server([&](const std::string&) { return backends::RawReply{200, json{{"program", canned}}.dump()}; });
    const auto shots = default_exemplars();
    dsl::Program p = llm_plan_request("get rid of the left dog", shots, server.url());
    CHECK(p == parse_ok(canned));
    CHECK(server.requests() == 1);
    const json body = json::parse(server.last_body());
    CHECK(body["role"] == "planner");
    CHECK(body["instruction"] == "get rid of the left dog");
    CHECK(body["max_length"] == 256);
    CHECK(body["temperature"].is_number_integer());
    CHECK(body["temperature"] == 0);
    CHECK(body["exemplars"].size() == shots.size());
    CHECK(body["exemplars"][0]["program"] == shots[0].program);
    CHECK(server.last_body().find("\"temperature\":0") != std::string::npos);
    CHECK(server.last_body().find("\"max_length\":256") != std::string::npos);
}

TEST_CASE("LLM planner rejects bad replies") {
    const auto shots = default_exemplars();
    std::string reply;
    int status = 200;
    backends::LoopbackServer server([&](const std::string&) { return backends::RawReply{status, reply}; });

    reply = json{{"program", "this is not a program"}}.dump();
    try {
        llm_plan_request("x", shots, server.url());
        FAIL("expected InvalidProgramReturned");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidProgramReturned);
        CHECK(e.detail() == "this is not a program");
    }

    reply = json{{"program", "A = Inpaint(IMAGE, B)"}}.dump();
    CHECK(code_of([&] { llm_plan_request("x", shots, server.url()); }) == ErrorCode::InvalidProgramReturned);
    reply = json{{"program", ""}}.dump();
    CHECK(code_of([&] { llm_plan_request("x", shots, server.url()); }) == ErrorCode::InvalidProgramReturned);
    reply = "<html>";
    CHECK(code_of([&] { llm_plan_request("x", shots, server.url()); }) == ErrorCode::InvalidProgramReturned);
    status = 500;
    CHECK(code_of([&] { llm_plan_request("x", shots, server.url()); }) == ErrorCode::TransportError);
    CHECK(code_of([&] { llm_plan_request("x", {}, server.url()); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { llm_plan_request("x", shots, "ftp://nowhere"); }) == ErrorCode::InvalidEndpoint);
}

TEST_CASE("unreachable LLM endpoint is a transport error") {
    int port = 0;
    {
        backends::LoopbackServer probe([](const std::string&) { return backends::RawReply{}; });
        port = probe.port();
    }
    const auto shots = default_exemplars();
    CHECK(code_of([&] {
              llm_plan_request("x", shots, "http://127.0.0.1:" + std::to_string(port), std::chrono::seconds(2));
          }) == ErrorCode::TransportError);
}
