// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symedit/dsl/program.hpp"
#include "symedit/geometry/roi.hpp"

namespace symedit::planner {

/// Statement-level dataflow graph. Edge (i, j) means statement j reads the
/// output of statement i; edges are sorted and unique.
struct Dag {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;

    bool operator==(const Dag&) const = default;
};

struct DataflowResult {
    Dag dag;
    std::vector<dsl::Diagnostic> diagnostics;

    /// True when no diagnostic has error severity.
    bool ok() const noexcept;
};

/// Builds the def-use graph. Reads of undefined names (other than IMAGE) or of
/// names defined later yield UseBeforeDef errors; outputs nobody reads yield
/// UnusedOutput warnings, except the last statement's.
DataflowResult validate_dataflow(const dsl::Program& program);

/// Up to `limit` topological orders in lexicographic order, so for graphs
/// whose edges all point forward the identity order comes first.
std::vector<std::vector<int>> enumerate_topological_orders(const Dag& dag, std::size_t limit);

struct Provenance {
    enum class Kind { Template, Llm, Reordering };
    Kind kind = Kind::Template;
    std::string template_id;  // Template, and the source template for Reordering
    int reordering_of = -1;   // index of the base candidate for Reordering
    int ordering_index = 0;   // position in the enumeration of its base

    bool operator==(const Provenance&) const = default;
};

/// "template:<id>", "llm" or "reordering-of(<k>)".
std::string to_string(const Provenance& p);

struct PlanCandidate {
    dsl::Program program;
    Dag dataflow;
    Provenance provenance;
};

struct SceneSegment {
    std::string label;
    geometry::Point centroid;
    std::size_t area = 0;
};

struct SceneSummary {
    std::vector<SceneSegment> segments;
    geometry::Size image_size;
};

SceneSummary summarize_scene(std::span<const geometry::Roi> rois, geometry::Size image_size);

inline constexpr std::size_t kDefaultOrderingLimit = 8;

/// Matches the instruction against the template table and returns each match
/// followed by its alternate orderings, sorted by template id then ordering.
/// Throws Error(NoTemplateMatch) or Error(AmbiguousSelector).
std::vector<PlanCandidate> plan_from_instruction(std::string_view instruction, const SceneSummary& scene,
                                                 std::size_t limit = kDefaultOrderingLimit);

/// The candidate's program re-emitted in up to `limit` topological orders;
/// element 0 is the original order.
std::vector<dsl::Program> enumerate_orderings(const PlanCandidate& candidate, std::size_t limit = kDefaultOrderingLimit);

/// Applies `order` (a permutation of statement indices) to the program.
dsl::Program reorder(const dsl::Program& program, std::span<const int> order);

struct Exemplar {
    std::string instruction;
    std::string program;
};

/// One exemplar per template, generated against a fixed two-dog scene.
std::vector<Exemplar> default_exemplars();

/// The JSON body llm_plan_request sends.
std::string llm_request_body(std::string_view instruction, std::span<const Exemplar> exemplars);

/// POSTs to <endpoint>/invoke and parses {"program": text}. The text must
/// parse and pass validate_dataflow. Throws Error(TransportError),
/// Error(InvalidEndpoint) or Error(InvalidProgramReturned) with the raw text
/// in detail().
dsl::Program llm_plan_request(std::string_view instruction, std::span<const Exemplar> exemplars,
                              std::string_view endpoint, std::chrono::seconds timeout = std::chrono::seconds(30));

}  // namespace symedit::planner
