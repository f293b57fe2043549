// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/planner/planner.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <set>

#include "symedit/common/error.hpp"

namespace symedit::planner {

using dsl::Diagnostic;
using dsl::Program;
using dsl::Severity;

bool DataflowResult::ok() const noexcept {
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

DataflowResult validate_dataflow(const Program& program) {
    DataflowResult result;
    const auto& stmts = program.statements;
    result.dag.nodes = static_cast<int>(stmts.size());

    std::map<std::string, int> defined_at;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        auto [it, inserted] = defined_at.emplace(stmts[i].output_var, static_cast<int>(i));
        if (!inserted || stmts[i].output_var == dsl::kInputVariable) {
            const int line = stmts[i].line > 0 ? stmts[i].line : static_cast<int>(i) + 1;
            result.diagnostics.push_back({ErrorCode::DuplicateAssignment, Severity::Error, line, 1,
                                          "variable '" + stmts[i].output_var + "' is assigned more than once"});
        }
    }

    std::set<std::pair<int, int>> edges;
    std::vector<bool> read(stmts.size(), false);
    for (std::size_t j = 0; j < stmts.size(); ++j) {
        const int line = stmts[j].line > 0 ? stmts[j].line : static_cast<int>(j) + 1;
        for (const auto& arg : stmts[j].args) {
            const auto* ref = std::get_if<dsl::Ref>(&arg);
            if (ref == nullptr || ref->name == dsl::kInputVariable) continue;
            auto it = defined_at.find(ref->name);
            if (it == defined_at.end() || it->second >= static_cast<int>(j)) {
                result.diagnostics.push_back({ErrorCode::UseBeforeDef, Severity::Error, line, 1,
                                              "variable '" + ref->name + "' is used before it is defined"});
                continue;
            }
            edges.emplace(it->second, static_cast<int>(j));
            read[static_cast<std::size_t>(it->second)] = true;
        }
    }
    for (std::size_t i = 0; i + 1 < stmts.size(); ++i) {
        if (read[i]) continue;
        const int line = stmts[i].line > 0 ? stmts[i].line : static_cast<int>(i) + 1;
        result.diagnostics.push_back({ErrorCode::UnusedOutput, Severity::Warning, line, 1,
                                      "output '" + stmts[i].output_var + "' is never used"});
    }
    result.dag.edges.assign(edges.begin(), edges.end());
    return result;
}

std::vector<std::vector<int>> enumerate_topological_orders(const Dag& dag, std::size_t limit) {
    const auto n = static_cast<std::size_t>(dag.nodes);
    std::vector<std::vector<int>> succ(n);
    std::vector<int> indegree(n, 0);
    for (auto [from, to] : dag.edges) {
        succ[static_cast<std::size_t>(from)].push_back(to);
        ++indegree[static_cast<std::size_t>(to)];
    }

    std::vector<std::vector<int>> orders;
    std::vector<int> current;
    std::vector<bool> placed(n, false);
    std::function<void()> visit = [&] {
        if (orders.size() >= limit) return;
        if (current.size() == n) {
            orders.push_back(current);
            return;
        }
        for (std::size_t v = 0; v < n && orders.size() < limit; ++v) {
            if (placed[v] || indegree[v] != 0) continue;
            placed[v] = true;
            current.push_back(static_cast<int>(v));
            for (int s : succ[v]) --indegree[static_cast<std::size_t>(s)];
            visit();
            for (int s : succ[v]) ++indegree[static_cast<std::size_t>(s)];
            current.pop_back();
            placed[v] = false;
        }
    };
    visit();
    return orders;
}

std::string to_string(const Provenance& p) {
    switch (p.kind) {
        case Provenance::Kind::Template: return "template:" + p.template_id;
        case Provenance::Kind::Llm: return "llm";
        case Provenance::Kind::Reordering: return "reordering-of(" + std::to_string(p.reordering_of) + ")";
    }
    return "unknown";
}

SceneSummary summarize_scene(std::span<const geometry::Roi> rois, geometry::Size image_size) {
    SceneSummary s;
    s.image_size = image_size;
    for (const auto& roi : rois) s.segments.push_back({roi.label, roi.centroid, roi.area()});
    return s;
}

Program reorder(const Program& program, std::span<const int> order) {
    if (order.size() != program.statements.size()) {
        throw Error(ErrorCode::InvalidArgument, "ordering does not cover every statement");
    }
    Program out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.statements.push_back(program.statements.at(static_cast<std::size_t>(order[i])));
        out.statements.back().line = static_cast<int>(i) + 1;
    }
    out.source_text = dsl::print_program(out);
    return out;
}

std::vector<Program> enumerate_orderings(const PlanCandidate& candidate, std::size_t limit) {
    std::vector<Program> out;
    for (const auto& order : enumerate_topological_orders(candidate.dataflow, limit)) {
        out.push_back(reorder(candidate.program, order));
    }
    return out;
}

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Lowercase, collapse whitespace, drop trailing punctuation.
std::string normalize_instruction(std::string_view text) {
    std::string out;
    for (char c : lowercase(text)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty() && out.back() != ' ') out.push_back(' ');
        } else {
            out.push_back(c);
        }
    }
    while (!out.empty() && (out.back() == ' ' || out.back() == '.' || out.back() == '!')) out.pop_back();
    return out;
}

std::string strip_article(const std::string& text) {
    static const std::regex article(R"(^(?:the|an|a)\s+)");
    return std::regex_replace(text, article, "");
}

// "dog on the far right" -> "far right dog", "dog in the middle" -> "middle dog".
std::string selector_phrase(const std::string& text) {
    static const std::regex trailing(R"(^(.*?)\s+(?:on|at|in)\s+the\s+(?:(far|most)\s+)?(left|right|middle|center))");
    std::smatch m;
    std::string phrase = strip_article(text);
    if (std::regex_match(phrase, m, trailing)) {
        std::string pos = m[3].str();
        if (m[2].matched && pos != "middle" && pos != "center") pos = "far " + pos;
        phrase = pos + " " + m[1].str();
    }
    return dsl::print_selector(dsl::parse_selector(phrase));
}

std::string singular(const std::string& word) {
    if (word.size() > 3 && word.ends_with("es")) {
        std::string stem = word.substr(0, word.size() - 2);
        if (stem.ends_with("x") || stem.ends_with("s") || stem.ends_with("ch") || stem.ends_with("sh")) return stem;
    }
    if (word.size() > 1 && word.ends_with("s")) return word.substr(0, word.size() - 1);
    return word;
}

std::string quoted(const std::string& text) { return dsl::print_arg(dsl::String{text}); }

struct Match {
    std::string program_text;
    std::vector<std::string> selectors;
};

using Builder = std::function<std::optional<Match>(const std::string&, const SceneSummary&)>;

struct Template {
    std::string id;
    Builder build;
};

std::optional<Match> edit_region(const std::string& selector, const std::string& edit_line) {
    Match m;
    m.selectors = {selector};
    m.program_text = "OBJ0 = Segment(IMAGE, " + quoted(selector) + ")\n" + "IMG0 = Inpaint(IMAGE, OBJ0)\n" + edit_line +
                     "IMG1 = Paste(IMG0, OBJ1)\n";
    return m;
}

std::optional<double> parse_factor(const std::ssub_match& group) {
    if (!group.matched) return std::nullopt;
    const double f = std::stod(group.str());
    if (!(f > 0.0)) throw Error(ErrorCode::NoTemplateMatch, "scale factor must be > 0");
    return f;
}

std::optional<Match> scale_template(const std::string& text, bool enlarge) {
    static const std::regex enlarge_verb(R"(^(?:enlarge|grow|expand|magnify)\s+(.+?)(?:\s+by\s+(?:a\s+factor\s+of\s+)?(\d+(?:\.\d+)?)\s*x?)?$)");
    static const std::regex shrink_verb(R"(^(?:shrink|reduce|minify)\s+(.+?)(?:\s+by\s+(?:a\s+factor\s+of\s+)?(\d+(?:\.\d+)?)\s*x?)?$)");
    static const std::regex bigger(R"(^make\s+(.+?)\s+(?:bigger|larger)$)");
    static const std::regex smaller(R"(^make\s+(.+?)\s+smaller$)");
    std::smatch m;
    double factor = 0.0;
    if (std::regex_match(text, m, enlarge ? enlarge_verb : shrink_verb)) {
        auto f = parse_factor(m[2]);
        factor = enlarge ? f.value_or(1.5) : 1.0 / f.value_or(2.0);
    } else if (std::regex_match(text, m, enlarge ? bigger : smaller)) {
        factor = enlarge ? 1.5 : 0.5;
    } else {
        return std::nullopt;
    }
    return edit_region(selector_phrase(m[1].str()), "OBJ1 = Scale(OBJ0, " + dsl::format_number(factor) + ")\n");
}

const std::vector<Template>& templates() {
    static const std::vector<Template> table = {
        {"enlarge", [](const std::string& text, const SceneSummary&) { return scale_template(text, true); }},
        {"move",
         [](const std::string& text, const SceneSummary& scene) -> std::optional<Match> {
             static const std::regex re(
                 R"(^move\s+(.+?)\s+(?:to\s+the\s+)?(left|right|up|down)(?:wards?)?(?:\s+by\s+(\d+(?:\.\d+)?)\s*%)?$)");
             std::smatch m;
             if (!std::regex_match(text, m, re)) return std::nullopt;
             const std::string dir = m[2].str();
             const double percent = m[3].matched ? std::stod(m[3].str()) : 10.0;
             const int extent = dir == "left" || dir == "right" ? scene.image_size.width : scene.image_size.height;
             const int pixels = geometry::round_half_up(percent / 100.0 * extent);
             return edit_region(selector_phrase(m[1].str()),
                                "OBJ1 = Move(OBJ0, " + quoted(dir) + ", " + std::to_string(pixels) + ")\n");
         }},
        {"remove",
         [](const std::string& text, const SceneSummary&) -> std::optional<Match> {
             static const std::regex re(R"(^(?:remove|delete|erase)\s+(.+)$)");
             std::smatch m;
             if (!std::regex_match(text, m, re)) return std::nullopt;
             Match out;
             out.selectors = {selector_phrase(m[1].str())};
             out.program_text = "OBJ0 = Segment(IMAGE, " + quoted(out.selectors[0]) + ")\nIMG0 = Inpaint(IMAGE, OBJ0)\n";
             return out;
         }},
        {"shrink", [](const std::string& text, const SceneSummary&) { return scale_template(text, false); }},
        {"swap",
         [](const std::string& text, const SceneSummary&) -> std::optional<Match> {
             static const std::regex two(R"(^swap\s+(?:the\s+)?two\s+([a-z_-]+)$)");
             static const std::regex sides(
                 R"(^swap\s+(?:the\s+)?([a-z_-]+)\s+on\s+the\s+((?:far\s+)?(?:left|right))\s+(?:to|with)\s+(?:the\s+)?(?:one\s+on\s+the\s+)?(?:most\s+|far\s+)?(left|right)$)");
             static const std::regex pair(R"(^swap\s+(.+?)\s+(?:and|with)\s+(.+)$)");
             std::smatch m;
             std::string a, b;
             if (std::regex_match(text, m, two)) {
                 const std::string cls = singular(m[1].str());
                 a = "left " + cls;
                 b = "right " + cls;
             } else if (std::regex_match(text, m, sides)) {
                 a = selector_phrase(m[2].str() + " " + m[1].str());
                 b = selector_phrase("far " + m[3].str() + " " + m[1].str());
             } else if (std::regex_match(text, m, pair)) {
                 a = selector_phrase(m[1].str());
                 b = selector_phrase(m[2].str());
             } else {
                 return std::nullopt;
             }
             Match out;
             out.selectors = {a, b};
             out.program_text = "OBJ0 = Segment(IMAGE, " + quoted(a) + ")\nOBJ1 = Segment(IMAGE, " + quoted(b) +
                                ")\nIMG0 = Swap(IMAGE, OBJ0, OBJ1)\n";
             return out;
         }},
        {"translate",
         [](const std::string& text, const SceneSummary&) -> std::optional<Match> {
             static const std::regex re(R"(^(?:change|translate|turn|convert|transform|replace)\s+(.+?)\s+(?:to|into|with)\s+(.+)$)");
             std::smatch m;
             if (!std::regex_match(text, m, re)) return std::nullopt;
             const std::string sel = selector_phrase(m[1].str());
             const std::string target = strip_article(m[2].str());
             const std::string source = dsl::parse_selector(sel).class_name;
             return edit_region(sel, "OBJ1 = Translate(OBJ0, " + quoted(source) + ", " + quoted(target) + ")\n");
         }},
    };
    return table;
}

void check_grounding(const std::string& phrase, const SceneSummary& scene) {
    const dsl::Selector sel = dsl::parse_selector(phrase);
    if (sel.positional != dsl::Positional::All || !sel.attributes.empty()) return;
    const auto count = std::count_if(scene.segments.begin(), scene.segments.end(),
                                     [&](const SceneSegment& s) { return lowercase(s.label) == sel.class_name; });
    if (count != 1) {
        throw Error(ErrorCode::AmbiguousSelector, "'" + phrase + "' matches " + std::to_string(count) +
                                                      " segments; name a position such as left or right");
    }
}

}  // namespace

std::vector<PlanCandidate> plan_from_instruction(std::string_view instruction, const SceneSummary& scene,
                                                 std::size_t limit) {
    const std::string text = normalize_instruction(instruction);
    if (text.empty()) throw Error(ErrorCode::NoTemplateMatch, "instruction is empty");

    std::vector<PlanCandidate> out;
    for (const auto& tmpl : templates()) {
        std::optional<Match> match;
        try {
            match = tmpl.build(text, scene);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptySelector && e.code() != ErrorCode::SyntaxError) throw;
        }
        if (!match) continue;
        for (const auto& phrase : match->selectors) check_grounding(phrase, scene);

        dsl::ParseResult parsed = dsl::parse_program(match->program_text);
        DataflowResult flow = validate_dataflow(parsed.program);
        if (!parsed.ok() || !flow.ok()) {
            throw Error(ErrorCode::Internal, "template '" + tmpl.id + "' produced an invalid program");
        }
        PlanCandidate base{parsed.program, flow.dag, {Provenance::Kind::Template, tmpl.id, -1, 0}};
        const int base_index = static_cast<int>(out.size());
        const auto orders = enumerate_topological_orders(flow.dag, std::max<std::size_t>(limit, 1));
        out.push_back(base);
        for (std::size_t k = 1; k < orders.size(); ++k) {
            Program p = reorder(base.program, orders[k]);
            Dag dag = validate_dataflow(p).dag;
            out.push_back({std::move(p), std::move(dag),
                           {Provenance::Kind::Reordering, tmpl.id, base_index, static_cast<int>(k)}});
        }
    }
    if (out.empty()) throw Error(ErrorCode::NoTemplateMatch, "no template matches '" + std::string(instruction) + "'");
    return out;
}

std::vector<Exemplar> default_exemplars() {
    SceneSummary scene;
    scene.image_size = {64, 64};
    scene.segments = {{"dog", {16, 32}, 100}, {"dog", {48, 32}, 100}, {"cat", {32, 10}, 50}};
    const char* instructions[] = {
        "enlarge the cat", "move the left dog to the right by 10%", "remove the cat",
        "shrink the right dog", "swap the two dogs", "change the left dog to a sheep",
    };
    std::vector<Exemplar> out;
    for (const char* text : instructions) {
        out.push_back({text, dsl::print_program(plan_from_instruction(text, scene, 1).front().program)});
    }
    return out;
}

}  // namespace symedit::planner
