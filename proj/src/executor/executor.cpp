// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/executor/executor.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>

#include <json.hpp>

#include "symedit/backends/wire.hpp"
#include "symedit/common/base64.hpp"
#include "symedit/common/endpoint.hpp"
#include "symedit/common/error.hpp"
#include "symedit/common/hash.hpp"
#include "symedit/geometry/ops.hpp"
#include "symedit/geometry/png.hpp"

namespace symedit::executor {

using backends::Role;
using dsl::OpName;
using nlohmann::json;

bool StepTrace::operator==(const StepTrace& o) const {
    return line == o.line && op == o.op && inputs == o.inputs && output == o.output && artifacts == o.artifacts &&
           repeat_count == o.repeat_count;
}

ExecutionState init_state(geometry::ImageBuffer image, std::uint64_t seed) {
    if (image.empty()) throw Error(ErrorCode::EmptyImage, "input image is empty");
    ExecutionState state;
    state.bindings.emplace(dsl::kInputVariable, Value(std::move(image)));
    state.seed = seed;
    return state;
}

std::uint64_t state_digest(const ExecutionState& state) {
    Fnv1a h;
    h.update_u64(state.pc);
    for (const auto& [name, value] : state.bindings) h.update_u64(name.size()).update(name).update_u64(value.digest());
    return h.digest();
}

geometry::ImageBuffer thumbnail(const geometry::ImageBuffer& image, int max_side) {
    const int longest = std::max(image.width(), image.height());
    if (longest <= max_side) return image;
    const int w = std::max(1, static_cast<int>(static_cast<long>(image.width()) * max_side / longest));
    const int h = std::max(1, static_cast<int>(static_cast<long>(image.height()) * max_side / longest));
    geometry::ImageBuffer out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int sx = static_cast<int>((static_cast<long>(2 * x + 1) * image.width()) / (2L * w));
            const int sy = static_cast<int>((static_cast<long>(2 * y + 1) * image.height()) / (2L * h));
            out.set(x, y, image.at(sx, sy));
        }
    return out;
}

std::string ArtifactStore::put_thumbnail(const geometry::ImageBuffer& image) {
    return put_png(geometry::encode_png(thumbnail(image)));
}

std::string ArtifactStore::put_png(std::vector<std::uint8_t> png) {
    std::string id = to_hex(fnv1a64(png));
    std::lock_guard lock(mutex_);
    items_.try_emplace(id, std::move(png));
    return id;
}

std::optional<std::vector<std::uint8_t>> ArtifactStore::get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = items_.find(id);
    if (it == items_.end()) return std::nullopt;
    return it->second;
}

bool ArtifactStore::contains(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return items_.contains(id);
}

std::size_t ArtifactStore::size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
}

std::optional<Role> provider_role(OpName op) noexcept {
    switch (op) {
        case OpName::PG: return Role::Prompter;
        case OpName::Segment: return Role::Segmenter;
        case OpName::Inpaint: return Role::Inpainter;
        case OpName::Translate: return Role::Translator;
        default: return std::nullopt;
    }
}

namespace {

struct Resolved {
    std::vector<const Value*> refs;  // null for literals
    std::vector<ValueSummary> inputs;
};

Resolved resolve_refs(const ExecutionState& state, const dsl::Statement& stmt) {
    Resolved r;
    for (const auto& arg : stmt.args) {
        const auto* ref = std::get_if<dsl::Ref>(&arg);
        if (ref == nullptr) {
            r.refs.push_back(nullptr);
            continue;
        }
        auto it = state.bindings.find(ref->name);
        if (it == state.bindings.end()) {
            throw Error(ErrorCode::UseBeforeDef, "variable '" + ref->name + "' is not bound");
        }
        r.refs.push_back(&it->second);
        r.inputs.push_back({ref->name, it->second.tag(), it->second.digest_hex()});
    }
    return r;
}

class Args {
public:
    Args(const dsl::Statement& stmt, const Resolved& resolved) : stmt_(stmt), resolved_(resolved) {}

    std::size_t size() const noexcept { return stmt_.args.size(); }

    const Value& value(std::size_t i, ValueTag want) const {
        const Value* v = resolved_.refs.at(i);
        if (v == nullptr || v->tag() != want) {
            throw Error(ErrorCode::TypeMismatch, "argument " + std::to_string(i + 1) + " of " +
                                                     std::string(dsl::to_string(stmt_.op)) + " must be " +
                                                     std::string(to_string(want)) + ", got " + describe(i));
        }
        return *v;
    }

    // A Prompt variable or a string literal.
    std::string text(std::size_t i) const {
        if (const auto* s = std::get_if<dsl::String>(&stmt_.args.at(i))) return s->value;
        return value(i, ValueTag::Prompt).prompt().text;
    }

    // A Number variable or a numeric literal.
    double number(std::size_t i) const {
        if (const auto* n = std::get_if<dsl::Number>(&stmt_.args.at(i))) return n->value;
        return value(i, ValueTag::Number).number();
    }

    const dsl::Selector& selector(std::size_t i) const {
        const auto* s = std::get_if<dsl::Selector>(&stmt_.args.at(i));
        if (s == nullptr) {
            throw Error(ErrorCode::TypeMismatch, "argument " + std::to_string(i + 1) + " of Segment must be a selector");
        }
        return *s;
    }

private:
    std::string describe(std::size_t i) const {
        if (const Value* v = resolved_.refs.at(i)) return std::string(to_string(v->tag()));
        return "literal " + dsl::print_arg(stmt_.args.at(i));
    }

    const dsl::Statement& stmt_;
    const Resolved& resolved_;
};

Value call_provider(const backends::Registry& providers, Role role, std::string_view op, std::vector<Value> args,
                    const ExecutionState& state) {
    try {
        return backends::invoke(providers, role, op, args, {state.seed});
    } catch (const Error& e) {
        throw Error(ErrorCode::ProviderError, std::string(backends::to_string(role)) + ": " + e.what())
            .with_cause(e.code())
            .with_role(std::string(backends::to_string(role)))
            .with_detail(e.detail());
    }
}

int move_amount_default(const geometry::Roi& roi, geometry::Direction dir) {
    const bool horizontal = dir == geometry::Direction::Left || dir == geometry::Direction::Right;
    return geometry::round_half_up(0.1 * (horizontal ? roi.bounds().width : roi.bounds().height));
}

Value execute(const dsl::Statement& stmt, const Args& a, const ExecutionState& state,
              const backends::Registry& providers) {
    const auto& image_of = [&](std::size_t i) -> const geometry::ImageBuffer& { return a.value(i, ValueTag::Image).image(); };
    const auto& region_of = [&](std::size_t i) -> const geometry::Roi& { return a.value(i, ValueTag::Region).region(); };

    switch (stmt.op) {
        case OpName::PG:
            return call_provider(providers, Role::Prompter, "PG", {image_of(0)}, state);
        case OpName::Segment: {
            const dsl::Selector& sel = a.selector(1);
            Value found = call_provider(providers, Role::Segmenter, "Segment",
                                        {image_of(0), Prompt{dsl::print_selector(sel)}}, state);
            try {
                return geometry::resolve_selector(found.regions(), sel);
            } catch (const Error& e) {
                throw Error(ErrorCode::ProviderError, std::string("segmenter: ") + e.what())
                    .with_cause(e.code())
                    .with_role("segmenter");
            }
        }
        case OpName::Inpaint:
            return call_provider(providers, Role::Inpainter, "Inpaint", {image_of(0), region_of(1)}, state);
        case OpName::Translate:
            return call_provider(providers, Role::Translator, "Translate",
                                 {region_of(0), Prompt{a.text(1)}, Prompt{a.text(2)}}, state);
        case OpName::Move: {
            const geometry::Roi& roi = region_of(0);
            auto dir = geometry::direction_from_string(a.text(1));
            if (!dir) throw Error(ErrorCode::TypeMismatch, "Move direction must be left, right, up or down");
            const int amount = a.size() > 2 ? geometry::round_half_up(a.number(2)) : move_amount_default(roi, *dir);
            return geometry::move_roi(roi, *dir, amount, roi.bounds());
        }
        case OpName::Scale: {
            const geometry::Roi& roi = region_of(0);
            return geometry::scale_roi(roi, a.number(1), roi.bounds());
        }
        case OpName::Swap:
            return geometry::swap_rois(image_of(0), region_of(1), region_of(2));
        case OpName::Paste: {
            std::optional<geometry::Point> at;
            if (a.size() == 4) at = geometry::Point{a.number(2), a.number(3)};
            const geometry::ImageBuffer& base = image_of(0);
            const geometry::Roi& roi = region_of(1);
            if (roi.bounds() != base.size()) {
                throw Error(ErrorCode::ShapeMismatch, "region canvas does not match the paste target");
            }
            return geometry::paste(base, roi, at);
        }
        case OpName::Load:
            return geometry::read_png(a.text(0));
        case OpName::Save: {
            const geometry::ImageBuffer& image = image_of(0);
            geometry::write_png(a.text(1), image);
            return image;
        }
    }
    throw Error(ErrorCode::Internal, "unhandled operation");
}

std::vector<std::string> render_artifacts(const Value& v, ArtifactStore* store) {
    if (store == nullptr) return {};
    switch (v.tag()) {
        case ValueTag::Image: return {store->put_thumbnail(v.image())};
        case ValueTag::Region: return {store->put_thumbnail(v.region().patch)};
        case ValueTag::RegionList: {
            std::vector<std::string> ids;
            for (const auto& r : v.regions()) ids.push_back(store->put_thumbnail(r.patch));
            return ids;
        }
        default: return {};
    }
}

StepTrace execute_at(ExecutionState& state, const dsl::Statement& stmt, std::size_t index,
                     const backends::Registry& providers, ArtifactStore* artifacts) {
    const int line = static_cast<int>(index) + 1;
    const auto start = std::chrono::steady_clock::now();
    try {
        const Resolved resolved = resolve_refs(state, stmt);
        Value out = execute(stmt, Args(stmt, resolved), state, providers);
        StepTrace trace;
        trace.line = line;
        trace.op = std::string(dsl::to_string(stmt.op));
        trace.inputs = resolved.inputs;
        trace.output = {stmt.output_var, out.tag(), out.digest_hex()};
        trace.artifacts = render_artifacts(out, artifacts);
        state.bindings.insert_or_assign(stmt.output_var, std::move(out));
        trace.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return trace;
    } catch (Error& e) {
        e.with_line(line);
        throw;
    }
}

dsl::Arg parse_override_arg(const std::string& text, const dsl::Statement& stmt, std::size_t index) {
    const dsl::OpSignature& sig = dsl::signature(stmt.op);
    std::string literal = text;
    if (literal.size() >= 2 && literal.front() == '"' && literal.back() == '"') {
        literal = literal.substr(1, literal.size() - 2);
    } else {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(v)) return dsl::Number{v};
        if (dsl::is_identifier(text) && static_cast<int>(index) != sig.selector_arg &&
            static_cast<int>(index) != sig.direction_arg) {
            return dsl::Ref{text};
        }
    }
    if (static_cast<int>(index) == sig.selector_arg) {
        try {
            return dsl::parse_selector(literal);
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidOverride, std::string("bad selector override: ") + e.what());
        }
    }
    return dsl::String{literal};
}

}  // namespace

StepTrace step(ExecutionState& state, const dsl::Program& program, const backends::Registry& providers,
               ArtifactStore* artifacts) {
    if (state.pc >= program.statements.size()) {
        throw Error(ErrorCode::ProgramComplete, "program has no statement left to execute");
    }
    StepTrace trace = execute_at(state, program.statements[state.pc], state.pc, providers, artifacts);
    state.history.push_back(trace);
    ++state.pc;
    return trace;
}

StepTrace repeat(ExecutionState& state, const dsl::Program& program, const backends::Registry& providers,
                 const Overrides& overrides, ArtifactStore* artifacts) {
    if (state.pc == 0) throw Error(ErrorCode::InvalidArgument, "nothing to repeat before the first step");
    const std::size_t index = state.pc - 1;
    dsl::Statement stmt = program.statements.at(index);
    backends::Registry registry = providers;

    for (const auto& [key, text] : overrides) {
        if (key == "provider") {
            auto role = provider_role(stmt.op);
            if (!role) {
                throw Error(ErrorCode::InvalidOverride,
                            std::string(dsl::to_string(stmt.op)) + " is not served by a provider");
            }
            try {
                registry = registry.with(text == "stub" ? backends::ProviderBinding::stub(*role)
                                                        : backends::ProviderBinding::remote(*role, text));
            } catch (const Error& e) {
                throw Error(ErrorCode::InvalidOverride, std::string("bad provider override: ") + e.what());
            }
        } else if (key.starts_with("arg")) {
            std::size_t i = 0;
            auto [ptr, ec] = std::from_chars(key.data() + 3, key.data() + key.size(), i);
            if (key.size() == 3 || ec != std::errc{} || ptr != key.data() + key.size() || i >= stmt.args.size()) {
                throw Error(ErrorCode::InvalidOverride, "override '" + key + "' does not name an argument of line " +
                                                            std::to_string(index + 1));
            }
            stmt.args[i] = parse_override_arg(text, stmt, i);
        } else {
            throw Error(ErrorCode::InvalidOverride, "unknown override '" + key + "'");
        }
    }

    const int previous = state.history.empty() ? 0 : state.history.back().repeat_count;
    StepTrace trace = execute_at(state, stmt, index, registry, artifacts);
    trace.repeat_count = previous + 1;
    if (state.history.size() == state.pc) {
        state.history.back() = trace;
    } else {
        state.history.push_back(trace);
    }
    return trace;
}

void rollback(ExecutionState& state, const dsl::Program& program, const backends::Registry& providers,
              ArtifactStore* artifacts) {
    if (state.pc == 0) throw Error(ErrorCode::InvalidArgument, "nothing to roll back");
    const std::size_t target = state.pc - 1;
    ExecutionState fresh = init_state(state.bindings.at(std::string(dsl::kInputVariable)).image(), state.seed);
    while (fresh.pc < target) step(fresh, program, providers, artifacts);
    state = std::move(fresh);
}

RunResult run(const dsl::Program& program, geometry::ImageBuffer image, const backends::Registry& providers,
              std::uint64_t seed, ArtifactStore* artifacts) {
    ExecutionState state = init_state(std::move(image), seed);
    while (state.pc < program.statements.size()) step(state, program, providers, artifacts);
    const std::string& last =
        program.statements.empty() ? std::string(dsl::kInputVariable) : program.statements.back().output_var;
    return {state.bindings.at(last), std::move(state.history)};
}

namespace {

json summary_json(const ValueSummary& s) {
    return {{"name", s.name}, {"tag", std::string(to_string(s.tag))}, {"digest", s.digest}};
}

ValueSummary summary_from_json(const json& j) {
    ValueSummary s;
    s.name = j.at("name").get<std::string>();
    const std::string tag = j.at("tag").get<std::string>();
    bool known = false;
    for (ValueTag t : {ValueTag::Image, ValueTag::Region, ValueTag::Prompt, ValueTag::Number, ValueTag::RegionList}) {
        if (to_string(t) == tag) {
            s.tag = t;
            known = true;
        }
    }
    if (!known) throw Error(ErrorCode::ProtocolError, "unknown value tag '" + tag + "'");
    s.digest = j.at("digest").get<std::string>();
    return s;
}

std::string html_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string summary_html(const ValueSummary& s) {
    return "<code>" + html_escape(s.name) + "</code> " + std::string(to_string(s.tag)) + " <small>" + s.digest +
           "</small>";
}

}  // namespace

std::string trace_to_json(std::span<const StepTrace> trace) {
    json steps = json::array();
    for (const auto& t : trace) {
        json inputs = json::array();
        for (const auto& in : t.inputs) inputs.push_back(summary_json(in));
        steps.push_back({{"line", t.line},
                         {"op", t.op},
                         {"inputs", std::move(inputs)},
                         {"output", summary_json(t.output)},
                         {"artifacts", t.artifacts},
                         {"repeat_count", t.repeat_count}});
    }
    return json{{"steps", std::move(steps)}}.dump();
}

std::vector<StepTrace> trace_from_json(std::string_view text) {
    std::vector<StepTrace> out;
    try {
        const json j = json::parse(text);
        for (const auto& s : j.at("steps")) {
            StepTrace t;
            t.line = s.at("line").get<int>();
            t.op = s.at("op").get<std::string>();
            for (const auto& in : s.at("inputs")) t.inputs.push_back(summary_from_json(in));
            t.output = summary_from_json(s.at("output"));
            t.artifacts = s.at("artifacts").get<std::vector<std::string>>();
            t.repeat_count = s.at("repeat_count").get<int>();
            out.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ProtocolError, std::string("malformed trace: ") + e.what());
    }
    return out;
}

std::string render_trace_html(std::span<const StepTrace> trace, const ArtifactStore& artifacts) {
    std::string html =
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>symedit trace</title>"
        "<style>body{font-family:sans-serif}section{border-top:1px solid #ccc;padding:8px}"
        "img{image-rendering:pixelated;margin-right:8px}</style></head><body>\n<h1>Execution trace</h1>\n";
    for (const auto& t : trace) {
        html += "<section id=\"line-" + std::to_string(t.line) + "\">\n<h2>Line " + std::to_string(t.line) + ": " +
                html_escape(t.op) + "</h2>\n";
        if (t.repeat_count > 0) html += "<p>repeated " + std::to_string(t.repeat_count) + "x</p>\n";
        html += "<p>inputs:";
        for (const auto& in : t.inputs) html += " " + summary_html(in);
        html += "</p>\n<p>output: " + summary_html(t.output) + "</p>\n";
        for (const auto& id : t.artifacts) {
            auto png = artifacts.get(id);
            if (!png) throw Error(ErrorCode::MissingArtifact, "artifact " + id + " is not in the store", t.line);
            html += "<img alt=\"" + id + "\" src=\"data:image/png;base64," + base64_encode(*png) + "\">";
        }
        html += "\n</section>\n";
    }
    html += "<script type=\"application/json\" id=\"trace\">" + html_escape(trace_to_json(trace)) +
            "</script>\n</body></html>\n";
    return html;
}

}  // namespace symedit::executor
