// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "symedit/backends/registry.hpp"
#include "symedit/common/error.hpp"
#include "symedit/dsl/program.hpp"
#include "symedit/executor/executor.hpp"
#include "symedit/geometry/ops.hpp"
#include "symedit/geometry/png.hpp"
#include "symedit/geometry/scene.hpp"
#include "symedit/planner/planner.hpp"
#include "symedit/service/service.hpp"

using namespace symedit;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitExec = 3;
constexpr int kExitIo = 4;

int exit_code(const Error& e) {
    switch (e.code()) {
        case ErrorCode::SyntaxError:
        case ErrorCode::UnknownOperation:
        case ErrorCode::DuplicateAssignment:
        case ErrorCode::EmptySelector:
        case ErrorCode::NoTemplateMatch:
        case ErrorCode::AmbiguousSelector:
        case ErrorCode::UseBeforeDef:
        case ErrorCode::InvalidProgramReturned:
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidEndpoint: return kExitParse;
        case ErrorCode::IoError:
        case ErrorCode::BadImage: return kExitIo;
        default: return kExitExec;
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
}

struct Globals {
    std::uint64_t seed = 0;
    std::string config;
    std::vector<std::string> backends;

    backends::Registry registry() const {
        backends::Registry r;
        if (!config.empty()) r = r.with_translate_config(inversion::parse_translate_config(read_text(config)));
        for (const auto& spec : backends) r = r.with(backends::parse_binding(spec));
        return r;
    }
    inversion::TranslateConfig translate() const {
        inversion::TranslateConfig cfg =
            config.empty() ? inversion::TranslateConfig{} : inversion::parse_translate_config(read_text(config));
        cfg.seed = seed;
        return cfg;
    }
};

dsl::Program load_program(const std::string& path) {
    dsl::ParseResult parsed = dsl::parse_program(read_text(path));
    for (const auto& d : parsed.diagnostics) {
        std::cerr << path << ":" << d.line << ":" << d.column << ": "
                  << (d.severity == dsl::Severity::Error ? "error" : "warning") << ": [" << to_string(d.code) << "] "
                  << d.message << "\n";
    }
    if (!parsed.ok()) throw Error(ErrorCode::SyntaxError, "program has errors");
    const planner::DataflowResult flow = planner::validate_dataflow(parsed.program);
    for (const auto& d : flow.diagnostics) {
        std::cerr << path << ":" << d.line << ": " << (d.severity == dsl::Severity::Error ? "error" : "warning")
                  << ": [" << to_string(d.code) << "] " << d.message << "\n";
    }
    if (!flow.ok()) throw Error(ErrorCode::UseBeforeDef, "program has dataflow errors");
    return parsed.program;
}

void print_trace_line(const executor::StepTrace& t) {
    std::cout << "line " << t.line << " " << t.op << " -> " << t.output.name << " [" << executor::to_string(t.output.tag)
              << " " << t.output.digest << "]";
    if (t.repeat_count > 0) std::cout << " (repeat " << t.repeat_count << ")";
    std::cout << "\n";
}

std::vector<double> parse_ws(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "bad guidance scale '" + item + "'");
        }
    }
    return out;
}

int interactive(const dsl::Program& program, const geometry::ImageBuffer& image, const Globals& g,
                const std::string& out_path) {
    const backends::Registry registry = g.registry();
    executor::ExecutionState state = executor::init_state(image, g.seed);
    std::cout << dsl::print_program(program);
    std::cout << "commands: n(ext), r(epeat) [key=value ...], b(ack), p(rint), q(uit)\n";
    std::string line;
    while (std::cout << "[pc " << state.pc << "/" << program.statements.size() << "]> " << std::flush,
           std::getline(std::cin, line)) {
        std::istringstream words(line);
        std::string cmd;
        words >> cmd;
        try {
            if (cmd == "n" || cmd == "next" || cmd.empty()) {
                print_trace_line(executor::step(state, program, registry));
            } else if (cmd == "r" || cmd == "repeat") {
                executor::Overrides overrides;
                std::string kv;
                while (words >> kv) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos) throw Error(ErrorCode::InvalidOverride, "override must be key=value");
                    overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
                }
                print_trace_line(executor::repeat(state, program, registry, overrides));
            } else if (cmd == "b" || cmd == "back") {
                executor::rollback(state, program, registry);
            } else if (cmd == "p" || cmd == "print") {
                for (const auto& [name, value] : state.bindings) {
                    std::cout << "  " << name << ": " << executor::to_string(value.tag()) << " " << value.digest_hex();
                    if (value.tag() == executor::ValueTag::Prompt) std::cout << " \"" << value.prompt().text << "\"";
                    std::cout << "\n";
                }
            } else if (cmd == "q" || cmd == "quit") {
                break;
            } else {
                std::cout << "unknown command '" << cmd << "'\n";
            }
        } catch (const Error& e) {
            std::cout << "error [" << to_string(e.code()) << "]" << (e.line() ? " line " + std::to_string(*e.line()) : "")
                      << ": " << e.what() << "\n";
        }
    }
    if (!out_path.empty() && state.pc > 0) {
        const auto& value = state.bindings.at(program.statements[state.pc - 1].output_var);
        if (value.tag() == executor::ValueTag::Image) geometry::write_png(out_path, value.image());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symedit: instruction-driven image editing with inspectable visual programs"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Seed for the translator and synthetic scenes");
    app.add_option("--config", g.config, "Translate config JSON file");
    app.add_option("--backend", g.backends, "Provider binding role=url or role=stub (repeatable)");

    std::string image_path, out_path, instruction, program_path, trace_path, report_path;

    auto* plan = app.add_subcommand("plan", "Print candidate programs for an instruction");
    plan->add_option("image", image_path, "Input PNG")->required();
    plan->add_option("instruction", instruction, "Edit instruction")->required();
    std::size_t limit = planner::kDefaultOrderingLimit;
    plan->add_option("--limit", limit, "Orderings per template");

    auto* run = app.add_subcommand("run", "Execute a program file");
    run->add_option("program", program_path, "Program (.dvp)")->required();
    run->add_option("image", image_path, "Input PNG")->required();
    run->add_option("-o,--output", out_path, "Output PNG");
    run->add_option("--trace", trace_path, "Write the trace JSON here");
    run->add_option("--report", report_path, "Write the HTML report here");

    auto* stepcmd = app.add_subcommand("step", "Step through a program interactively");
    stepcmd->add_option("program", program_path, "Program (.dvp)")->required();
    stepcmd->add_option("image", image_path, "Input PNG")->required();
    stepcmd->add_option("-o,--output", out_path, "Write the last bound image here on exit");

    auto* ablate = app.add_subcommand("ablate", "Sweep CFG scales against IN guidance on one region");
    std::string select, source, target, ws_text = "2.5,5,7.5,10";
    ablate->add_option("image", image_path, "Input PNG")->required();
    ablate->add_option("--select", select, "Region selector, e.g. \"right fox\"")->required();
    ablate->add_option("--source", source, "Source prompt")->required();
    ablate->add_option("--target", target, "Target prompt")->required();
    ablate->add_option("--w", ws_text, "Comma-separated guidance scales");
    ablate->add_option("-o,--output", out_path, "Report directory")->required();

    auto* serve = app.add_subcommand("serve", "Run the session HTTP API");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port");

    auto* scene = app.add_subcommand("scene", "Render a random synthetic scene");
    int width = 64, height = 64, objects = 3;
    std::vector<std::string> labels;
    scene->add_option("--width", width, "Width");
    scene->add_option("--height", height, "Height");
    scene->add_option("--objects", objects, "Maximum object count");
    scene->add_option("--labels", labels, "Restrict object classes");
    scene->add_option("-o,--output", out_path, "Output PNG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitParse;
    }

    try {
        const backends::Registry registry = g.registry();
        if (*plan) {
            const auto candidates = service::make_plans(geometry::read_png(image_path), instruction, registry, limit);
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                std::cout << "# plan " << i << " (" << planner::to_string(candidates[i].provenance) << ")\n"
                          << dsl::print_program(candidates[i].program) << "\n";
            }
        } else if (*run) {
            const dsl::Program program = load_program(program_path);
            executor::ArtifactStore store;
            const auto result = executor::run(program, geometry::read_png(image_path), registry, g.seed, &store);
            for (const auto& t : result.trace) print_trace_line(t);
            if (!out_path.empty()) {
                if (result.final.tag() != executor::ValueTag::Image) {
                    throw Error(ErrorCode::TypeMismatch, "final value is a " +
                                                             std::string(executor::to_string(result.final.tag())) +
                                                             ", not an image");
                }
                geometry::write_png(out_path, result.final.image());
            }
            if (!trace_path.empty()) write_text(trace_path, executor::trace_to_json(result.trace) + "\n");
            if (!report_path.empty()) write_text(report_path, executor::render_trace_html(result.trace, store));
        } else if (*stepcmd) {
            return interactive(load_program(program_path), geometry::read_png(image_path), g, out_path);
        } else if (*ablate) {
            const auto report = service::ablate(geometry::read_png(image_path), dsl::parse_selector(select), source,
                                                target, parse_ws(ws_text), g.translate(), out_path);
            for (std::size_t i = 0; i < report.outputs.size(); ++i) {
                std::cout << report.outputs[i].name;
                for (double v : report.rms[i]) std::cout << " " << v;
                std::cout << "\n";
            }
        } else if (*serve) {
            service::ServiceConfig cfg;
            cfg.providers = registry;
            cfg.seed = g.seed;
            service::Service svc(cfg);
            httplib::Server server;
            service::mount_routes(server, svc);
            std::cerr << "listening on http://" << host << ":" << port << "\n";
            if (!server.listen(host, port)) throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
        } else if (*scene) {
            const auto spec = geometry::random_scene(g.seed, width, height, objects, labels);
            geometry::write_png(out_path, geometry::render_scene(spec));
            for (const auto& o : spec.objects) {
                std::cout << o.label << " " << (o.shape == geometry::Shape::Disc ? "disc" : "square") << " at (" << o.cx
                          << "," << o.cy << ") r=" << o.radius << "\n";
            }
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]";
        if (e.line()) std::cerr << " line " << *e.line();
        if (e.cause()) std::cerr << " (cause " << to_string(*e.cause()) << ")";
        std::cerr << ": " << e.what() << "\n";
        if (!e.detail().empty()) std::cerr << e.detail() << "\n";
        return exit_code(e);
    }
    return 0;
}
