// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "symedit/common/error.hpp"
#include "symedit/dsl/selector.hpp"

namespace symedit::dsl {

/// Reserved variable bound to the input image before execution starts.
inline constexpr std::string_view kInputVariable = "IMAGE";

enum class OpName { PG, Segment, Inpaint, Translate, Move, Scale, Swap, Paste, Load, Save };

std::string_view to_string(OpName op) noexcept;
std::optional<OpName> op_from_string(std::string_view name) noexcept;

struct Number {
    double value = 0.0;
    bool operator==(const Number&) const = default;
};

struct String {
    std::string value;
    bool operator==(const String&) const = default;
};

struct Ref {
    std::string name;
    bool operator==(const Ref&) const = default;
};

using Arg = std::variant<Number, String, Ref, Selector>;

struct Statement {
    std::string output_var;
    OpName op = OpName::PG;
    std::vector<Arg> args;
    int line = 0;  // 1-based source line; not part of equality

    bool operator==(const Statement& other) const {
        return output_var == other.output_var && op == other.op && args == other.args;
    }
};

struct Program {
    std::vector<Statement> statements;
    std::string source_text;

    // Structural equality; source text is provenance only.
    bool operator==(const Program& other) const { return statements == other.statements; }
};

/// Arity and literal-position rules the parser enforces per operation.
struct OpSignature {
    OpName op;
    std::size_t min_args;
    std::size_t max_args;
    int selector_arg = -1;   // string literal here is parsed as a Selector
    int direction_arg = -1;  // string literal here must be left/right/up/down
};

const OpSignature& signature(OpName op) noexcept;

enum class Severity { Error, Warning };

struct Diagnostic {
    ErrorCode code;
    Severity severity = Severity::Error;
    int line = 0;    // 1-based
    int column = 0;  // 1-based
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

struct ParseResult {
    Program program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const noexcept;
};

bool is_identifier(std::string_view text) noexcept;

/// Line-oriented grammar:
///
///     # comment
///     VAR = Op(arg, arg, ...)
///
/// Arguments are numbers, double-quoted strings or identifiers. Parsing keeps
/// going after an error so every malformed line gets its own diagnostic.
ParseResult parse_program(std::string_view source);

/// Canonical text, one statement per line, each terminated by '\n'.
std::string print_program(const Program& program);

std::string print_arg(const Arg& arg);
std::string format_number(double value);

}  // namespace symedit::dsl
