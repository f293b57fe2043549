// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "symedit/dsl/program.hpp"

namespace symedit::dsl {

namespace {

constexpr std::array<std::pair<OpName, std::string_view>, 10> kOpNames = {{
    {OpName::PG, "PG"},
    {OpName::Segment, "Segment"},
    {OpName::Inpaint, "Inpaint"},
    {OpName::Translate, "Translate"},
    {OpName::Move, "Move"},
    {OpName::Scale, "Scale"},
    {OpName::Swap, "Swap"},
    {OpName::Paste, "Paste"},
    {OpName::Load, "Load"},
    {OpName::Save, "Save"},
}};

constexpr std::array<OpSignature, 10> kSignatures = {{
    {OpName::PG, 1, 1},
    {OpName::Segment, 2, 2, 1},
    {OpName::Inpaint, 2, 2},
    {OpName::Translate, 3, 3},
    {OpName::Move, 2, 3, -1, 1},
    {OpName::Scale, 2, 2},
    {OpName::Swap, 3, 3},
    {OpName::Paste, 2, 4},
    {OpName::Load, 1, 1},
    {OpName::Save, 2, 2},
}};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct LineError {
    ErrorCode code;
    int column;
    std::string message;
};

// Recursive-descent reader over a single source line.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size() || text_[pos_] == '#';
    }
    int column() const { return static_cast<int>(pos_) + 1; }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    [[noreturn]] void fail(std::string message, ErrorCode code = ErrorCode::SyntaxError) const {
        throw LineError{code, column(), std::move(message)};
    }

    void expect(char c) {
        skip_space();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string identifier() {
        skip_space();
        if (!is_ident_start(peek())) fail("expected identifier");
        size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Arg argument() {
        skip_space();
        char c = peek();
        if (c == '"') return String{quoted()};
        if (is_ident_start(c)) return Ref{identifier()};
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') return Number{number()};
        fail("expected argument");
    }

private:
    std::string quoted() {
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_++];
            if (c == '"') return out;
            if (c == '\\') {
                if (pos_ >= text_.size()) break;
                char e = text_[pos_++];
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    default: --pos_; fail(std::string("unknown escape '\\") + e + "'");
                }
            } else {
                out.push_back(c);
            }
        }
        fail("unterminated string");
    }

    double number() {
        size_t start = pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            bool exp_sign = (c == '+' || c == '-') && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E');
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' || exp_sign) {
                ++pos_;
            } else {
                break;
            }
        }
        std::string_view token = text_.substr(start, pos_ - start);
        if (!token.empty() && token.front() == '+') token.remove_prefix(1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
            pos_ = start;
            fail("malformed number");
        }
        return value;
    }

    std::string_view text_;
    size_t pos_ = 0;
};

Statement parse_statement(std::string_view text, int line_no) {
    LineReader reader(text);
    Statement stmt;
    stmt.line = line_no;
    stmt.output_var = reader.identifier();
    reader.expect('=');
    reader.skip_space();
    int op_column = reader.column();
    std::string op_name = reader.identifier();
    auto op = op_from_string(op_name);
    if (!op) throw LineError{ErrorCode::UnknownOperation, op_column, "unknown operation '" + op_name + "'"};
    stmt.op = *op;
    reader.expect('(');
    reader.skip_space();
    std::vector<int> arg_columns;
    if (reader.peek() != ')') {
        while (true) {
            reader.skip_space();
            arg_columns.push_back(reader.column());
            stmt.args.push_back(reader.argument());
            reader.skip_space();
            if (reader.peek() == ',') {
                reader.expect(',');
                continue;
            }
            break;
        }
    }
    reader.expect(')');
    if (!reader.at_end()) reader.fail("unexpected trailing input");

    const OpSignature& sig = signature(stmt.op);
    size_t n = stmt.args.size();
    if (n < sig.min_args || n > sig.max_args || (stmt.op == OpName::Paste && n == 3)) {
        std::string expected = sig.min_args == sig.max_args ? std::to_string(sig.min_args)
                               : stmt.op == OpName::Paste
                                   ? std::string("2 or 4")
                                   : std::to_string(sig.min_args) + "-" + std::to_string(sig.max_args);
        throw LineError{ErrorCode::SyntaxError, op_column,
                        op_name + " expects " + expected + " arguments, got " + std::to_string(n)};
    }
    if (sig.selector_arg >= 0) {
        auto idx = static_cast<size_t>(sig.selector_arg);
        auto* s = std::get_if<String>(&stmt.args[idx]);
        if (!s) throw LineError{ErrorCode::SyntaxError, arg_columns[idx], "selector must be a string literal"};
        try {
            stmt.args[idx] = parse_selector(s->value);
        } catch (const Error& e) {
            throw LineError{e.code(), arg_columns[idx], e.what()};
        }
    }
    if (sig.direction_arg >= 0) {
        auto idx = static_cast<size_t>(sig.direction_arg);
        auto* s = std::get_if<String>(&stmt.args[idx]);
        if (!s) throw LineError{ErrorCode::SyntaxError, arg_columns[idx], "direction must be a string literal"};
        std::string dir = s->value;
        std::transform(dir.begin(), dir.end(), dir.begin(), [](unsigned char c) { return std::tolower(c); });
        if (dir != "left" && dir != "right" && dir != "up" && dir != "down") {
            throw LineError{ErrorCode::SyntaxError, arg_columns[idx],
                            "direction must be one of left/right/up/down, got '" + s->value + "'"};
        }
        s->value = dir;
    }
    return stmt;
}

std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string_view to_string(OpName op) noexcept {
    for (const auto& [o, name] : kOpNames) {
        if (o == op) return name;
    }
    return "?";
}

std::optional<OpName> op_from_string(std::string_view name) noexcept {
    for (const auto& [o, n] : kOpNames) {
        if (n == name) return o;
    }
    return std::nullopt;
}

const OpSignature& signature(OpName op) noexcept {
    return kSignatures[static_cast<size_t>(op)];
}

bool ParseResult::ok() const noexcept {
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

bool is_identifier(std::string_view text) noexcept {
    return !text.empty() && is_ident_start(text.front()) && std::all_of(text.begin(), text.end(), is_ident_char);
}

ParseResult parse_program(std::string_view source) {
    ParseResult result;
    result.program.source_text = std::string(source);
    std::set<std::string, std::less<>> defined = {std::string(kInputVariable)};

    int line_no = 0;
    size_t start = 0;
    while (start <= source.size()) {
        size_t end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        std::string_view line = source.substr(start, end - start);
        ++line_no;
        start = end + 1;

        LineReader probe(line);
        if (probe.at_end()) {
            if (end == source.size()) break;
            continue;
        }
        try {
            Statement stmt = parse_statement(line, line_no);
            if (!defined.insert(stmt.output_var).second) {
                result.diagnostics.push_back({ErrorCode::DuplicateAssignment, Severity::Error, line_no, 1,
                                              "variable '" + stmt.output_var + "' is already assigned"});
            } else {
                result.program.statements.push_back(std::move(stmt));
            }
        } catch (const LineError& e) {
            result.diagnostics.push_back({e.code, Severity::Error, line_no, e.column, e.message});
        }
        if (end == source.size()) break;
    }
    return result;
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string print_arg(const Arg& arg) {
    struct Printer {
        std::string operator()(const Number& n) const { return format_number(n.value); }
        std::string operator()(const String& s) const { return quote(s.value); }
        std::string operator()(const Ref& r) const { return r.name; }
        std::string operator()(const Selector& s) const { return quote(print_selector(s)); }
    };
    return std::visit(Printer{}, arg);
}

std::string print_program(const Program& program) {
    std::string out;
    for (const auto& stmt : program.statements) {
        out += stmt.output_var;
        out += " = ";
        out += to_string(stmt.op);
        out += '(';
        for (size_t i = 0; i < stmt.args.size(); ++i) {
            if (i) out += ", ";
            out += print_arg(stmt.args[i]);
        }
        out += ")\n";
    }
    return out;
}

}  // namespace symedit::dsl
