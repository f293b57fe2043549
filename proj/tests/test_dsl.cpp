// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "support/corpus.hpp"
#include "symedit/dsl/program.hpp"
#include "symedit/dsl/selector.hpp"

using namespace symedit;
using namespace symedit::dsl;

namespace {

Selector sel(std::string cls, Positional pos = Positional::All, int index = 0, std::vector<std::string> attrs = {}) {
    return {std::move(cls), pos, index, std::move(attrs)};
}

}  // namespace

TEST_CASE("segment statement parses into a ref and a selector") {
    auto r = parse_program("OBJ0 = Segment(IMAGE, \"left dog\")");
    REQUIRE(r.ok());
    REQUIRE(r.program.statements.size() == 1);
    const Statement& s = r.program.statements[0];
    CHECK(s.output_var == "OBJ0");
    CHECK(s.op == OpName::Segment);
    REQUIRE(s.args.size() == 2);
    CHECK(s.args[0] == Arg{Ref{"IMAGE"}});
    CHECK(s.args[1] == Arg{sel("dog", Positional::Left)});
    CHECK(s.line == 1);
}

TEST_CASE("unknown operation is reported at its line and column") {
    auto r = parse_program("X = Foo(IMAGE)");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].code == ErrorCode::UnknownOperation);
    CHECK(r.diagnostics[0].line == 1);
    CHECK(r.diagnostics[0].column == 5);
    CHECK_FALSE(r.ok());
}

TEST_CASE("five-line edit plan parses to the hand-built AST") {
    const char* text =
        "P0 = PG(IMAGE)\n"
        "OBJ0 = Segment(IMAGE, \"left dog\")\n"
        "IMG0 = Inpaint(IMAGE, OBJ0)\n"
        "OBJ1 = Translate(OBJ0, P0, \"sheep\")\n"
        "IMG1 = Paste(IMG0, OBJ1)\n";
    Program expected;
    expected.statements = {
        {"P0", OpName::PG, {Ref{"IMAGE"}}},
        {"OBJ0", OpName::Segment, {Ref{"IMAGE"}, sel("dog", Positional::Left)}},
        {"IMG0", OpName::Inpaint, {Ref{"IMAGE"}, Ref{"OBJ0"}}},
        {"OBJ1", OpName::Translate, {Ref{"OBJ0"}, Ref{"P0"}, String{"sheep"}}},
        {"IMG1", OpName::Paste, {Ref{"IMG0"}, Ref{"OBJ1"}}},
    };
    auto r = parse_program(text);
    REQUIRE(r.ok());
    CHECK(r.program == expected);
    for (int i = 0; i < 5; ++i) CHECK(r.program.statements[static_cast<std::size_t>(i)].line == i + 1);
    CHECK(print_program(r.program) == text);
}

TEST_CASE("duplicate assignment is an error") {
    auto r = parse_program("A = PG(IMAGE)\nA = PG(IMAGE)\n");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].code == ErrorCode::DuplicateAssignment);
    CHECK(r.diagnostics[0].line == 2);
    CHECK(r.program.statements.size() == 1);
}

TEST_CASE("assigning the input variable is a duplicate") {
    auto r = parse_program("IMAGE = PG(IMAGE)");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].code == ErrorCode::DuplicateAssignment);
}

TEST_CASE("syntax errors carry line and column") {
    struct Case {
        const char* text;
        int column;
    };
    const Case cases[] = {
        {"A = PG(IMAGE", 13},
        {"A PG(IMAGE)", 3},
        {"A = PG(IMAGE) junk", 15},
        {"A = PG(\"open)", 14},
        {"A = Scale(B, 1.2.3)", 14},
        {"A = Segment(IMAGE, B)", 20},
        {"A = Move(B, \"sideways\")", 13},
        {"A = Paste(B, C, 1)", 5},
        {"3 = PG(IMAGE)", 1},
    };
    for (const auto& c : cases) {
        CAPTURE(c.text);
        auto r = parse_program(c.text);
        REQUIRE(r.diagnostics.size() == 1);
        CHECK(r.diagnostics[0].code == ErrorCode::SyntaxError);
        CHECK(r.diagnostics[0].line == 1);
        CHECK(r.diagnostics[0].column == c.column);
    }
}

TEST_CASE("a malformed line is cited by number and its neighbours still parse") {
    auto r = parse_program("A = PG(IMAGE)\n\n# note\nB = Inpaint(IMAGE,\nC = PG(IMAGE)  # trailing\n");
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].line == 4);
    REQUIRE(r.program.statements.size() == 2);
    CHECK(r.program.statements[1].output_var == "C");
    CHECK(r.program.statements[1].line == 5);
}

TEST_CASE("empty program prints as empty text") {
    CHECK(print_program(Program{}).empty());
    auto r = parse_program("");
    CHECK(r.ok());
    CHECK(r.program.statements.empty());
}

TEST_CASE("single statement prints one canonical line") {
    auto r = parse_program("  X=Scale( OBJ0 ,2 )   ");
    REQUIRE(r.ok());
    CHECK(print_program(r.program) == "X = Scale(OBJ0, 2)\n");
}

TEST_CASE("strings escape quotes, backslashes, newlines and tabs") {
    Program p;
    p.statements = {{"T", OpName::Translate, {Ref{"O"}, String{"a \"b\" \\ c\nd\te"}, String{""}}}};
    const std::string text = print_program(p);
    CHECK(text == "T = Translate(O, \"a \\\"b\\\" \\\\ c\\nd\\te\", \"\")\n");
    auto r = parse_program(text);
    REQUIRE(r.ok());
    CHECK(r.program == p);
}

TEST_CASE("selectors parse with positional defaulting to all") {
    CHECK(parse_selector("right fox") == sel("fox", Positional::Right));
    CHECK(parse_selector("dog") == sel("dog"));
    CHECK(parse_selector("far right pigeon") == sel("pigeon", Positional::FarRight));
    CHECK(parse_selector("the far-left dog") == sel("dog", Positional::FarLeft));
    CHECK(parse_selector("middle cat") == sel("cat", Positional::Middle));
    CHECK(parse_selector("#2 dog") == sel("dog", Positional::Index, 2));
    CHECK(parse_selector("left big brown Dog") == sel("dog", Positional::Left, 0, {"big", "brown"}));
    CHECK(parse_selector("all dogs") == sel("dogs"));
    CHECK_THROWS_AS(parse_selector(""), Error);
    try {
        parse_selector("  ,, ");
        FAIL("expected EmptySelector");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptySelector);
    }
    try {
        parse_selector("#-1 dog");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
    }
}

TEST_CASE("every non-empty alphanumeric phrase parses to a selector") {
    std::mt19937_64 rng(7);
    const std::string alnum = "abcdefghijklmnopqrstuvwxyz0123456789";
    for (int i = 0; i < 500; ++i) {
        std::string phrase;
        const int words = 1 + static_cast<int>(rng() % 4);
        std::string last;
        for (int w = 0; w < words; ++w) {
            std::string word;
            for (int k = 1 + static_cast<int>(rng() % 6); k > 0; --k) word.push_back(alnum[rng() % alnum.size()]);
            if (w == words - 1) word.push_back('0');  // keeps the head noun out of the keyword table
            if (w) phrase.push_back(' ');
            phrase += word;
            last = word;
        }
        CAPTURE(phrase);
        Selector s = parse_selector(phrase);
        CHECK(s.class_name == last);
    }
}

TEST_CASE("selector print then parse is the identity") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        Selector s = corpus::random_selector(rng);
        CAPTURE(print_selector(s));
        CHECK(parse_selector(print_selector(s)) == s);
    }
}

TEST_CASE("generated programs round-trip through print and parse") {
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 500; ++i) {
        Program p = corpus::random_program(rng);
        const std::string text = print_program(p);
        CAPTURE(text);
        auto r = parse_program(text);
        REQUIRE(r.ok());
        CHECK(r.program == p);
        CHECK(print_program(r.program) == text);
    }
}

TEST_CASE("operation names map both ways") {
    for (int i = 0; i < 10; ++i) {
        auto op = static_cast<OpName>(i);
        CHECK(op_from_string(to_string(op)) == op);
        CHECK(signature(op).op == op);
    }
    CHECK_FALSE(op_from_string("segment").has_value());
    CHECK(is_identifier("_x9"));
    CHECK_FALSE(is_identifier("9x"));
    CHECK_FALSE(is_identifier(""));
}
