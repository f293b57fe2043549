// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "symedit/common/base64.hpp"
#include "symedit/common/endpoint.hpp"
#include "symedit/common/error.hpp"
#include "symedit/common/hash.hpp"

using namespace symedit;

namespace {

std::vector<std::uint8_t> bytes(std::string_view s) { return {s.begin(), s.end()}; }

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

TEST_CASE("base64 reference vectors") {
    const std::pair<const char*, const char*> cases[] = {
        {"", ""},         {"f", "Zg=="},         {"fo", "Zm8="},         {"foo", "Zm9v"},
        {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="}, {"foobar", "Zm9vYmFy"},
    };
    for (auto [plain, encoded] : cases) {
        CAPTURE(plain);
        CHECK(base64_encode(bytes(plain)) == encoded);
        CHECK(base64_decode(encoded) == bytes(plain));
    }
}

TEST_CASE("base64 round-trips random bytes") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::uint8_t> b(rng() % 70);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng());
        CHECK(base64_decode(base64_encode(b)) == b);
    }
}

TEST_CASE("base64 rejects malformed text") {
    for (const char* bad : {"Zg=", "Z", "Zm9v!", "Zm=v"}) {
        CAPTURE(bad);
        CHECK(code_of([&] { base64_decode(bad); }) == ErrorCode::ProtocolError);
    }
}

TEST_CASE("endpoint parsing") {
    HttpEndpoint a = parse_endpoint("http://127.0.0.1:9000/models/sam/");
    CHECK(a.host == "127.0.0.1");
    CHECK(a.port == 9000);
    CHECK(a.base_path == "/models/sam");
    CHECK(a.path("invoke") == "/models/sam/invoke");
    HttpEndpoint b = parse_endpoint("http://example.org");
    CHECK(b.port == 80);
    CHECK(b.base_path.empty());
    CHECK(b.path("invoke") == "/invoke");
    CHECK(parse_endpoint(a.url()).base_path == a.base_path);
    for (const char* bad : {"", "ftp://x", "https://x", "http://", "http://host:0", "http://host:70000", "http://host:ab"}) {
        CAPTURE(bad);
        CHECK(code_of([&] { parse_endpoint(bad); }) == ErrorCode::InvalidEndpoint);
    }
}

TEST_CASE("FNV-1a reference digests") {
    CHECK(fnv1a64(std::string_view("")) == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64(std::string_view("a")) == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64(std::string_view("foobar")) == 0x85944171f73967e8ULL);
    CHECK(to_hex(0xaf63dc4c8601ec8cULL) == "af63dc4c8601ec8c");
    CHECK(to_hex(1) == "0000000000000001");
    CHECK(Fnv1a{}.update("foo").update("bar").digest() == fnv1a64(std::string_view("foobar")));
}

TEST_CASE("error codes round-trip by name") {
    for (int c = 0; c <= static_cast<int>(ErrorCode::Internal); ++c) {
        auto code = static_cast<ErrorCode>(c);
        CHECK(error_code_from_string(to_string(code)) == code);
    }
    CHECK(to_string(ErrorCode::NoTemplateMatch) == "NoTemplateMatch");
    CHECK_FALSE(error_code_from_string("Nope"));
    Error e = Error(ErrorCode::ProviderError, "x").with_cause(ErrorCode::RemoteError).with_role("segmenter").with_line(3);
    CHECK(e.cause() == ErrorCode::RemoteError);
    CHECK(e.role() == "segmenter");
    CHECK(e.line() == 3);
}
