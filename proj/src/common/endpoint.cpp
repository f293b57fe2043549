// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/common/endpoint.hpp"

#include <charconv>

#include "symedit/common/error.hpp"

namespace symedit {

std::string HttpEndpoint::path(std::string_view leaf) const { return base_path + "/" + std::string(leaf); }

std::string HttpEndpoint::url() const { return "http://" + host + ":" + std::to_string(port) + base_path; }

HttpEndpoint parse_endpoint(std::string_view url) {
    constexpr std::string_view kScheme = "http://";
    auto fail = [&](const char* why) {
        return Error(ErrorCode::InvalidEndpoint, "invalid endpoint '" + std::string(url) + "': " + why);
    };
    if (url.substr(0, kScheme.size()) != kScheme) throw fail("expected an absolute http:// URL");
    std::string_view rest = url.substr(kScheme.size());
    const std::size_t slash = rest.find('/');
    std::string_view authority = rest.substr(0, slash);
    std::string_view path = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
    if (authority.empty()) throw fail("missing host");

    HttpEndpoint ep;
    const std::size_t colon = authority.rfind(':');
    if (colon != std::string_view::npos) {
        std::string_view port = authority.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), ep.port);
        if (port.empty() || ec != std::errc{} || ptr != port.data() + port.size() || ep.port < 1 || ep.port > 65535) {
            throw fail("bad port");
        }
        authority = authority.substr(0, colon);
        if (authority.empty()) throw fail("missing host");
    }
    ep.host = std::string(authority);
    while (!path.empty() && path.back() == '/') path.remove_suffix(1);
    if (path.find_first_of("?#") != std::string_view::npos) throw fail("query and fragment are not allowed");
    ep.base_path = std::string(path);
    return ep;
}

}  // namespace symedit
