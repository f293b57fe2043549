// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace symedit {

/// Parsed absolute http URL.
struct HttpEndpoint {
    std::string host;
    int port = 80;
    std::string base_path;  // no trailing slash; empty for the root

    /// base_path + "/" + leaf.
    std::string path(std::string_view leaf) const;
    std::string url() const;
};

/// Accepts http://host[:port][/path]. Throws Error(InvalidEndpoint).
HttpEndpoint parse_endpoint(std::string_view url);

}  // namespace symedit
