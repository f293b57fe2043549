// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "symedit/backends/registry.hpp"

namespace symedit::backends {

/// Base64 PNG payloads keyed by the names args and results refer to.
using ImageMap = std::map<std::string, std::string>;

struct RemoteRequest {
    std::string role;
    std::string op;
    nlohmann::json args = nlohmann::json::array();
    ImageMap images;

    bool operator==(const RemoteRequest&) const = default;
};

struct RemoteResponse {
    bool ok = true;
    nlohmann::json result;  // null when !ok
    ImageMap images;
    std::optional<std::string> error;  // present exactly when !ok

    bool operator==(const RemoteResponse&) const = default;
};

/// Canonical JSON (sorted keys, no whitespace).
std::string encode_request(const RemoteRequest& request);
std::string encode_response(const RemoteResponse& response);

/// Throw Error(ProtocolError) on schema violations, including image
/// references missing from the image map and undecodable base64.
RemoteRequest decode_request(std::string_view body);
RemoteResponse decode_response(std::string_view body);

/// Tagged value encoding shared by args and results:
///   {"kind":"image","image":key}
///   {"kind":"region","label","bbox":[x0,y0,x1,y1],"width","height","image":key}
///   {"kind":"region_list","regions":[region...]}
///   {"kind":"prompt","text"}
///   {"kind":"number","value"}
/// A region's image is its patch; alpha marks the mask.
nlohmann::json encode_value(const executor::Value& value, ImageMap& images);
executor::Value decode_value(const nlohmann::json& j, const ImageMap& images);  // Error(ProtocolError)

RemoteRequest make_request(Role role, std::string_view op, const std::vector<executor::Value>& args);

/// Runs the in-process provider for a request; failures become ok=false.
RemoteResponse handle_stub_request(const RemoteRequest& request, const inversion::TranslateConfig& translate,
                                   const InvokeContext& ctx = {});

using RequestHandler = std::function<RemoteResponse(const RemoteRequest&)>;

struct RawReply {
    int status = 200;
    std::string body;
};
using RawHandler = std::function<RawReply(const std::string& body)>;

/// Wraps a typed handler: decode errors become HTTP 400 with ok=false.
RawHandler provider_handler(RequestHandler handler);

/// HTTP server on 127.0.0.1 with a POST <base>/invoke route, for loopback
/// providers and planner endpoints. Stops on destruction.
class LoopbackServer {
public:
    explicit LoopbackServer(RawHandler handler, std::string base_path = "");
    ~LoopbackServer();
    LoopbackServer(const LoopbackServer&) = delete;
    LoopbackServer& operator=(const LoopbackServer&) = delete;

    int port() const noexcept;
    std::string url() const;
    /// Requests served so far.
    std::size_t requests() const noexcept;
    /// Raw body of the last request.
    std::string last_body() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace symedit::backends
