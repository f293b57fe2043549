// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/backends/wire.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "symedit/common/base64.hpp"
#include "symedit/common/endpoint.hpp"
#include "symedit/common/error.hpp"
#include "symedit/geometry/png.hpp"

namespace symedit::backends {

using executor::Value;
using executor::ValueTag;
using nlohmann::json;

namespace {

std::atomic<std::uint64_t> g_exchanges{0};

[[noreturn]] void protocol(const std::string& why) { throw Error(ErrorCode::ProtocolError, why); }

json images_to_json(const ImageMap& images) {
    json out = json::object();
    for (const auto& [k, v] : images) out[k] = v;
    return out;
}

ImageMap images_from_json(const json& j) {
    if (!j.is_object()) protocol("\"images\" must be an object");
    ImageMap out;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_string()) protocol("image '" + k + "' must be a base64 string");
        base64_decode(v.get<std::string>());
        out.emplace(k, v.get<std::string>());
    }
    return out;
}

// Every {"image": key} reference must name an entry of the image map.
void check_image_refs(const json& j, const ImageMap& images) {
    if (j.is_object()) {
        auto it = j.find("image");
        if (it != j.end()) {
            if (!it->is_string()) protocol("image reference must be a string");
            if (!images.contains(it->get<std::string>())) {
                protocol("image reference '" + it->get<std::string>() + "' has no payload");
            }
        }
        for (const auto& [k, v] : j.items()) check_image_refs(v, images);
    } else if (j.is_array()) {
        for (const auto& v : j) check_image_refs(v, images);
    }
}

json parse_object(std::string_view body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) protocol("message is not valid JSON");
    if (!j.is_object()) protocol("message must be a JSON object");
    return j;
}

std::string add_image(const geometry::ImageBuffer& image, ImageMap& images) {
    std::string key = "img" + std::to_string(images.size());
    while (images.contains(key)) key += "_";
    images.emplace(key, base64_encode(geometry::encode_png(image)));
    return key;
}

geometry::ImageBuffer fetch_image(const json& j, const ImageMap& images) {
    if (!j.is_string()) protocol("image reference must be a string");
    auto it = images.find(j.get<std::string>());
    if (it == images.end()) protocol("image reference '" + j.get<std::string>() + "' has no payload");
    try {
        return geometry::decode_png(base64_decode(it->second));
    } catch (const Error& e) {
        protocol("image '" + it->first + "' is not a valid PNG: " + e.what());
    }
}

json encode_region(const geometry::Roi& roi, ImageMap& images) {
    return {{"kind", "region"},
            {"label", roi.label},
            {"bbox", {roi.bbox.x0, roi.bbox.y0, roi.bbox.x1, roi.bbox.y1}},
            {"width", roi.bounds().width},
            {"height", roi.bounds().height},
            {"image", add_image(roi.patch, images)}};
}

geometry::Roi decode_region(const json& j, const ImageMap& images) {
    try {
        const auto& bbox = j.at("bbox");
        if (!bbox.is_array() || bbox.size() != 4) protocol("region bbox must be [x0, y0, x1, y1]");
        const geometry::Size bounds{j.at("width").get<int>(), j.at("height").get<int>()};
        if (bounds.width < 1 || bounds.height < 1) protocol("region canvas must be at least 1x1");
        const geometry::ImageBuffer patch = fetch_image(j.at("image"), images);
        const int x0 = bbox[0].get<int>(), y0 = bbox[1].get<int>();
        if (bbox[2].get<int>() - x0 + 1 != patch.width() || bbox[3].get<int>() - y0 + 1 != patch.height()) {
            protocol("region bbox does not match its patch size");
        }
        auto roi = geometry::Roi::from_patch(patch, x0, y0, bounds, j.at("label").get<std::string>());
        if (!roi) protocol("region has no pixels inside its canvas");
        return *std::move(roi);
    } catch (const json::exception& e) {
        protocol(std::string("malformed region: ") + e.what());
    }
}

}  // namespace

std::uint64_t remote_exchange_count() noexcept { return g_exchanges.load(); }

json encode_value(const Value& value, ImageMap& images) {
    switch (value.tag()) {
        case ValueTag::Image: return {{"kind", "image"}, {"image", add_image(value.image(), images)}};
        case ValueTag::Region: return encode_region(value.region(), images);
        case ValueTag::RegionList: {
            json regions = json::array();
            for (const auto& r : value.regions()) regions.push_back(encode_region(r, images));
            return {{"kind", "region_list"}, {"regions", std::move(regions)}};
        }
        case ValueTag::Prompt: return {{"kind", "prompt"}, {"text", value.prompt().text}};
        case ValueTag::Number: return {{"kind", "number"}, {"value", value.number()}};
    }
    protocol("unknown value kind");
}

Value decode_value(const json& j, const ImageMap& images) {
    try {
        if (!j.is_object()) protocol("value must be an object");
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "image") return fetch_image(j.at("image"), images);
        if (kind == "region") return decode_region(j, images);
        if (kind == "region_list") {
            executor::RegionList out;
            for (const auto& r : j.at("regions")) out.push_back(decode_region(r, images));
            return out;
        }
        if (kind == "prompt") return executor::Prompt{j.at("text").get<std::string>()};
        if (kind == "number") {
            const double v = j.at("value").get<double>();
            if (!std::isfinite(v)) protocol("number must be finite");
            return v;
        }
        protocol("unknown value kind '" + kind + "'");
    } catch (const json::exception& e) {
        protocol(std::string("malformed value: ") + e.what());
    }
}

std::string encode_request(const RemoteRequest& request) {
    json j = {{"role", request.role}, {"op", request.op}, {"args", request.args}, {"images", images_to_json(request.images)}};
    return j.dump();
}

std::string encode_response(const RemoteResponse& response) {
    json j = {{"ok", response.ok}, {"result", response.result}, {"images", images_to_json(response.images)}};
    if (response.error) j["error"] = *response.error;
    return j.dump();
}

RemoteRequest decode_request(std::string_view body) {
    const json j = parse_object(body);
    RemoteRequest r;
    try {
        r.role = j.at("role").get<std::string>();
        r.op = j.at("op").get<std::string>();
        r.args = j.at("args");
    } catch (const json::exception& e) {
        protocol(std::string("malformed request: ") + e.what());
    }
    if (!role_from_string(r.role)) protocol("unknown role '" + r.role + "'");
    if (!r.args.is_array()) protocol("\"args\" must be an array");
    if (j.contains("images")) r.images = images_from_json(j.at("images"));
    check_image_refs(r.args, r.images);
    return r;
}

RemoteResponse decode_response(std::string_view body) {
    const json j = parse_object(body);
    RemoteResponse r;
    if (!j.contains("ok") || !j.at("ok").is_boolean()) protocol("response needs a boolean \"ok\"");
    r.ok = j.at("ok").get<bool>();
    const bool has_error = j.contains("error") && !j.at("error").is_null();
    if (r.ok == has_error) protocol("response must carry either ok=true or an error");
    if (has_error) {
        if (!j.at("error").is_string()) protocol("\"error\" must be a string");
        r.error = j.at("error").get<std::string>();
    }
    if (r.ok && !j.contains("result")) protocol("successful response has no result");
    if (j.contains("result")) r.result = j.at("result");
    if (j.contains("images")) r.images = images_from_json(j.at("images"));
    check_image_refs(r.result, r.images);
    return r;
}

RemoteRequest make_request(Role role, std::string_view op, const std::vector<Value>& args) {
    RemoteRequest r;
    r.role = std::string(to_string(role));
    r.op = std::string(op);
    for (const auto& v : args) r.args.push_back(encode_value(v, r.images));
    return r;
}

RemoteResponse handle_stub_request(const RemoteRequest& request, const inversion::TranslateConfig& translate,
                                   const InvokeContext& ctx) {
    RemoteResponse response;
    try {
        auto role = role_from_string(request.role);
        if (!role) protocol("unknown role '" + request.role + "'");
        std::vector<Value> args;
        for (const auto& a : request.args) args.push_back(decode_value(a, request.images));
        response.result = encode_value(invoke_stub(*role, request.op, args, translate, ctx), response.images);
    } catch (const Error& e) {
        response = RemoteResponse{};
        response.ok = false;
        response.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    return response;
}

Value invoke(const Registry& registry, Role role, std::string_view op, const std::vector<Value>& args,
             const InvokeContext& ctx) {
    const ProviderBinding& binding = registry.binding(role);
    if (binding.kind == ProviderBinding::Kind::Stub) return invoke_stub(role, op, args, registry.translate_config(), ctx);

    const HttpEndpoint ep = parse_endpoint(binding.endpoint);
    const std::string body = encode_request(make_request(role, op, args));
    httplib::Client client(ep.host, ep.port);
    const auto timeout = std::chrono::milliseconds(binding.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    ++g_exchanges;
    auto res = client.Post(ep.path("invoke"), body, "application/json");
    if (!res) {
        throw Error(ErrorCode::TransportError,
                    std::string(to_string(role)) + " at " + ep.url() + ": " + httplib::to_string(res.error()));
    }
    RemoteResponse response;
    try {
        response = decode_response(res->body);
    } catch (const Error&) {
        if (res->status != 200) {
            throw Error(ErrorCode::ProtocolError, "provider returned HTTP " + std::to_string(res->status)).with_detail(res->body);
        }
        throw;
    }
    if (!response.ok) throw Error(ErrorCode::RemoteError, *response.error);
    if (res->status != 200) throw Error(ErrorCode::ProtocolError, "provider returned HTTP " + std::to_string(res->status));
    Value v = decode_value(response.result, response.images);
    if (auto want = expected_result(role, op); want && v.tag() != *want) {
        throw Error(ErrorCode::ProtocolError, std::string(to_string(role)) + " returned " +
                                                  std::string(executor::to_string(v.tag())) + ", expected " +
                                                  std::string(executor::to_string(*want)));
    }
    return v;
}

RawHandler provider_handler(RequestHandler handler) {
    return [handler = std::move(handler)](const std::string& body) -> RawReply {
        RemoteRequest request;
        try {
            request = decode_request(body);
        } catch (const Error& e) {
            RemoteResponse bad;
            bad.ok = false;
            bad.error = std::string("ProtocolError: ") + e.what();
            return {400, encode_response(bad)};
        }
        return {200, encode_response(handler(request))};
    };
}

struct LoopbackServer::Impl {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::string base;
    std::atomic<std::size_t> requests{0};
    mutable std::mutex mutex;
    std::string last_body;
};

LoopbackServer::LoopbackServer(RawHandler handler, std::string base_path) : impl_(std::make_unique<Impl>()) {
    impl_->base = std::move(base_path);
    Impl* impl = impl_.get();
    impl->server.Post(impl->base + "/invoke", [impl, handler = std::move(handler)](const httplib::Request& req,
                                                                                  httplib::Response& res) {
        {
            std::lock_guard lock(impl->mutex);
            impl->last_body = req.body;
        }
        ++impl->requests;
        RawReply reply = handler(req.body);
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    });
    impl->port = impl->server.bind_to_any_port("127.0.0.1");
    if (impl->port <= 0) throw Error(ErrorCode::IoError, "cannot bind a loopback port");
    impl->thread = std::thread([impl] { impl->server.listen_after_bind(); });
    impl->server.wait_until_ready();
}

LoopbackServer::~LoopbackServer() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

int LoopbackServer::port() const noexcept { return impl_->port; }

std::string LoopbackServer::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port) + impl_->base; }

std::size_t LoopbackServer::requests() const noexcept { return impl_->requests.load(); }

std::string LoopbackServer::last_body() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->last_body;
}

}  // namespace symedit::backends
