// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "symedit/common/base64.hpp"
#include "symedit/service/service.hpp"

namespace symedit::service {

using nlohmann::json;

namespace {

void cors(httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
}

void send_json(httplib::Response& res, int status, const json& body) {
    cors(res);
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) { send_json(res, http_status(e), error_body(e)); }

json parse_body(const httplib::Request& req, bool allow_empty) {
    if (req.body.empty() && allow_empty) return json::object();
    json j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
    return j;
}

template <class F>
httplib::Server::Handler guarded(F f) {
    return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            send_error(res, Error(ErrorCode::Internal, e.what()));
        }
    };
}

std::size_t parse_index(const std::string& text) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw Error(ErrorCode::IndexOutOfRange, "plan index '" + text + "' is not a number");
    }
}

}  // namespace

void mount_routes(httplib::Server& server, Service& service) {
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        cors(res);
        res.status = 204;
    });

    server.Post("/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    const json body = parse_body(req, false);
                    if (!body.contains("image") || !body["image"].is_string() || !body.contains("instruction") ||
                        !body["instruction"].is_string()) {
                        throw Error(ErrorCode::BadRequest, "expected {\"image\": base64 PNG, \"instruction\": text}");
                    }
                    std::vector<std::uint8_t> png;
                    try {
                        png = base64_decode(body["image"].get<std::string>());
                    } catch (const Error& e) {
                        throw Error(ErrorCode::BadImage, std::string("image is not valid base64: ") + e.what());
                    }
                    send_json(res, 201, service.create_session(png, body["instruction"].get<std::string>()));
                }));

    server.Get(R"(/sessions/([^/]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, service.get_session(req.matches[1]));
               }));

    server.Post(R"(/sessions/([^/]+)/plan/([^/]+))",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, 200, service.select_plan(req.matches[1], parse_index(req.matches[2])));
                }));

    server.Post(R"(/sessions/([^/]+)/step)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, 200, service.step(req.matches[1]));
                }));

    server.Post(R"(/sessions/([^/]+)/repeat)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    const json body = parse_body(req, true);
                    executor::Overrides overrides;
                    if (body.contains("overrides")) {
                        const json& o = body["overrides"];
                        if (!o.is_object()) throw Error(ErrorCode::BadRequest, "\"overrides\" must be an object");
                        for (const auto& [k, v] : o.items()) {
                            if (v.is_string()) {
                                overrides[k] = v.get<std::string>();
                            } else if (v.is_number()) {
                                overrides[k] = v.dump();
                            } else {
                                throw Error(ErrorCode::InvalidOverride, "override '" + k + "' must be a string or number");
                            }
                        }
                    }
                    send_json(res, 200, service.repeat(req.matches[1], overrides));
                }));

    server.Get(R"(/sessions/([^/]+)/trace)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, service.trace(req.matches[1]));
               }));

    server.Get(R"(/artifacts/([^/]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   const auto png = service.artifact(req.matches[1]);
                   cors(res);
                   res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
               }));

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const int status = res.status;
        send_json(res, status, error_body(Error(status == 404 ? ErrorCode::NotFound : ErrorCode::BadRequest,
                                                "no route for " + req.method + " " + req.path)));
    });
}

}  // namespace symedit::service
