// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "symedit/common/error.hpp"
#include "symedit/inversion/null_text.hpp"

namespace symedit::inversion {

using nlohmann::json;

TranslateConfig parse_translate_config(std::string_view json_text) {
    TranslateConfig cfg;
    try {
        const json j = json::parse(json_text);
        if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "translate config must be a JSON object");
        if (j.contains("T")) cfg.T = j.at("T").get<int>();
        if (j.contains("N")) cfg.null_text.inner_steps = j.at("N").get<int>();
        if (j.contains("eta")) cfg.null_text.eta = j.at("eta").get<double>();
        if (j.contains("beta")) {
            const auto& b = j.at("beta");
            if (!b.is_array() || b.size() != 2) throw Error(ErrorCode::InvalidArgument, "\"beta\" must be [start, end]");
            cfg.beta_start = b[0].get<double>();
            cfg.beta_end = b[1].get<double>();
        }
        if (j.contains("mode")) {
            const auto& m = j.at("mode");
            if (m.is_string() && m.get<std::string>() == "IN") {
                cfg.null_text.mode = GuidanceMode::instance_norm();
            } else if (m.is_object() && m.size() == 1 && m.contains("CFG")) {
                cfg.null_text.mode = GuidanceMode::classifier_free(m.at("CFG").get<double>());
            } else {
                throw Error(ErrorCode::InvalidArgument, "\"mode\" must be \"IN\" or {\"CFG\": w}");
            }
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad translate config: ") + e.what());
    }
    if (cfg.T < 1 || cfg.null_text.inner_steps < 1 || !(cfg.null_text.eta >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "translate config needs T >= 1, N >= 1, eta >= 0");
    }
    make_schedule(cfg.T, cfg.beta_start, cfg.beta_end);  // validates the range
    return cfg;
}

std::string translate_config_to_json(const TranslateConfig& cfg) {
    json j;
    j["T"] = cfg.T;
    j["N"] = cfg.null_text.inner_steps;
    j["eta"] = cfg.null_text.eta;
    j["beta"] = {cfg.beta_start, cfg.beta_end};
    if (cfg.null_text.mode.kind == GuidanceMode::Kind::IN) {
        j["mode"] = "IN";
    } else {
        j["mode"] = {{"CFG", cfg.null_text.mode.w}};
    }
    j["seed"] = cfg.seed;
    return j.dump();
}

Tensor64 patch_to_latent(const geometry::ImageBuffer& patch) {
    if (patch.empty()) throw Error(ErrorCode::EmptyImage, "cannot translate an empty patch");
    const int w = patch.width(), h = patch.height();
    Tensor64 z(TensorShape{1, 3, h, w});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const geometry::Rgba c = patch.at(x, y);
            z.at(0, 0, y, x) = c.r / 127.5 - 1.0;
            z.at(0, 1, y, x) = c.g / 127.5 - 1.0;
            z.at(0, 2, y, x) = c.b / 127.5 - 1.0;
        }
    return z;
}

geometry::ImageBuffer latent_to_patch(const Tensor64& z, const geometry::ImageBuffer& alpha_source) {
    const int w = z.shape().w, h = z.shape().h;
    if (z.shape().n != 1 || z.shape().c != 3 || alpha_source.width() != w || alpha_source.height() != h) {
        throw Error(ErrorCode::ShapeMismatch, "latent does not match the patch");
    }
    auto to_byte = [](double v) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NumericalDivergence, "translated latent is not finite");
        return static_cast<std::uint8_t>(std::clamp(geometry::round_half_up((v + 1.0) * 127.5), 0, 255));
    };
    geometry::ImageBuffer out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            out.set(x, y, {to_byte(z.at(0, 0, y, x)), to_byte(z.at(0, 1, y, x)), to_byte(z.at(0, 2, y, x)),
                           alpha_source.at(x, y).a});
        }
    return out;
}

geometry::Roi translate_patch(const geometry::Roi& roi, std::string_view source_prompt, std::string_view target_prompt,
                              const TranslateConfig& cfg) {
    const Tensor64 z0 = patch_to_latent(roi.patch);
    const Schedule s = make_schedule(cfg.T, cfg.beta_start, cfg.beta_end);
    const ToyDenoiser den(cfg.seed, cfg.T, z0.shape());
    const PromptEmbedding source = embed_prompt(source_prompt, den.dim());
    const Trajectory<double> traj = ddim_invert(z0, source, den, s);
    const NullTextResult nulls = null_text_optimize(traj, source, den, s, cfg.null_text);
    const Tensor64 out = sample(traj.latents.back(), embed_prompt(target_prompt, den.dim()), nulls, den, s, cfg.null_text.mode);

    geometry::Roi result = roi;
    result.patch = latent_to_patch(out, roi.patch);
    result.label = std::string(target_prompt);
    return result;
}

}  // namespace symedit::inversion
