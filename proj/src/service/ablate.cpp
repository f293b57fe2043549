// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>

#include "symedit/geometry/ops.hpp"
#include "symedit/geometry/png.hpp"
#include "symedit/service/service.hpp"

namespace symedit::service {

double image_rms(const geometry::ImageBuffer& a, const geometry::ImageBuffer& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "images differ in size");
    double acc = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x) {
            const geometry::Rgba p = a.at(x, y), q = b.at(x, y);
            for (auto [u, v] : {std::pair{p.r, q.r}, std::pair{p.g, q.g}, std::pair{p.b, q.b}}) {
                const double d = static_cast<double>(u) - static_cast<double>(v);
                acc += d * d;
                ++n;
            }
        }
    return n == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n));
}

AblationReport ablate(const geometry::ImageBuffer& image, const dsl::Selector& selector, std::string_view source,
                      std::string_view target, const std::vector<double>& ws, const inversion::TranslateConfig& base,
                      const std::optional<std::filesystem::path>& out_dir) {
    if (ws.empty()) throw Error(ErrorCode::InvalidArgument, "ablation needs at least one guidance scale");
    const auto rois = geometry::segment_components(image);
    const geometry::Roi roi = geometry::resolve_selector(rois, selector);
    const geometry::ImageBuffer background = geometry::inpaint_fill(image, roi.mask);

    AblationReport report;
    auto render = [&](std::string name, const inversion::GuidanceMode& mode) {
        inversion::TranslateConfig cfg = base;
        cfg.null_text.mode = mode;
        const geometry::Roi translated = inversion::translate_patch(roi, source, target, cfg);
        report.outputs.push_back({std::move(name), geometry::paste(background, translated)});
    };
    for (double w : ws) render("cfg_w" + dsl::format_number(w), inversion::GuidanceMode::classifier_free(w));
    render("in", inversion::GuidanceMode::instance_norm());

    const std::size_t n = report.outputs.size();
    report.rms.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            report.rms[i][j] = report.rms[j][i] = image_rms(report.outputs[i].image, report.outputs[j].image);
        }

    if (out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*out_dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir->string() + ": " + ec.message());
        nlohmann::json names = nlohmann::json::array();
        for (const auto& o : report.outputs) {
            geometry::write_png(*out_dir / (o.name + ".png"), o.image);
            names.push_back(o.name);
        }
        const nlohmann::json doc = {{"outputs", names}, {"rms", report.rms}, {"config", nlohmann::json::parse(inversion::translate_config_to_json(base))}};
        std::ofstream file(*out_dir / "rms.json", std::ios::binary);
        file << doc.dump(2) << '\n';
        if (!file) throw Error(ErrorCode::IoError, "cannot write rms.json");
    }
    return report;
}

}  // namespace symedit::service
