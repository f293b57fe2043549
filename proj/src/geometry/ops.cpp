// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>

#include "symedit/common/error.hpp"
#include "symedit/geometry/ops.hpp"

namespace symedit::geometry {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

struct BasicColor {
    std::string_view name;
    int r, g, b;
};

constexpr std::array<BasicColor, 11> kBasicColors = {{
    {"black", 0, 0, 0},
    {"white", 255, 255, 255},
    {"gray", 128, 128, 128},
    {"red", 200, 30, 30},
    {"orange", 240, 140, 20},
    {"yellow", 240, 220, 40},
    {"green", 40, 160, 60},
    {"blue", 40, 80, 220},
    {"purple", 130, 60, 190},
    {"pink", 245, 170, 190},
    {"brown", 130, 80, 30},
}};

bool is_basic_color(std::string_view word) {
    if (word == "grey") return true;
    return std::any_of(kBasicColors.begin(), kBasicColors.end(), [&](const BasicColor& c) { return c.name == word; });
}

constexpr std::array<std::string_view, 4> kLargeWords = {"big", "large", "biggest", "largest"};
constexpr std::array<std::string_view, 4> kSmallWords = {"small", "smallest", "little", "tiny"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& words, std::string_view w) {
    return std::find(words.begin(), words.end(), w) != words.end();
}

// Alpha-over for 8-bit straight alpha, exact for the 0/255 alphas regions carry.
Rgba alpha_over(Rgba src, Rgba dst) {
    if (src.a == 255) return src;
    if (src.a == 0) return dst;
    auto mix = [&](int s, int d) { return static_cast<std::uint8_t>((s * src.a + d * (255 - src.a) + 127) / 255); };
    return {mix(src.r, dst.r), mix(src.g, dst.g), mix(src.b, dst.b),
            static_cast<std::uint8_t>(src.a + (dst.a * (255 - src.a) + 127) / 255)};
}

}  // namespace

const Palette& Palette::standard() {
    static const Palette palette({
        {{176, 48, 48, 255}, "dog"},
        {{236, 236, 210, 255}, "sheep"},
        {{230, 126, 34, 255}, "fox"},
        {{110, 120, 135, 255}, "wolf"},
        {{120, 100, 200, 255}, "pigeon"},
        {{210, 170, 40, 255}, "cat"},
        {{130, 80, 30, 255}, "horse"},
        {{35, 35, 35, 255}, "zebra"},
        {{240, 170, 180, 255}, "woman"},
        {{200, 200, 240, 255}, "astronaut"},
        {{150, 150, 150, 255}, "elephant"},
        {{60, 160, 220, 255}, "bird"},
    });
    return palette;
}

std::string Palette::label_for(Rgba color) const {
    for (const auto& e : entries_) {
        if (e.color.r == color.r && e.color.g == color.g && e.color.b == color.b) return e.label;
    }
    return "region";
}

std::optional<Rgba> Palette::color_for(std::string_view label) const {
    std::string key = lowercase(label);
    for (const auto& e : entries_) {
        if (e.label == key) return e.color;
    }
    return std::nullopt;
}

Rgba background_color(const ImageBuffer& image) {
    std::map<std::uint32_t, std::size_t> counts;
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) ++counts[image.at(x, y).packed()];
    std::uint32_t best = 0;
    std::size_t best_count = 0;
    for (const auto& [packed, n] : counts) {  // ascending key, so ties keep the smallest
        if (n > best_count) {
            best = packed;
            best_count = n;
        }
    }
    return {static_cast<std::uint8_t>(best >> 24), static_cast<std::uint8_t>(best >> 16),
            static_cast<std::uint8_t>(best >> 8), static_cast<std::uint8_t>(best)};
}

std::vector<Roi> segment_components(const ImageBuffer& image, const Palette& palette) {
    if (image.empty()) throw Error(ErrorCode::EmptyImage, "cannot segment an empty image");
    const std::uint32_t bg = background_color(image).packed();
    const int w = image.width(), h = image.height();
    std::vector<int> component(static_cast<std::size_t>(w) * h, -1);

    struct Component {
        Mask mask;
        int first_pixel;
        Rgba color;
    };
    std::vector<Component> found;
    std::vector<int> stack;

    for (int start = 0; start < w * h; ++start) {
        int sx = start % w, sy = start / w;
        Rgba color = image.at(sx, sy);
        if (color.packed() == bg || component[static_cast<std::size_t>(start)] >= 0) continue;

        int id = static_cast<int>(found.size());
        found.push_back({Mask(w, h), start, color});
        Mask& mask = found.back().mask;
        stack.assign(1, start);
        component[static_cast<std::size_t>(start)] = id;
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            int x = p % w, y = p / w;
            mask.set(x, y);
            constexpr int kDx[] = {1, -1, 0, 0};
            constexpr int kDy[] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int nx = x + kDx[k], ny = y + kDy[k];
                if (!image.contains(nx, ny)) continue;
                int q = ny * w + nx;
                if (component[static_cast<std::size_t>(q)] >= 0) continue;
                if (image.at(nx, ny).packed() != color.packed()) continue;
                component[static_cast<std::size_t>(q)] = id;
                stack.push_back(q);
            }
        }
    }
    if (found.empty()) throw Error(ErrorCode::NoForeground, "image is a single color class");

    std::vector<std::pair<Roi, int>> rois;
    rois.reserve(found.size());
    for (auto& c : found) rois.emplace_back(Roi::from_mask(image, c.mask, palette.label_for(c.color)), c.first_pixel);
    std::stable_sort(rois.begin(), rois.end(), [](const auto& a, const auto& b) {
        if (a.first.centroid.x != b.first.centroid.x) return a.first.centroid.x < b.first.centroid.x;
        if (a.first.centroid.y != b.first.centroid.y) return a.first.centroid.y < b.first.centroid.y;
        return a.second < b.second;
    });
    std::vector<Roi> out;
    out.reserve(rois.size());
    for (auto& [roi, first] : rois) out.push_back(std::move(roi));
    return out;
}

std::string basic_color_name(const Roi& roi) {
    std::int64_t r = 0, g = 0, b = 0, n = 0;
    for (int y = 0; y < roi.patch.height(); ++y)
        for (int x = 0; x < roi.patch.width(); ++x) {
            Rgba c = roi.patch.at(x, y);
            if (c.a == 0) continue;
            r += c.r;
            g += c.g;
            b += c.b;
            ++n;
        }
    if (n == 0) return "black";
    double mr = static_cast<double>(r) / n, mg = static_cast<double>(g) / n, mb = static_cast<double>(b) / n;
    std::string_view best = kBasicColors[0].name;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& c : kBasicColors) {
        double d = (mr - c.r) * (mr - c.r) + (mg - c.g) * (mg - c.g) + (mb - c.b) * (mb - c.b);
        if (d < best_d) {
            best_d = d;
            best = c.name;
        }
    }
    return std::string(best);
}

Roi resolve_selector(std::span<const Roi> rois, const dsl::Selector& selector) {
    const std::string wanted = lowercase(selector.class_name);
    std::vector<const Roi*> matches;
    for (const auto& roi : rois) {
        if (lowercase(roi.label) == wanted) matches.push_back(&roi);
    }

    for (const auto& attr : selector.attributes) {
        if (is_basic_color(attr)) {
            std::string color = attr == "grey" ? "gray" : attr;
            std::erase_if(matches, [&](const Roi* r) { return basic_color_name(*r) != color; });
        } else if (contains(kLargeWords, attr) || contains(kSmallWords, attr)) {
            if (matches.empty()) break;
            bool large = contains(kLargeWords, attr);
            auto cmp = [](const Roi* a, const Roi* b) { return a->area() < b->area(); };
            const Roi* pick = large ? *std::max_element(matches.begin(), matches.end(), cmp)
                                    : *std::min_element(matches.begin(), matches.end(), cmp);
            matches.assign(1, pick);
        } else {
            throw Error(ErrorCode::SelectorUnresolved, "unsupported attribute '" + attr + "'");
        }
    }

    const std::string phrase = dsl::print_selector(selector);
    if (matches.empty()) throw Error(ErrorCode::SelectorUnresolved, "no region matches '" + phrase + "'");

    const std::size_t n = matches.size();
    switch (selector.positional) {
        case dsl::Positional::Left: return *matches.front();
        case dsl::Positional::Right: return *matches.back();
        case dsl::Positional::Middle: return *matches[n / 2];
        case dsl::Positional::FarLeft:
            return **std::min_element(matches.begin(), matches.end(),
                                      [](const Roi* a, const Roi* b) { return a->centroid.x < b->centroid.x; });
        case dsl::Positional::FarRight: {
            const Roi* best = matches.front();
            for (const Roi* r : matches)
                if (r->centroid.x >= best->centroid.x) best = r;
            return *best;
        }
        case dsl::Positional::Index:
            if (static_cast<std::size_t>(selector.index) >= n) {
                throw Error(ErrorCode::SelectorUnresolved, "'" + phrase + "' has only " + std::to_string(n) + " matches");
            }
            return *matches[static_cast<std::size_t>(selector.index)];
        case dsl::Positional::All:
            if (n != 1) {
                throw Error(ErrorCode::SelectorAmbiguous,
                            "'" + phrase + "' matches " + std::to_string(n) + " regions; add a positional word");
            }
            return *matches.front();
    }
    throw Error(ErrorCode::Internal, "unhandled positional");
}

ImageBuffer inpaint_fill(const ImageBuffer& image, const Mask& mask) {
    if (image.size() != mask.size()) throw Error(ErrorCode::ShapeMismatch, "mask and image sizes differ");
    const std::size_t set = mask.count();
    if (set == 0) return image;
    const int w = image.width(), h = image.height();
    if (set == static_cast<std::size_t>(w) * h) throw Error(ErrorCode::MaskCoversImage, "mask leaves no known pixel");

    ImageBuffer out = image;
    std::vector<std::uint8_t> known(static_cast<std::size_t>(w) * h), queued(known.size());
    std::vector<int> frontier;
    constexpr int kDx[] = {1, -1, 0, 0};
    constexpr int kDy[] = {0, 0, 1, -1};

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) known[static_cast<std::size_t>(y * w + x)] = !mask.get(x, y);
    for (int p = 0; p < w * h; ++p) {
        if (known[static_cast<std::size_t>(p)]) continue;
        int x = p % w, y = p / w;
        for (int k = 0; k < 4; ++k) {
            int nx = x + kDx[k], ny = y + kDy[k];
            if (image.contains(nx, ny) && known[static_cast<std::size_t>(ny * w + nx)]) {
                frontier.push_back(p);
                queued[static_cast<std::size_t>(p)] = 1;
                break;
            }
        }
    }

    std::vector<Rgba> values;
    std::vector<int> next;
    while (!frontier.empty()) {
        values.clear();
        for (int p : frontier) {
            int x = p % w, y = p / w, n = 0, r = 0, g = 0, b = 0;
            for (int k = 0; k < 4; ++k) {
                int nx = x + kDx[k], ny = y + kDy[k];
                if (!image.contains(nx, ny) || !known[static_cast<std::size_t>(ny * w + nx)]) continue;
                Rgba c = out.at(nx, ny);
                r += c.r;
                g += c.g;
                b += c.b;
                ++n;
            }
            values.push_back({static_cast<std::uint8_t>((r + n / 2) / n), static_cast<std::uint8_t>((g + n / 2) / n),
                              static_cast<std::uint8_t>((b + n / 2) / n), 255});
        }
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            int p = frontier[i];
            out.set(p % w, p / w, values[i]);
            known[static_cast<std::size_t>(p)] = 1;
        }
        next.clear();
        for (int p : frontier) {
            int x = p % w, y = p / w;
            for (int k = 0; k < 4; ++k) {
                int nx = x + kDx[k], ny = y + kDy[k];
                if (!image.contains(nx, ny)) continue;
                auto q = static_cast<std::size_t>(ny * w + nx);
                if (known[q] || queued[q]) continue;
                queued[q] = 1;
                next.push_back(static_cast<int>(q));
            }
        }
        frontier.swap(next);
    }
    return out;
}

std::optional<Direction> direction_from_string(std::string_view text) noexcept {
    if (text == "left") return Direction::Left;
    if (text == "right") return Direction::Right;
    if (text == "up") return Direction::Up;
    if (text == "down") return Direction::Down;
    return std::nullopt;
}

std::string_view to_string(Direction direction) noexcept {
    switch (direction) {
        case Direction::Left: return "left";
        case Direction::Right: return "right";
        case Direction::Up: return "up";
        case Direction::Down: return "down";
    }
    return "left";
}

Roi move_roi(const Roi& roi, Direction direction, int amount, Size bounds) {
    if (amount < 0) throw Error(ErrorCode::InvalidArgument, "move amount must be >= 0");
    int dx = 0, dy = 0;
    switch (direction) {
        case Direction::Left: dx = -amount; break;
        case Direction::Right: dx = amount; break;
        case Direction::Up: dy = -amount; break;
        case Direction::Down: dy = amount; break;
    }
    auto moved = Roi::from_patch(roi.patch, roi.bbox.x0 + dx, roi.bbox.y0 + dy, bounds, roi.label);
    if (!moved) throw Error(ErrorCode::RegionFullyClipped, "region moved entirely outside the image");
    return *std::move(moved);
}

Roi scale_roi(const Roi& roi, double factor, Size bounds) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw Error(ErrorCode::InvalidArgument, "scale factor must be > 0");
    const int w = roi.patch.width(), h = roi.patch.height();
    const int nw = round_half_up(w * factor), nh = round_half_up(h * factor);
    if (nw < 1 || nh < 1) throw Error(ErrorCode::DegenerateResult, "scaled region has zero extent");

    ImageBuffer resampled(nw, nh, Rgba{0, 0, 0, 0});
    std::int64_t sx = 0, sy = 0, n = 0;
    for (int j = 0; j < nh; ++j) {
        // nearest source pixel to the destination pixel center, integer-exact
        int src_y = static_cast<int>((static_cast<std::int64_t>(2 * j + 1) * h) / (2 * static_cast<std::int64_t>(nh)));
        for (int i = 0; i < nw; ++i) {
            int src_x = static_cast<int>((static_cast<std::int64_t>(2 * i + 1) * w) / (2 * static_cast<std::int64_t>(nw)));
            Rgba c = roi.patch.at(src_x, src_y);
            resampled.set(i, j, c);
            if (c.a != 0) {
                sx += i;
                sy += j;
                ++n;
            }
        }
    }
    if (n == 0) throw Error(ErrorCode::DegenerateResult, "scaled region lost every pixel");
    const double rx = static_cast<double>(sx) / n, ry = static_cast<double>(sy) / n;
    const int x0 = round_half_up(roi.centroid.x - rx), y0 = round_half_up(roi.centroid.y - ry);
    auto scaled = Roi::from_patch(resampled, x0, y0, bounds, roi.label);
    if (!scaled) throw Error(ErrorCode::DegenerateResult, "scaled region falls outside the image");
    return *std::move(scaled);
}

ImageBuffer paste(const ImageBuffer& background, const Roi& roi, std::optional<Point> at) {
    Point target = at.value_or(roi.centroid);
    const int ox = roi.bbox.x0 + round_half_up(target.x - roi.centroid.x);
    const int oy = roi.bbox.y0 + round_half_up(target.y - roi.centroid.y);
    const int pw = roi.patch.width(), ph = roi.patch.height();
    if (ox + pw <= 0 || oy + ph <= 0 || ox >= background.width() || oy >= background.height()) {
        throw Error(ErrorCode::FullyOutOfBounds, "pasted region lies entirely outside the image");
    }
    ImageBuffer out = background;
    for (int py = 0; py < ph; ++py) {
        for (int px = 0; px < pw; ++px) {
            int x = ox + px, y = oy + py;
            if (!out.contains(x, y)) continue;
            Rgba src = roi.patch.at(px, py);
            if (src.a == 0) continue;
            out.set(x, y, alpha_over(src, out.at(x, y)));
        }
    }
    return out;
}

ImageBuffer swap_rois(const ImageBuffer& image, const Roi& a, const Roi& b) {
    if (a.bounds() != image.size() || b.bounds() != image.size()) {
        throw Error(ErrorCode::ShapeMismatch, "region masks do not match the image size");
    }
    if (a.mask.intersects(b.mask)) throw Error(ErrorCode::OverlappingRegions, "regions to swap overlap");
    ImageBuffer filled = inpaint_fill(image, a.mask.united(b.mask));
    ImageBuffer out = paste(filled, a, b.centroid);
    return paste(out, b, a.centroid);
}

}  // namespace symedit::geometry
