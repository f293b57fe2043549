// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations used by the tests. Each one is written
// independently of the library code and favours obviousness over speed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symedit/dsl/program.hpp"
#include "symedit/geometry/image.hpp"
#include "symedit/geometry/ops.hpp"
#include "symedit/geometry/roi.hpp"
#include "symedit/geometry/scene.hpp"
#include "symedit/inversion/diffusion.hpp"
#include "symedit/planner/planner.hpp"

namespace oracle {

using symedit::geometry::BBox;
using symedit::geometry::ImageBuffer;
using symedit::geometry::Mask;
using symedit::geometry::Point;
using symedit::geometry::Rgba;
using symedit::geometry::Size;

struct Region {
    Mask mask;
    BBox bbox;
    Point centroid;
    std::string label;
    ImageBuffer patch;
    int first = 0;
};

inline int half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

// Tight box, centroid and cut-out computed by direct scans of the mask.
inline Region describe(const ImageBuffer& pixels_at_mask, const Mask& mask, std::string label) {
    Region r;
    r.mask = mask;
    r.label = std::move(label);
    int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
    double sx = 0, sy = 0, n = 0;
    r.first = -1;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.get(x, y)) continue;
            if (r.first < 0) r.first = y * mask.width() + x;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
            sx += x;
            sy += y;
            n += 1;
        }
    }
    r.bbox = {x0, y0, x1, y1};
    r.centroid = {sx / n, sy / n};
    r.patch = ImageBuffer(x1 - x0 + 1, y1 - y0 + 1, Rgba{0, 0, 0, 0});
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            Rgba c = pixels_at_mask.at(x, y);
            c.a = mask.get(x, y) ? 255 : 0;
            r.patch.set(x - x0, y - y0, c);
        }
    }
    return r;
}

// Components by repeated min-label relaxation until a fixed point.
inline std::vector<Region> segment(const ImageBuffer& img) {
    const int w = img.width(), h = img.height();
    std::map<std::uint32_t, int> counts;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) counts[img.at(x, y).packed()]++;
    std::uint32_t bg = 0;
    int best = -1;
    for (auto [k, n] : counts) {
        if (n > best || (n == best && k < bg)) {
            bg = k;
            best = n;
        }
    }
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    for (int i = 0; i < w * h; ++i)
        if (img.at(i % w, i / w).packed() != bg) label[static_cast<std::size_t>(i)] = i;
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < w * h; ++i) {
            if (label[static_cast<std::size_t>(i)] < 0) continue;
            const int x = i % w, y = i / w;
            const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
            for (auto& p : nb) {
                if (p[0] < 0 || p[1] < 0 || p[0] >= w || p[1] >= h) continue;
                const int j = p[1] * w + p[0];
                if (img.at(p[0], p[1]).packed() != img.at(x, y).packed()) continue;
                if (label[static_cast<std::size_t>(j)] < label[static_cast<std::size_t>(i)]) {
                    label[static_cast<std::size_t>(i)] = label[static_cast<std::size_t>(j)];
                    changed = true;
                }
            }
        }
    }
    std::map<int, Mask> groups;
    for (int i = 0; i < w * h; ++i) {
        int l = label[static_cast<std::size_t>(i)];
        if (l < 0) continue;
        auto it = groups.try_emplace(l, w, h).first;
        it->second.set(i % w, i / w);
    }
    std::vector<Region> out;
    for (auto& [root, mask] : groups) {
        Rgba c = img.at(root % w, root / w);
        out.push_back(describe(img, mask, symedit::geometry::Palette::standard().label_for(c)));
    }
    std::stable_sort(out.begin(), out.end(), [](const Region& a, const Region& b) {
        if (a.centroid.x != b.centroid.x) return a.centroid.x < b.centroid.x;
        if (a.centroid.y != b.centroid.y) return a.centroid.y < b.centroid.y;
        return a.first < b.first;
    });
    return out;
}

// Colour under fully transparent patch pixels is unspecified and ignored.
inline bool same_patch(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.size() != b.size()) return false;
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) {
            Rgba p = a.at(x, y), q = b.at(x, y);
            if (p.a != q.a || (p.a != 0 && p != q)) return false;
        }
    }
    return true;
}

inline bool same(const Region& o, const symedit::geometry::Roi& r) {
    return o.mask == r.mask && o.bbox == r.bbox && o.centroid == r.centroid && o.label == r.label &&
           same_patch(o.patch, r.patch);
}

// Onion peel by full-image rescans: every round fills all holes touching a
// pixel known before the round, with the half-up rounded neighbour mean.
inline ImageBuffer inpaint(const ImageBuffer& img, const Mask& mask) {
    ImageBuffer out = img;
    Mask pending = mask;
    while (pending.count() > 0) {
        std::vector<std::pair<int, Rgba>> writes;
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                if (!pending.get(x, y)) continue;
                double r = 0, g = 0, b = 0, n = 0;
                const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
                for (auto& p : nb) {
                    if (!img.contains(p[0], p[1]) || pending.get(p[0], p[1])) continue;
                    Rgba c = out.at(p[0], p[1]);
                    r += c.r;
                    g += c.g;
                    b += c.b;
                    n += 1;
                }
                if (n == 0) continue;
                writes.push_back({y * img.width() + x,
                                  Rgba{static_cast<std::uint8_t>(half_up(r / n)), static_cast<std::uint8_t>(half_up(g / n)),
                                       static_cast<std::uint8_t>(half_up(b / n)), 255}});
            }
        }
        if (writes.empty()) break;
        for (auto& [i, c] : writes) {
            out.set(i % img.width(), i / img.width(), c);
            pending.set(i % img.width(), i / img.width(), false);
        }
    }
    return out;
}

// Per-pixel pull composite: each output pixel asks which patch pixel lands on it.
inline std::optional<ImageBuffer> paste(const ImageBuffer& bg, const symedit::geometry::Roi& roi,
                                        std::optional<Point> at = std::nullopt) {
    Point target = at.value_or(roi.centroid);
    const int ox = roi.bbox.x0 + half_up(target.x - roi.centroid.x);
    const int oy = roi.bbox.y0 + half_up(target.y - roi.centroid.y);
    ImageBuffer out = bg;
    bool overlaps = false;
    for (int y = 0; y < bg.height(); ++y) {
        for (int x = 0; x < bg.width(); ++x) {
            const int px = x - ox, py = y - oy;
            if (px < 0 || py < 0 || px >= roi.patch.width() || py >= roi.patch.height()) continue;
            overlaps = true;
            if (roi.patch.at(px, py).a == 255) out.set(x, y, roi.patch.at(px, py));
        }
    }
    if (!overlaps) return std::nullopt;
    return out;
}

// Nearest-neighbour resample of the patch, re-anchored on the old centroid.
inline std::optional<Region> scale(const symedit::geometry::Roi& roi, double f, Size bounds) {
    const int w = roi.patch.width(), h = roi.patch.height();
    const int nw = half_up(w * f), nh = half_up(h * f);
    if (nw < 1 || nh < 1) return std::nullopt;
    ImageBuffer rs(nw, nh, Rgba{0, 0, 0, 0});
    double sx = 0, sy = 0, n = 0;
    for (int j = 0; j < nh; ++j) {
        for (int i = 0; i < nw; ++i) {
            const int si = static_cast<int>(std::floor((i + 0.5) * w / nw));
            const int sj = static_cast<int>(std::floor((j + 0.5) * h / nh));
            rs.set(i, j, roi.patch.at(si, sj));
            if (roi.patch.at(si, sj).a) {
                sx += i;
                sy += j;
                n += 1;
            }
        }
    }
    if (n == 0) return std::nullopt;
    const int x0 = half_up(roi.centroid.x - sx / n), y0 = half_up(roi.centroid.y - sy / n);
    Mask mask(bounds.width, bounds.height);
    ImageBuffer canvas(bounds.width, bounds.height, Rgba{0, 0, 0, 0});
    for (int j = 0; j < nh; ++j) {
        for (int i = 0; i < nw; ++i) {
            const int x = x0 + i, y = y0 + j;
            if (x < 0 || y < 0 || x >= bounds.width || y >= bounds.height || rs.at(i, j).a == 0) continue;
            mask.set(x, y);
            canvas.set(x, y, rs.at(i, j));
        }
    }
    if (mask.count() == 0) return std::nullopt;
    return describe(canvas, mask, roi.label);
}

// All topological orders by filtering every permutation, in lexicographic order.
inline std::vector<std::vector<int>> topo_orders(const symedit::planner::Dag& dag) {
    std::vector<int> perm(static_cast<std::size_t>(dag.nodes));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        std::vector<int> pos(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) pos[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
        bool ok = std::all_of(dag.edges.begin(), dag.edges.end(), [&](auto e) {
            return pos[static_cast<std::size_t>(e.first)] < pos[static_cast<std::size_t>(e.second)];
        });
        if (ok) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// Linear beta schedule and one reverse step, evaluated in long double.
struct LongSchedule {
    std::vector<long double> abar;
    explicit LongSchedule(int T, long double b0 = 1e-4L, long double b1 = 0.02L) : abar{1.0L} {
        for (int i = 0; i < T; ++i) {
            long double beta = T == 1 ? b0 : b0 + (b1 - b0) * i / (T - 1);
            abar.push_back(abar.back() * (1.0L - beta));
        }
    }
    long double step(long double z, long double eps, int t) const {
        long double a1 = abar[static_cast<std::size_t>(t - 1)], a = abar[static_cast<std::size_t>(t)];
        return std::sqrt(a1 / a) * z + (std::sqrt(1 / a1 - 1) - std::sqrt(1 / a - 1)) * eps;
    }
};

// Random image of colour blocks from a small palette, including colours
// outside the label table and deliberate equal-count ties.
inline ImageBuffer random_blocks(std::mt19937_64& rng, int w, int h) {
    static const Rgba kColors[] = {{60, 130, 70, 255}, {220, 30, 30, 255}, {30, 60, 220, 255},
                                   {240, 220, 40, 255}, {17, 17, 17, 255},  {123, 45, 67, 255}};
    std::uniform_int_distribution<int> pick(0, 5), coin(0, 3);
    ImageBuffer img(w, h, kColors[0]);
    const int blocks = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int b = 0; b < blocks; ++b) {
        int x0 = std::uniform_int_distribution<int>(0, w - 1)(rng);
        int y0 = std::uniform_int_distribution<int>(0, h - 1)(rng);
        int bw = std::uniform_int_distribution<int>(1, std::max(1, w / 3))(rng);
        int bh = std::uniform_int_distribution<int>(1, std::max(1, h / 3))(rng);
        Rgba c = kColors[pick(rng)];
        for (int y = y0; y < std::min(h, y0 + bh); ++y)
            for (int x = x0; x < std::min(w, x0 + bw); ++x)
                if (coin(rng) != 0 || bw < 3) img.set(x, y, c);
    }
    return img;
}

// Either a rendered synthetic scene or a block image; sizes 8..64.
inline ImageBuffer random_image(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int w = std::uniform_int_distribution<int>(8, 64)(rng);
    const int h = std::uniform_int_distribution<int>(8, 64)(rng);
    if (seed % 2 == 0) {
        return symedit::geometry::render_scene(symedit::geometry::random_scene(seed, w, h, 5));
    }
    return random_blocks(rng, w, h);
}

// Plain per-plane mean and sample standard deviation (divisor H*W-1, no
// regularizer), used to measure guidance outputs.
struct PlaneStats {
    double mean = 0.0;
    double std = 0.0;
};

inline PlaneStats plane_stats(const symedit::guidance::Tensor64& t, int n, int c) {
    const std::size_t hw = t.plane(), off = t.plane_offset(n, c);
    PlaneStats s;
    for (std::size_t i = 0; i < hw; ++i) s.mean += t[off + i];
    s.mean /= static_cast<double>(hw);
    double sq = 0.0;
    for (std::size_t i = 0; i < hw; ++i) sq += (t[off + i] - s.mean) * (t[off + i] - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(hw - 1));
    return s;
}

// Shape up to 2x4x8x8 with at least two elements per plane.
inline symedit::guidance::TensorShape random_guidance_shape(std::mt19937_64& rng) {
    symedit::guidance::TensorShape s{1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 4),
                                     1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 8)};
    if (s.h * s.w < 2) s.w = 2;
    return s;
}

// Every plane gets sample mean `offset` and sample std drawn from [lo, hi].
inline symedit::guidance::Tensor64 random_planes(std::mt19937_64& rng, symedit::guidance::TensorShape s, double offset,
                                                 double lo, double hi) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> spread(lo, hi);
    symedit::guidance::Tensor64 t(s);
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c) {
            const std::size_t off = t.plane_offset(n, c), hw = t.plane();
            for (std::size_t i = 0; i < hw; ++i) t[off + i] = nd(rng);
            const PlaneStats p = plane_stats(t, n, c);
            const double scale = spread(rng) / p.std;
            for (std::size_t i = 0; i < hw; ++i) t[off + i] = offset + (t[off + i] - p.mean) * scale;
        }
    return t;
}

}  // namespace oracle
