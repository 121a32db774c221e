// Copyright 2026 The cgm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cgm/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <stdexcept>

#include "cgm/errors.hpp"
#include "cgm/rng.hpp"

namespace fs = std::filesystem;

namespace cgm {

namespace {

std::string lower_ext(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    return e;
}

} // namespace

PairManifest scan_pairs(const std::string& root) {
    const fs::path im_dir = fs::path(root) / "im";
    const fs::path gt_dir = fs::path(root) / "gt";
    if (!fs::is_directory(im_dir) || !fs::is_directory(gt_dir)) {
        throw IoError("scan_pairs: " + root + " must contain im/ and gt/ subdirectories");
    }

    std::map<std::string, std::string> images;   // stem -> path
    std::map<std::string, std::string> gts;
    std::vector<std::string> unmatched;

    for (const auto& entry : fs::directory_iterator(im_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = lower_ext(entry.path());
        if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
        const std::string stem = entry.path().stem().string();
        if (!images.emplace(stem, entry.path().string()).second) {
            unmatched.push_back(entry.path().string()); // duplicate stem
        }
    }
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
        if (!entry.is_regular_file()) continue;
        if (lower_ext(entry.path()) != ".png") continue;
        const std::string stem = entry.path().stem().string();
        if (!gts.emplace(stem, entry.path().string()).second) {
            unmatched.push_back(entry.path().string());
        }
    }

    PairManifest manifest;
    manifest.root = root;
    for (const auto& [stem, path] : images) {
        const auto it = gts.find(stem);
        if (it == gts.end()) {
            unmatched.push_back(path);
            continue;
        }
        manifest.entries.push_back(PairEntry{path, it->second, stem});
    }
    for (const auto& [stem, path] : gts) {
        if (!images.count(stem)) unmatched.push_back(path);
    }
    std::sort(unmatched.begin(), unmatched.end());
    manifest.unmatched = std::move(unmatched);
    // std::map iteration already gave lexicographic id order.

    if (manifest.entries.empty()) {
        throw IoError("scan_pairs: no matching image/GT pairs under " + root);
    }
    return manifest;
}

ShapeFamily parse_shape_family(const std::string& name) {
    if (name == "disks") return ShapeFamily::Disks;
    if (name == "polygons") return ShapeFamily::Polygons;
    if (name == "rings") return ShapeFamily::Rings;
    if (name == "stars") return ShapeFamily::Stars;
    throw std::invalid_argument("unknown shape family: " + name +
                                " (expected disks|polygons|rings|stars)");
}

std::string shape_family_name(ShapeFamily family) {
    switch (family) {
        case ShapeFamily::Disks: return "disks";
        case ShapeFamily::Polygons: return "polygons";
        case ShapeFamily::Rings: return "rings";
        case ShapeFamily::Stars: return "stars";
    }
    return "?";
}

namespace {

using Cells = std::vector<std::uint8_t>;

void fill_disk(Cells& m, int size, double cy, double cx, double r) {
    const double r2 = r * r;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dy = y - cy;
            const double dx = x - cx;
            if (dy * dy + dx * dx <= r2) m[static_cast<std::size_t>(y) * size + x] = 1;
        }
    }
}

Cells raster_disks(Rng& rng, int size) {
    Cells m(static_cast<std::size_t>(size) * size, 0);
    const int count = 1 + static_cast<int>(rng.uniform_index(3));
    struct Disk { double cy, cx, r; };
    std::vector<Disk> placed;
    for (int i = 0; i < count; ++i) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            const double r = rng.uniform(0.12, 0.22) * size;
            const double cy = rng.uniform(0.25, 0.75) * size;
            const double cx = rng.uniform(0.25, 0.75) * size;
            bool overlaps = false;
            for (const Disk& d : placed) {
                const double dist = std::hypot(cy - d.cy, cx - d.cx);
                if (dist <= r + d.r + 3.0) { // keep components separated
                    overlaps = true;
                    break;
                }
            }
            if (!overlaps) {
                placed.push_back(Disk{cy, cx, r});
                break;
            }
        }
    }
    for (const Disk& d : placed) fill_disk(m, size, d.cy, d.cx, d.r);
    return m;
}

Cells raster_polygon(Rng& rng, int size) {
    Cells m(static_cast<std::size_t>(size) * size, 0);
    const int vertices = 3 + static_cast<int>(rng.uniform_index(4));
    const double cy = rng.uniform(0.35, 0.65) * size;
    const double cx = rng.uniform(0.35, 0.65) * size;
    std::vector<double> angles(vertices);
    for (double& a : angles) a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    std::sort(angles.begin(), angles.end());
    std::vector<std::pair<double, double>> pts(vertices);
    for (int i = 0; i < vertices; ++i) {
        const double r = rng.uniform(0.18, 0.38) * size;
        pts[i] = {cy + r * std::sin(angles[i]), cx + r * std::cos(angles[i])};
    }
    // Point-in-polygon by winding of the star-shaped polygon (vertices sorted
    // by angle around the center, so edges never cross). A pixel is inside
    // when every edge cross product shares one sign, whichever orientation
    // the sort produced.
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            bool has_pos = false, has_neg = false;
            for (int i = 0; i < vertices; ++i) {
                const auto& a = pts[i];
                const auto& b = pts[(i + 1) % vertices];
                const double cross = (b.first - a.first) * (x - a.second) -
                                     (b.second - a.second) * (y - a.first);
                if (cross > 0.0) has_pos = true;
                if (cross < 0.0) has_neg = true;
            }
            if (!(has_pos && has_neg)) m[static_cast<std::size_t>(y) * size + x] = 1;
        }
    }
    return m;
}

Cells raster_ring(Rng& rng, int size) {
    Cells m(static_cast<std::size_t>(size) * size, 0);
    const double outer = rng.uniform(0.20, 0.35) * size;
    const double inner = outer * rng.uniform(0.45, 0.70);
    const double cy = rng.uniform(0.40, 0.60) * size;
    const double cx = rng.uniform(0.40, 0.60) * size;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dy = y - cy;
            const double dx = x - cx;
            const double d2 = dy * dy + dx * dx;
            if (d2 <= outer * outer && d2 > inner * inner) {
                m[static_cast<std::size_t>(y) * size + x] = 1;
            }
        }
    }
    return m;
}

void fill_segment(Cells& m, int size, double ay, double ax, double by, double bx, double width) {
    const double half = width / 2.0;
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(ay, by) - half - 1)));
    const int y1 = std::min(size - 1, static_cast<int>(std::ceil(std::max(ay, by) + half + 1)));
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(ax, bx) - half - 1)));
    const int x1 = std::min(size - 1, static_cast<int>(std::ceil(std::max(ax, bx) + half + 1)));
    const double vy = by - ay;
    const double vx = bx - ax;
    const double len2 = vy * vy + vx * vx;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            double t = len2 > 0.0 ? ((y - ay) * vy + (x - ax) * vx) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double py = ay + t * vy;
            const double px = ax + t * vx;
            const double dist = std::hypot(y - py, x - px);
            if (dist <= half) m[static_cast<std::size_t>(y) * size + x] = 1;
        }
    }
}

Cells raster_star(Rng& rng, int size) {
    Cells m(static_cast<std::size_t>(size) * size, 0);
    const double cy = rng.uniform(0.40, 0.60) * size;
    const double cx = rng.uniform(0.40, 0.60) * size;
    const int rays = 5 + static_cast<int>(rng.uniform_index(4));
    for (int i = 0; i < rays; ++i) {
        // Ray 0 is horizontal so a width <= 3 axis-aligned stroke always exists.
        const double angle = i == 0 ? 0.0 : rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        const double length = rng.uniform(0.28, 0.45) * size;
        const double width = i == 0 ? (1.0 + rng.uniform_index(3)) : (1.0 + rng.uniform_index(3));
        fill_segment(m, size, cy, cx, cy + length * std::sin(angle), cx + length * std::cos(angle),
                     width);
    }
    return m;
}

double fraction(const Cells& m) {
    std::size_t n = 0;
    for (auto v : m) n += v;
    return static_cast<double>(n) / static_cast<double>(m.size());
}

} // namespace

std::vector<SynthPair> generate_synthetic(const SynthSpec& spec) {
    if (spec.size < 32) throw std::invalid_argument("SynthSpec: size must be >= 32");
    if (spec.count < 1) throw std::invalid_argument("SynthSpec: count must be >= 1");
    if (spec.background_noise < 0.0 || spec.background_noise > 0.15 || spec.foreground_noise < 0.0 ||
        spec.foreground_noise > 0.15) {
        throw std::invalid_argument("SynthSpec: noise amplitudes must be within [0, 0.15]");
    }

    std::vector<SynthPair> pairs;
    pairs.reserve(spec.count);
    for (int index = 0; index < spec.count; ++index) {
        Rng rng(spec.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1)));

        Cells mask;
        for (int attempt = 0; attempt < 32; ++attempt) {
            switch (spec.family) {
                case ShapeFamily::Disks: mask = raster_disks(rng, spec.size); break;
                case ShapeFamily::Polygons: mask = raster_polygon(rng, spec.size); break;
                case ShapeFamily::Rings: mask = raster_ring(rng, spec.size); break;
                case ShapeFamily::Stars: mask = raster_star(rng, spec.size); break;
            }
            const double f = fraction(mask);
            if (f >= 0.02 && f <= 0.98) break;
        }

        // Contrasting base colors with mild per-channel variation.
        const bool bright_fg = rng.coin();
        double fg_base = bright_fg ? rng.uniform(0.60, 0.85) : rng.uniform(0.15, 0.40);
        double bg_base = bright_fg ? rng.uniform(0.15, 0.40) : rng.uniform(0.60, 0.85);
        double fg_rgb[3], bg_rgb[3];
        for (int c = 0; c < 3; ++c) {
            fg_rgb[c] = std::clamp(fg_base + rng.uniform(-0.08, 0.08), 0.0, 1.0);
            bg_rgb[c] = std::clamp(bg_base + rng.uniform(-0.08, 0.08), 0.0, 1.0);
        }

        std::vector<float> img(static_cast<std::size_t>(spec.size) * spec.size * 3);
        for (std::size_t p = 0; p < mask.size(); ++p) {
            const bool fg = mask[p] != 0;
            const double amp = fg ? spec.foreground_noise : spec.background_noise;
            for (int c = 0; c < 3; ++c) {
                const double base = fg ? fg_rgb[c] : bg_rgb[c];
                img[p * 3 + c] = static_cast<float>(std::clamp(base + rng.uniform(-amp, amp), 0.0, 1.0));
            }
        }
        pairs.push_back(SynthPair{Image(spec.size, spec.size, std::move(img)),
                                  BinaryMask(spec.size, spec.size, std::move(mask))});
    }
    return pairs;
}

} // namespace cgm
