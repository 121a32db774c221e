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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgm/image.hpp"

namespace cgm {

/// Image/GT ingestion in the <root>/im, <root>/gt directory convention and a
/// seeded synthetic shape generator for desk-scale training and tests.

struct PairEntry {
    std::string image_path;
    std::string gt_path;
    std::string id; // shared stem
};

struct PairManifest {
    std::string root;
    std::vector<PairEntry> entries;       // lexicographic by id
    std::vector<std::string> unmatched;   // files without a partner
};

/// Scans <root>/im/*.{png,jpg,jpeg} against <root>/gt/*.png, matching stems.
/// Throws on missing subdirectories or zero matches; unmatched files are
/// listed, not fatal.
PairManifest scan_pairs(const std::string& root);

enum class ShapeFamily { Disks, Polygons, Rings, Stars };

ShapeFamily parse_shape_family(const std::string& name); // "disks" etc.
std::string shape_family_name(ShapeFamily family);

/// Synthetic pair generation recipe. Reproducible: output is a pure function
/// of the spec.
struct SynthSpec {
    std::uint64_t seed = 7;
    int count = 16;
    int size = 64;
    ShapeFamily family = ShapeFamily::Disks;
    double background_noise = 0.10;
    double foreground_noise = 0.10;
};

struct SynthPair {
    Image image;
    BinaryMask mask;
};

/// Seeded shape/texture pairs. GT is the exact rasterized shape with
/// foreground fraction within [0.02, 0.98]; the stars family guarantees at
/// least one axis-aligned stroke of width <= 3 to exercise thin structures.
std::vector<SynthPair> generate_synthetic(const SynthSpec& spec);

} // namespace cgm
