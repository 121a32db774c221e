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
#include <span>
#include <vector>

namespace cgm {

/// Dense per-pixel prediction stages. All types validate their invariants on
/// construction and are immutable afterwards; storage is row-major float
/// (uint8 for the discrete alphabets).

/// RGB image with intensities in [0,1], interleaved row-major (y, x, c).
class Image {
public:
    Image(int height, int width, std::vector<float> data);

    int height() const { return height_; }
    int width() const { return width_; }
    static constexpr int channels() { return 3; }
    std::span<const float> data() const { return data_; }
    float at(int y, int x, int c) const { return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }

    static Image constant(int height, int width, float r, float g, float b);

private:
    int height_;
    int width_;
    std::vector<float> data_;
};

/// Unbounded real-valued map; every value must be finite.
class LogitMap {
public:
    LogitMap(int height, int width, std::vector<float> data);

    int height() const { return height_; }
    int width() const { return width_; }
    std::span<const float> data() const { return data_; }
    float at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    static LogitMap constant(int height, int width, float value);

private:
    int height_;
    int width_;
    std::vector<float> data_;
};

/// Per-pixel values in [0,1].
class ProbabilityMap {
public:
    ProbabilityMap(int height, int width, std::vector<float> data);

    int height() const { return height_; }
    int width() const { return width_; }
    std::span<const float> data() const { return data_; }
    float at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    static ProbabilityMap constant(int height, int width, float value);

private:
    int height_;
    int width_;
    std::vector<float> data_;
};

/// Hard {0,1} mask.
class BinaryMask {
public:
    BinaryMask(int height, int width, std::vector<std::uint8_t> data);

    int height() const { return height_; }
    int width() const { return width_; }
    std::span<const std::uint8_t> data() const { return data_; }
    std::uint8_t at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    std::size_t foreground_count() const;

    static BinaryMask constant(int height, int width, std::uint8_t value);

private:
    int height_;
    int width_;
    std::vector<std::uint8_t> data_;
};

/// Three-valued map: 0 background, 128 unknown, 255 foreground.
class Trimap {
public:
    static constexpr std::uint8_t kBackground = 0;
    static constexpr std::uint8_t kUnknown = 128;
    static constexpr std::uint8_t kForeground = 255;

    Trimap(int height, int width, std::vector<std::uint8_t> data);

    int height() const { return height_; }
    int width() const { return width_; }
    std::span<const std::uint8_t> data() const { return data_; }
    std::uint8_t at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    static Trimap constant(int height, int width, std::uint8_t value);

private:
    int height_;
    int width_;
    std::vector<std::uint8_t> data_;
};

/// Numerically stable logistic function, evaluated in double precision.
/// Branches on sign so that large |x| neither overflows nor underflows to the
/// wrong side.
double stable_sigmoid(double x);

/// Elementwise logistic of a logit map. Values are computed in double and
/// stored in single precision.
ProbabilityMap sigmoid_map(const LogitMap& logits);

/// Bilinear resampling with the pixel-center convention (corner alignment
/// off). Output stays within [0,1] for [0,1] inputs; identical target size
/// reproduces the input bit for bit.
Image resize_bilinear(const Image& img, int height, int width);
ProbabilityMap resize_bilinear(const ProbabilityMap& map, int height, int width);

/// Nearest-neighbor resampling; the output alphabet equals the input alphabet.
BinaryMask resize_nearest(const BinaryMask& mask, int height, int width);
Trimap resize_nearest(const Trimap& trimap, int height, int width);

/// Hard threshold: 1 iff value >= threshold (compared in double).
BinaryMask binarize(const ProbabilityMap& map, double threshold = 0.5);

} // namespace cgm
