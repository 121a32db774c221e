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

#include "cgm/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cgm {

namespace {

void check_dims(int height, int width) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("map dimensions must be positive, got " +
                                    std::to_string(height) + "x" + std::to_string(width));
    }
}

void check_size(std::size_t actual, std::size_t expected, const char* what) {
    if (actual != expected) {
        throw std::invalid_argument(std::string(what) + ": data length " + std::to_string(actual) +
                                    " does not match expected " + std::to_string(expected));
    }
}

} // namespace

Image::Image(int height, int width, std::vector<float> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    check_size(data_.size(), static_cast<std::size_t>(height) * width * 3, "Image");
    for (float v : data_) {
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw std::invalid_argument("Image values must be finite and within [0,1]");
        }
    }
}

Image Image::constant(int height, int width, float r, float g, float b) {
    check_dims(height, width);
    std::vector<float> data(static_cast<std::size_t>(height) * width * 3);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
    return Image(height, width, std::move(data));
}

LogitMap::LogitMap(int height, int width, std::vector<float> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    check_size(data_.size(), static_cast<std::size_t>(height) * width, "LogitMap");
    for (float v : data_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("LogitMap values must be finite");
        }
    }
}

LogitMap LogitMap::constant(int height, int width, float value) {
    check_dims(height, width);
    return LogitMap(height, width,
                    std::vector<float>(static_cast<std::size_t>(height) * width, value));
}

ProbabilityMap::ProbabilityMap(int height, int width, std::vector<float> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    check_size(data_.size(), static_cast<std::size_t>(height) * width, "ProbabilityMap");
    for (float v : data_) {
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw std::invalid_argument("ProbabilityMap values must be within [0,1]");
        }
    }
}

ProbabilityMap ProbabilityMap::constant(int height, int width, float value) {
    check_dims(height, width);
    return ProbabilityMap(height, width,
                          std::vector<float>(static_cast<std::size_t>(height) * width, value));
}

BinaryMask::BinaryMask(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    check_size(data_.size(), static_cast<std::size_t>(height) * width, "BinaryMask");
    for (std::uint8_t v : data_) {
        if (v > 1) {
            throw std::invalid_argument("BinaryMask values must be 0 or 1");
        }
    }
}

std::size_t BinaryMask::foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : data_) n += v;
    return n;
}

BinaryMask BinaryMask::constant(int height, int width, std::uint8_t value) {
    check_dims(height, width);
    return BinaryMask(height, width,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width, value));
}

Trimap::Trimap(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    check_size(data_.size(), static_cast<std::size_t>(height) * width, "Trimap");
    for (std::uint8_t v : data_) {
        if (v != kBackground && v != kUnknown && v != kForeground) {
            throw std::invalid_argument("Trimap values must be one of {0,128,255}");
        }
    }
}

Trimap Trimap::constant(int height, int width, std::uint8_t value) {
    check_dims(height, width);
    return Trimap(height, width,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width, value));
}

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

ProbabilityMap sigmoid_map(const LogitMap& logits) {
    std::vector<float> out(logits.data().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<float>(stable_sigmoid(logits.data()[i]));
    }
    return ProbabilityMap(logits.height(), logits.width(), std::move(out));
}

namespace {

// Shared bilinear kernel on a single channel-interleaved buffer.
std::vector<float> bilinear(const float* src, int sh, int sw, int channels, int dh, int dw) {
    std::vector<float> out(static_cast<std::size_t>(dh) * dw * channels);
    const double sy = static_cast<double>(sh) / dh;
    const double sx = static_cast<double>(sw) / dw;
    for (int y = 0; y < dh; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(sh - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, sh - 1);
        const double wy = fy - y0;
        for (int x = 0; x < dw; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(sw - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, sw - 1);
            const double wx = fx - x0;
            for (int c = 0; c < channels; ++c) {
                const double v00 = src[(static_cast<std::size_t>(y0) * sw + x0) * channels + c];
                const double v01 = src[(static_cast<std::size_t>(y0) * sw + x1) * channels + c];
                const double v10 = src[(static_cast<std::size_t>(y1) * sw + x0) * channels + c];
                const double v11 = src[(static_cast<std::size_t>(y1) * sw + x1) * channels + c];
                const double top = v00 + (v01 - v00) * wx;
                const double bot = v10 + (v11 - v10) * wx;
                out[(static_cast<std::size_t>(y) * dw + x) * channels + c] =
                    static_cast<float>(top + (bot - top) * wy);
            }
        }
    }
    return out;
}

std::vector<int> nearest_index(int src, int dst) {
    std::vector<int> idx(dst);
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
        idx[i] = std::min(src - 1, static_cast<int>(std::floor((i + 0.5) * scale)));
    }
    return idx;
}

} // namespace

Image resize_bilinear(const Image& img, int height, int width) {
    check_dims(height, width);
    return Image(height, width, bilinear(img.data().data(), img.height(), img.width(), 3, height, width));
}

ProbabilityMap resize_bilinear(const ProbabilityMap& map, int height, int width) {
    check_dims(height, width);
    auto data = bilinear(map.data().data(), map.height(), map.width(), 1, height, width);
    // Interpolation of [0,1] data is within [0,1] up to rounding; clamp the
    // stragglers so the type invariant holds.
    for (float& v : data) v = std::clamp(v, 0.0f, 1.0f);
    return ProbabilityMap(height, width, std::move(data));
}

namespace {

template <typename T>
std::vector<T> nearest(const T* src, int sh, int sw, int dh, int dw) {
    const auto ys = nearest_index(sh, dh);
    const auto xs = nearest_index(sw, dw);
    std::vector<T> out(static_cast<std::size_t>(dh) * dw);
    for (int y = 0; y < dh; ++y) {
        for (int x = 0; x < dw; ++x) {
            out[static_cast<std::size_t>(y) * dw + x] = src[static_cast<std::size_t>(ys[y]) * sw + xs[x]];
        }
    }
    return out;
}

} // namespace

BinaryMask resize_nearest(const BinaryMask& mask, int height, int width) {
    check_dims(height, width);
    return BinaryMask(height, width, nearest(mask.data().data(), mask.height(), mask.width(), height, width));
}

Trimap resize_nearest(const Trimap& trimap, int height, int width) {
    check_dims(height, width);
    return Trimap(height, width, nearest(trimap.data().data(), trimap.height(), trimap.width(), height, width));
}

BinaryMask binarize(const ProbabilityMap& map, double threshold) {
    std::vector<std::uint8_t> out(map.data().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<double>(map.data()[i]) >= threshold ? 1 : 0;
    }
    return BinaryMask(map.height(), map.width(), std::move(out));
}

} // namespace cgm
