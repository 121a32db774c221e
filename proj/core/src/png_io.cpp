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

#include "cgm/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "cgm/errors.hpp"

namespace cgm {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Decoded PNG: samples per channel in file order, plus channel count and the
// full-scale value (255 or 65535).
struct RawPng {
    int height = 0;
    int width = 0;
    int channels = 0;
    int max_value = 0;
    std::vector<std::uint32_t> samples; // interleaved, channels per pixel
};

RawPng read_png(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) {
        throw IoError("cannot open PNG for reading: " + path);
    }

    png_byte header[8];
    if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
        throw IoError("not a PNG file: " + path);
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed reading " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed reading " + path);
    }

    RawPng out;
    std::vector<png_byte> pixels;
    std::vector<png_bytep> rows;

    // libpng reports errors through longjmp; keep this frame free of C++
    // object churn between setjmp and the last libpng call.
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("malformed PNG: " + path);
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    png_byte bit_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    bit_depth = png_get_bit_depth(png, info);
    if (bit_depth != 8 && bit_depth != 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported PNG bit depth " + std::to_string(bit_depth) + ": " + path);
    }

    out.height = static_cast<int>(png_get_image_height(png, info));
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.channels = png_get_channels(png, info);
    out.max_value = bit_depth == 8 ? 255 : 65535;
    if (out.height < 1 || out.width < 1) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("empty PNG: " + path);
    }

    const std::size_t row_bytes = png_get_rowbytes(png, info);
    pixels.resize(row_bytes * out.height);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y) {
        rows[y] = pixels.data() + row_bytes * y;
    }

    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const std::size_t count = static_cast<std::size_t>(out.height) * out.width * out.channels;
    out.samples.resize(count);
    if (bit_depth == 8) {
        for (std::size_t i = 0; i < count; ++i) {
            out.samples[i] = pixels[i];
        }
    } else {
        // PNG 16-bit samples are big-endian in the byte stream.
        for (std::size_t i = 0; i < count; ++i) {
            out.samples[i] = (static_cast<std::uint32_t>(pixels[2 * i]) << 8) | pixels[2 * i + 1];
        }
    }
    return out;
}

// Effective color channel count after ignoring alpha (gray=1, gray+alpha=1,
// rgb=3, rgba=3).
int color_channels(const RawPng& raw) {
    switch (raw.channels) {
        case 1: return 1;
        case 2: return 1;
        case 3: return 3;
        case 4: return 3;
        default: return 0;
    }
}

void write_png(const std::string& path, int height, int width, int channels, int bit_depth,
               const std::vector<png_byte>& bytes) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) {
        throw IoError("cannot open PNG for writing: " + path);
    }

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed writing " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed writing " + path);
    }

    std::vector<png_bytep> rows(height);
    const std::size_t row_bytes = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
    for (int y = 0; y < height; ++y) {
        rows[y] = const_cast<png_bytep>(bytes.data() + row_bytes * y);
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed: " + path);
    }

    png_init_io(png, file.get());
    const int color_type = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace

Image load_image(const std::string& path) {
    const RawPng raw = read_png(path);
    const int cc = color_channels(raw);
    const double scale = 1.0 / raw.max_value;
    std::vector<float> data(static_cast<std::size_t>(raw.height) * raw.width * 3);
    const std::size_t pixels = static_cast<std::size_t>(raw.height) * raw.width;
    for (std::size_t p = 0; p < pixels; ++p) {
        const std::uint32_t* s = raw.samples.data() + p * raw.channels;
        if (cc == 1) {
            const float v = static_cast<float>(s[0] * scale);
            data[p * 3] = v;
            data[p * 3 + 1] = v;
            data[p * 3 + 2] = v;
        } else {
            data[p * 3] = static_cast<float>(s[0] * scale);
            data[p * 3 + 1] = static_cast<float>(s[1] * scale);
            data[p * 3 + 2] = static_cast<float>(s[2] * scale);
        }
    }
    return Image(raw.height, raw.width, std::move(data));
}

namespace {

// Single effective channel, as integers. Rejects RGB(A) files whose color
// channels disagree.
std::vector<std::uint32_t> load_single_channel(const std::string& path, int* max_value, int* h, int* w) {
    const RawPng raw = read_png(path);
    const int cc = color_channels(raw);
    const std::size_t pixels = static_cast<std::size_t>(raw.height) * raw.width;
    std::vector<std::uint32_t> values(pixels);
    for (std::size_t p = 0; p < pixels; ++p) {
        const std::uint32_t* s = raw.samples.data() + p * raw.channels;
        if (cc == 3 && (s[0] != s[1] || s[1] != s[2])) {
            throw IoError("multi-channel mask with unequal channels: " + path);
        }
        values[p] = s[0];
    }
    *max_value = raw.max_value;
    *h = raw.height;
    *w = raw.width;
    return values;
}

} // namespace

BinaryMask load_mask(const std::string& path) {
    int max_value = 0, h = 0, w = 0;
    const auto values = load_single_channel(path, &max_value, &h, &w);
    // Midpoint threshold: intensity >= 128/255 of full scale. For 16-bit
    // that is v >= 128 * 257 = 32896, exactly the replicated-byte boundary.
    const std::uint32_t threshold = max_value == 255 ? 128 : 32896;
    std::vector<std::uint8_t> data(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        data[i] = values[i] >= threshold ? 1 : 0;
    }
    return BinaryMask(h, w, std::move(data));
}

ProbabilityMap load_probability(const std::string& path) {
    int max_value = 0, h = 0, w = 0;
    const auto values = load_single_channel(path, &max_value, &h, &w);
    const double scale = 1.0 / max_value;
    std::vector<float> data(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        data[i] = static_cast<float>(values[i] * scale);
    }
    return ProbabilityMap(h, w, std::move(data));
}

Trimap load_trimap(const std::string& path) {
    int max_value = 0, h = 0, w = 0;
    const auto values = load_single_channel(path, &max_value, &h, &w);
    if (max_value != 255) {
        throw IoError("trimap PNG must be 8-bit: " + path);
    }
    std::vector<std::uint8_t> data(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint32_t v = values[i];
        if (v != 0 && v != 128 && v != 255) {
            throw IoError("trimap PNG contains value " + std::to_string(v) +
                          " outside {0,128,255}: " + path);
        }
        data[i] = static_cast<std::uint8_t>(v);
    }
    return Trimap(h, w, std::move(data));
}

void save_trimap(const Trimap& trimap, const std::string& path) {
    std::vector<png_byte> bytes(trimap.data().begin(), trimap.data().end());
    write_png(path, trimap.height(), trimap.width(), 1, 8, bytes);
}

void save_probability(const ProbabilityMap& map, const std::string& path, bool sixteen_bit) {
    if (!sixteen_bit) {
        std::vector<png_byte> bytes(map.data().size());
        for (std::size_t i = 0; i < bytes.size(); ++i) {
            bytes[i] = static_cast<png_byte>(std::lround(map.data()[i] * 255.0));
        }
        write_png(path, map.height(), map.width(), 1, 8, bytes);
    } else {
        std::vector<png_byte> bytes(map.data().size() * 2);
        for (std::size_t i = 0; i < map.data().size(); ++i) {
            const auto v = static_cast<std::uint16_t>(std::lround(map.data()[i] * 65535.0));
            bytes[2 * i] = static_cast<png_byte>(v >> 8);
            bytes[2 * i + 1] = static_cast<png_byte>(v & 0xff);
        }
        write_png(path, map.height(), map.width(), 1, 16, bytes);
    }
}

void save_mask(const BinaryMask& mask, const std::string& path) {
    std::vector<png_byte> bytes(mask.data().size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = mask.data()[i] ? 255 : 0;
    }
    write_png(path, mask.height(), mask.width(), 1, 8, bytes);
}

void save_image(const Image& image, const std::string& path) {
    std::vector<png_byte> bytes(image.data().size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<png_byte>(std::lround(image.data()[i] * 255.0));
    }
    write_png(path, image.height(), image.width(), 3, 8, bytes);
}

} // namespace cgm
