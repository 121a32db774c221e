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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "cgm/errors.hpp"
#include "cgm/image.hpp"
#include "cgm/png_io.hpp"
#include "support/test_util.hpp"

using namespace cgm;
using cgmtest::TempDir;

TEST_CASE("type invariants are enforced at construction") {
    CHECK_THROWS_AS(LogitMap(1, 1, {std::numeric_limits<float>::quiet_NaN()}), std::invalid_argument);
    CHECK_THROWS_AS(LogitMap(1, 1, {std::numeric_limits<float>::infinity()}), std::invalid_argument);
    CHECK_THROWS_AS(ProbabilityMap(1, 1, {1.5f}), std::invalid_argument);
    CHECK_THROWS_AS(ProbabilityMap(1, 1, {-0.1f}), std::invalid_argument);
    CHECK_THROWS_AS(BinaryMask(1, 1, {2}), std::invalid_argument);
    CHECK_THROWS_AS(Trimap(1, 1, {7}), std::invalid_argument);
    CHECK_THROWS_AS(LogitMap(2, 2, {0.0f}), std::invalid_argument);      // wrong length
    CHECK_THROWS_AS(Image(0, 3, {}), std::invalid_argument);             // empty dims
    CHECK_THROWS_AS(Image(1, 1, {0.2f, 0.2f, 1.7f}), std::invalid_argument);
    CHECK_NOTHROW(Trimap(1, 3, {0, 128, 255}));
}

TEST_CASE("stable sigmoid: midpoint, saturation, algebraic value") {
    CHECK(stable_sigmoid(0.0) == 0.5);
    CHECK(stable_sigmoid(40.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(stable_sigmoid(-40.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::isfinite(stable_sigmoid(700.0)));
    CHECK(std::isfinite(stable_sigmoid(-700.0)));
    // sigmoid(ln 19) = 19/20
    CHECK(stable_sigmoid(std::log(19.0)) == doctest::Approx(0.95).epsilon(1e-14));
}

TEST_CASE("sigmoid_map is monotone per pixel") {
    cgm::Rng rng(11);
    auto logits = cgmtest::random_logits(rng, 8, 8, -30.0, 30.0);
    const auto probs = sigmoid_map(logits);
    std::vector<float> sorted(logits.data().begin(), logits.data().end());
    std::sort(sorted.begin(), sorted.end());
    float prev = -1.0f;
    for (float x : sorted) {
        const float s = static_cast<float>(stable_sigmoid(x));
        CHECK(s >= prev);
        prev = s;
    }
    for (std::size_t i = 0; i < probs.data().size(); ++i) {
        CHECK(probs.data()[i] == static_cast<float>(stable_sigmoid(logits.data()[i])));
    }
}

TEST_CASE("bilinear resize: identity is bitwise, constants stay constant") {
    cgm::Rng rng(3);
    const auto map = cgmtest::random_probs(rng, 5, 7);
    const auto same = resize_bilinear(map, 5, 7);
    for (std::size_t i = 0; i < map.data().size(); ++i) {
        CHECK(map.data()[i] == same.data()[i]);
    }

    const auto flat = ProbabilityMap::constant(4, 4, 0.37f);
    for (auto [h, w] : {std::pair{1, 1}, {3, 9}, {16, 2}, {11, 11}}) {
        const auto r = resize_bilinear(flat, h, w);
        for (float v : r.data()) CHECK(v == 0.37f);
    }

    const auto img = Image::constant(3, 3, 0.1f, 0.5f, 0.9f);
    const auto big = resize_bilinear(img, 7, 5);
    for (int y = 0; y < 7; ++y) {
        for (int x = 0; x < 5; ++x) {
            CHECK(big.at(y, x, 0) == doctest::Approx(0.1).epsilon(1e-6));
            CHECK(big.at(y, x, 2) == doctest::Approx(0.9).epsilon(1e-6));
        }
    }
}

TEST_CASE("bilinear upscale of a [[0,1],[0,1]] map interpolates monotonically") {
    const ProbabilityMap map(2, 2, {0.0f, 1.0f, 0.0f, 1.0f});
    const auto wide = resize_bilinear(map, 2, 4);
    // Pixel centers at src_x = {-0.25, 0.25, 0.75, 1.25} -> clamped weights
    // give 0, 0.25, 0.75, 1 per row.
    for (int y = 0; y < 2; ++y) {
        CHECK(wide.at(y, 0) == doctest::Approx(0.0));
        CHECK(wide.at(y, 1) == doctest::Approx(0.25));
        CHECK(wide.at(y, 2) == doctest::Approx(0.75));
        CHECK(wide.at(y, 3) == doctest::Approx(1.0));
        for (int x = 1; x < 4; ++x) CHECK(wide.at(y, x) >= wide.at(y, x - 1));
    }
}

TEST_CASE("nearest resize preserves the alphabet") {
    const Trimap tri(2, 2, {0, 128, 255, 128});
    const auto up = resize_nearest(tri, 5, 9);
    for (auto v : up.data()) {
        CHECK((v == 0 || v == 128 || v == 255));
    }
    const auto one = resize_nearest(Trimap::constant(1, 1, 128), 4, 4);
    for (auto v : one.data()) CHECK(v == 128);

    const BinaryMask mask(2, 2, {0, 1, 1, 0});
    const auto same = resize_nearest(mask, 2, 2);
    for (std::size_t i = 0; i < mask.data().size(); ++i) CHECK(mask.data()[i] == same.data()[i]);

    CHECK_THROWS_AS(resize_nearest(mask, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(resize_bilinear(ProbabilityMap::constant(2, 2, 0.5f), 2, 0),
                    std::invalid_argument);
}

TEST_CASE("PNG image loading: scaling, grayscale replication, alpha drop") {
    TempDir dir("png");

    SUBCASE("white RGB image loads as all ones") {
        save_image(Image::constant(2, 2, 1.0f, 1.0f, 1.0f), dir.file("white.png"));
        const auto img = load_image(dir.file("white.png"));
        for (float v : img.data()) CHECK(v == 1.0f);
    }

    SUBCASE("grayscale byte 0 replicates to three zero channels") {
        save_probability(ProbabilityMap::constant(1, 1, 0.0f), dir.file("black.png"));
        const auto img = load_image(dir.file("black.png"));
        CHECK(img.height() == 1);
        CHECK(img.width() == 1);
        for (int c = 0; c < 3; ++c) CHECK(img.at(0, 0, c) == 0.0f);
    }

    SUBCASE("byte 128 scales to 128/255") {
        const float v128 = static_cast<float>(128.0 / 255.0);
        save_probability(ProbabilityMap::constant(3, 2, v128), dir.file("mid.png"));
        const auto img = load_image(dir.file("mid.png"));
        for (float v : img.data()) {
            CHECK(v == doctest::Approx(128.0 / 255.0).epsilon(1e-6)); // float storage grain
        }
    }

    SUBCASE("16-bit probabilities round-trip at higher resolution") {
        const float fine = 12345.0f / 65535.0f;
        save_probability(ProbabilityMap::constant(2, 2, fine), dir.file("fine.png"), true);
        const auto q = load_probability(dir.file("fine.png"));
        for (float v : q.data()) CHECK(v == doctest::Approx(fine).epsilon(1e-9));
    }
}

TEST_CASE("PNG mask threshold and rejection rules") {
    TempDir dir("mask");

    SUBCASE("all-255 -> ones, all-0 -> zeros") {
        save_mask(BinaryMask::constant(2, 2, 1), dir.file("ones.png"));
        const auto ones = load_mask(dir.file("ones.png"));
        CHECK(ones.foreground_count() == 4);
        save_mask(BinaryMask::constant(2, 2, 0), dir.file("zeros.png"));
        CHECK(load_mask(dir.file("zeros.png")).foreground_count() == 0);
    }

    SUBCASE("byte 127 -> 0, byte 128 -> 1") {
        save_probability(ProbabilityMap::constant(1, 1, 127.0f / 255.0f), dir.file("b127.png"));
        save_probability(ProbabilityMap::constant(1, 1, 128.0f / 255.0f), dir.file("b128.png"));
        CHECK(load_mask(dir.file("b127.png")).at(0, 0) == 0);
        CHECK(load_mask(dir.file("b128.png")).at(0, 0) == 1);
    }

    SUBCASE("16-bit threshold sits at 128 * 257") {
        // 32895/65535 is just below 128/255 of full scale, 32896 meets it.
        save_probability(ProbabilityMap::constant(1, 1, 32895.0f / 65535.0f), dir.file("lo16.png"),
                         true);
        save_probability(ProbabilityMap::constant(1, 1, 32896.0f / 65535.0f), dir.file("hi16.png"),
                         true);
        CHECK(load_mask(dir.file("lo16.png")).at(0, 0) == 0);
        CHECK(load_mask(dir.file("hi16.png")).at(0, 0) == 1);
    }

    SUBCASE("unequal RGB channels are rejected") {
        save_image(Image::constant(2, 2, 0.9f, 0.1f, 0.9f), dir.file("rgb.png"));
        CHECK_THROWS_AS(load_mask(dir.file("rgb.png")), IoError);
        // Equal channels pass.
        save_image(Image::constant(2, 2, 0.9f, 0.9f, 0.9f), dir.file("gray3.png"));
        CHECK(load_mask(dir.file("gray3.png")).foreground_count() == 4);
    }
}

TEST_CASE("trimap PNG round-trip is lossless") {
    TempDir dir("trimap_io");
    cgm::Rng rng(5);
    for (int round = 0; round < 4; ++round) {
        const int h = 1 + static_cast<int>(rng.uniform_index(16));
        const int w = 1 + static_cast<int>(rng.uniform_index(16));
        std::vector<std::uint8_t> data(static_cast<std::size_t>(h) * w);
        for (auto& v : data) {
            const auto r = rng.uniform_index(3);
            v = r == 0 ? 0 : (r == 1 ? 128 : 255);
        }
        const Trimap t(h, w, data);
        save_trimap(t, dir.file("t.png"));
        const auto back = load_trimap(dir.file("t.png"));
        REQUIRE(back.height() == h);
        REQUIRE(back.width() == w);
        for (std::size_t i = 0; i < data.size(); ++i) CHECK(back.data()[i] == data[i]);
    }

    // A 1x1 value-128 trimap stores byte 128.
    save_trimap(Trimap::constant(1, 1, 128), dir.file("mid.png"));
    CHECK(load_trimap(dir.file("mid.png")).at(0, 0) == 128);

    // Non-trimap bytes are rejected on load.
    save_probability(ProbabilityMap::constant(1, 1, 10.0f / 255.0f), dir.file("bad.png"));
    CHECK_THROWS_AS(load_trimap(dir.file("bad.png")), IoError);
}

TEST_CASE("PNG error reporting carries path and cause") {
    TempDir dir("png_err");
    CHECK_THROWS_AS(load_image(dir.file("missing.png")), IoError);

    std::ofstream garbage(dir.file("garbage.png"), std::ios::binary);
    garbage << "this is not a png";
    garbage.close();
    CHECK_THROWS_AS(load_image(dir.file("garbage.png")), IoError);

    // Truncated PNG: valid signature, mangled body.
    save_mask(BinaryMask::constant(8, 8, 1), dir.file("trunc.png"));
    {
        std::ifstream in(dir.file("trunc.png"), std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
        bytes.resize(bytes.size() / 2);
        std::ofstream out(dir.file("trunc.png"), std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(load_image(dir.file("trunc.png")), IoError);

    CHECK_THROWS_AS(save_trimap(Trimap::constant(1, 1, 0), dir.str() + "/no_dir/x.png"), IoError);
}

TEST_CASE("binarize thresholds at >= in double") {
    const ProbabilityMap q(1, 3, {0.49f, 0.5f, 0.51f});
    const auto m = binarize(q, 0.5);
    CHECK(m.at(0, 0) == 0);
    CHECK(m.at(0, 1) == 1);
    CHECK(m.at(0, 2) == 1);
}
