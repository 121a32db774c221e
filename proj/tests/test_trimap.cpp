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

#include "cgm/trimap.hpp"
#include "support/test_util.hpp"

using namespace cgm;

TEST_CASE("threshold pair validation") {
    CHECK_THROWS_AS(ThresholdPair(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdPair(0.9, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdPair(0.0, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdPair(0.1, 1.0), std::invalid_argument);
    const ThresholdPair def;
    CHECK(def.low() == 0.05);
    CHECK(def.high() == 0.95);
}

TEST_CASE("trimap classification: mid band, saturation, boundary equality") {
    const LogitMap zero = LogitMap::constant(1, 1, 0.0f);
    CHECK(generate_trimap(zero).at(0, 0) == Trimap::kUnknown);

    const LogitMap low = LogitMap::constant(1, 1, -40.0f);
    const LogitMap high = LogitMap::constant(1, 1, 40.0f);
    CHECK(generate_trimap(low).at(0, 0) == Trimap::kBackground);
    CHECK(generate_trimap(high).at(0, 0) == Trimap::kForeground);

    // Exact boundary semantics: with thresholds set to the computed sigmoid
    // values, M >= t_high maps to 255 and M <= t_low maps to 0.
    const float p_high = 1.25f;
    const float p_low = -0.75f;
    const ThresholdPair exact(stable_sigmoid(p_low), stable_sigmoid(p_high));
    const LogitMap probe(1, 2, {p_low, p_high});
    const Trimap t = generate_trimap(probe, exact);
    CHECK(t.at(0, 0) == Trimap::kBackground);  // M == t_low -> 0
    CHECK(t.at(0, 1) == Trimap::kForeground);  // M == t_high -> 255
}

TEST_CASE("default high threshold flips exactly where sigmoid crosses 0.95") {
    // Walk one float ulp around ln(19); classification must flip together
    // with the double comparison sigmoid(p) >= 0.95.
    const float p = std::nextafter(static_cast<float>(std::log(19.0)), 10.0f);
    for (float probe : {std::nextafter(p, -10.0f), p, std::nextafter(p, 10.0f)}) {
        const auto tri = generate_trimap(LogitMap::constant(1, 1, probe));
        const bool expect_fg = stable_sigmoid(probe) >= 0.95;
        CHECK((tri.at(0, 0) == Trimap::kForeground) == expect_fg);
    }
}

TEST_CASE("ramp of logits produces three contiguous ordered bands") {
    const int n = 101;
    std::vector<float> data(n);
    for (int i = 0; i < n; ++i) {
        data[i] = static_cast<float>(-5.0 + 10.0 * i / (n - 1));
    }
    const auto tri = generate_trimap(LogitMap(1, n, data));
    int transitions = 0;
    for (int i = 1; i < n; ++i) {
        if (tri.at(0, i) != tri.at(0, i - 1)) ++transitions;
        CHECK(tri.at(0, i) >= tri.at(0, i - 1)); // monotone in the ramp
    }
    CHECK(transitions == 2);
    CHECK(tri.at(0, 0) == Trimap::kBackground);
    CHECK(tri.at(0, n / 2) == Trimap::kUnknown);
    CHECK(tri.at(0, n - 1) == Trimap::kForeground);
}

TEST_CASE("probability-input path classifies like the logit path") {
    cgm::Rng rng(21);
    const auto logits = cgmtest::random_logits(rng, 13, 9, -6.0, 6.0);
    const auto from_logits = generate_trimap(logits);
    const auto from_probs = generate_trimap(sigmoid_map(logits));
    // Stored probabilities are float-rounded, so only count disagreements
    // near the thresholds.
    std::size_t diff = 0;
    for (std::size_t i = 0; i < from_logits.data().size(); ++i) {
        if (from_logits.data()[i] != from_probs.data()[i]) ++diff;
    }
    CHECK(diff == 0);
}

TEST_CASE("region fractions: examples and partition invariant") {
    CHECK(region_fractions(Trimap::constant(4, 4, 128)).unknown == 1.0);
    const Trimap half(1, 2, {0, 255});
    const auto f = region_fractions(half);
    CHECK(f.background == 0.5);
    CHECK(f.foreground == 0.5);
    CHECK(f.unknown == 0.0);

    const Trimap mixed(2, 2, {0, 128, 255, 255});
    const auto g = region_fractions(mixed);
    CHECK(g.background == 0.25);
    CHECK(g.unknown == 0.25);
    CHECK(g.foreground == 0.5);

    cgm::Rng rng(2);
    for (int round = 0; round < 20; ++round) {
        const auto logits = cgmtest::random_logits(rng, 8 + static_cast<int>(rng.uniform_index(24)),
                                                   8 + static_cast<int>(rng.uniform_index(24)));
        const auto fr = region_fractions(generate_trimap(logits));
        CHECK(std::abs(fr.background + fr.unknown + fr.foreground - 1.0) < 1e-9);
    }
}

TEST_CASE("determinism: identical logits give bit-identical trimaps") {
    cgm::Rng rng(33);
    const auto logits = cgmtest::random_logits(rng, 31, 17);
    const auto a = generate_trimap(logits);
    const auto b = generate_trimap(logits);
    for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(a.data()[i] == b.data()[i]);
}

TEST_CASE("band monotonicity: widening the band never shrinks the unknown region") {
    cgm::Rng rng(44);
    const auto bands = ablation_thresholds();
    for (int round = 0; round < 10; ++round) {
        const auto logits = cgmtest::random_logits(rng, 24, 24, -8.0, 8.0);
        std::vector<Trimap> maps;
        for (const auto& th : bands) maps.push_back(generate_trimap(logits, th));
        for (std::size_t b = 1; b < maps.size(); ++b) {
            double prev_unknown = region_fractions(maps[b - 1]).unknown;
            double cur_unknown = region_fractions(maps[b]).unknown;
            CHECK(cur_unknown >= prev_unknown);
            // Pixelwise superset, not only by count.
            for (std::size_t i = 0; i < maps[b].data().size(); ++i) {
                if (maps[b - 1].data()[i] == Trimap::kUnknown) {
                    CHECK(maps[b].data()[i] == Trimap::kUnknown);
                }
            }
        }
    }
}

TEST_CASE("ablation thresholds table") {
    const auto bands = ablation_thresholds();
    CHECK(bands.size() == 7);
    CHECK(bands[kDefaultAblationIndex].low() == 0.05);
    CHECK(bands[kDefaultAblationIndex].high() == 0.95);
    CHECK(bands.front().low() == 0.45);
    CHECK(bands.back().high() == 0.995);
    for (std::size_t i = 1; i < bands.size(); ++i) {
        CHECK(bands[i].low() < bands[i - 1].low());
        CHECK(bands[i].high() > bands[i - 1].high());
    }
}
