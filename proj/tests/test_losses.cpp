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

#include "cgm/losses.hpp"
#include "support/test_util.hpp"

using namespace cgm;
using cgmtest::central_diff;
using cgmtest::rel_error;

namespace {

// Straight 31x31 replicate-padded mean pool, quadratic cost.
double naive_pool31(const BinaryMask& y, int cy, int cx) {
    double sum = 0.0;
    for (int dy = -15; dy <= 15; ++dy) {
        for (int dx = -15; dx <= 15; ++dx) {
            const int yy = std::clamp(cy + dy, 0, y.height() - 1);
            const int xx = std::clamp(cx + dx, 0, y.width() - 1);
            sum += y.at(yy, xx);
        }
    }
    return sum / 961.0;
}

BinaryMask half_plane(int h, int w, int split_col) {
    std::vector<std::uint8_t> data(static_cast<std::size_t>(h) * w, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = split_col; x < w; ++x) data[static_cast<std::size_t>(y) * w + x] = 1;
    }
    return BinaryMask(h, w, std::move(data));
}

} // namespace

TEST_CASE("boundary weight map: constants, range, far-from-edge behavior") {
    for (auto value : {0, 1}) {
        const auto w = boundary_weight_map(BinaryMask::constant(20, 20, static_cast<std::uint8_t>(value)));
        for (float v : w.data) CHECK(v == 1.0f);
    }

    const auto mask = half_plane(64, 64, 32);
    const auto w = boundary_weight_map(mask);
    for (float v : w.data) {
        CHECK(v >= 1.0f);
        CHECK(v <= 6.0f);
    }
    // Pixels farther than 15 columns from the boundary see a constant window.
    CHECK(w.at(32, 5) == 1.0f);
    CHECK(w.at(32, 60) == 1.0f);
    // Weight peaks at the boundary and decays with distance.
    CHECK(w.at(32, 32) > w.at(32, 40));
    CHECK(w.at(32, 40) > w.at(32, 47));
}

TEST_CASE("boundary weight map matches the naive box filter") {
    cgm::Rng rng(7);
    const auto mask = cgmtest::random_blob_mask(rng, 40, 28);
    const auto w = boundary_weight_map(mask);
    for (int round = 0; round < 200; ++round) {
        const int y = static_cast<int>(rng.uniform_index(40));
        const int x = static_cast<int>(rng.uniform_index(28));
        const double expected = 1.0 + 5.0 * std::abs(naive_pool31(mask, y, x) - mask.at(y, x));
        CHECK(w.at(y, x) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("wbce: saturated-correct, maximal uncertainty, shape errors") {
    const auto y1 = BinaryMask::constant(8, 8, 1);
    const auto w = boundary_weight_map(y1);
    const auto saturated = wbce(LogitMap::constant(8, 8, 40.0f), y1, w);
    CHECK(saturated.value < 1e-12);
    for (float g : saturated.grad.data()) CHECK(std::abs(g) < 1e-12);

    cgm::Rng rng(17);
    const auto y = cgmtest::random_mask(rng, 8, 8);
    const auto uniform = WeightMap::uniform(8, 8);
    const auto mid = wbce(LogitMap::constant(8, 8, 0.0f), y, uniform);
    CHECK(mid.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(wbce(LogitMap::constant(4, 4, 0.0f), y1, w), std::invalid_argument);
}

TEST_CASE("wbce gradient matches central finite differences") {
    cgm::Rng rng(23);
    for (int round = 0; round < 8; ++round) {
        const int h = 4 + static_cast<int>(rng.uniform_index(29));
        const int w_ = 4 + static_cast<int>(rng.uniform_index(29));
        const auto y = cgmtest::random_blob_mask(rng, h, w_);
        const auto wmap = boundary_weight_map(y);
        std::vector<float> logits(static_cast<std::size_t>(h) * w_);
        for (float& v : logits) v = static_cast<float>(rng.uniform(-3.0, 3.0));

        const auto analytic = wbce(LogitMap(h, w_, logits), y, wmap);
        for (int probe = 0; probe < 10; ++probe) {
            const std::size_t idx = rng.uniform_index(logits.size());
            const double fd = central_diff(logits, idx, 1e-3, [&] {
                return wbce(LogitMap(h, w_, logits), y, wmap).value;
            });
            CHECK(rel_error(analytic.grad.data()[idx], fd, 1e-7) < 1e-4);
        }
    }
}

TEST_CASE("wiou: identical binary maps, complement, epsilon behavior") {
    cgm::Rng rng(31);
    const auto y = cgmtest::random_blob_mask(rng, 32, 32);
    REQUIRE(y.foreground_count() > 0);
    const auto w = boundary_weight_map(y);

    const auto q_equal = cgmtest::mask_as_prob(y);
    CHECK(wiou(q_equal, y, w).value == 0.0); // intersection == union exactly
    CHECK(wiou(q_equal, y, w).value < 1e-3);

    std::vector<float> inv(q_equal.data().begin(), q_equal.data().end());
    for (float& v : inv) v = 1.0f - v;
    const auto flipped = wiou(ProbabilityMap(32, 32, std::move(inv)), y, w);
    CHECK(flipped.value > 0.99);
}

TEST_CASE("wiou gradient matches finite differences through the sigmoid chain") {
    cgm::Rng rng(37);
    for (int round = 0; round < 8; ++round) {
        const int h = 4 + static_cast<int>(rng.uniform_index(29));
        const int w_ = 4 + static_cast<int>(rng.uniform_index(29));
        const auto y = cgmtest::random_blob_mask(rng, h, w_);
        const auto wmap = boundary_weight_map(y);
        std::vector<float> probs(static_cast<std::size_t>(h) * w_);
        for (float& v : probs) v = static_cast<float>(rng.uniform(0.05, 0.95));

        const auto analytic = wiou(ProbabilityMap(h, w_, probs), y, wmap);
        for (int probe = 0; probe < 10; ++probe) {
            const std::size_t idx = rng.uniform_index(probs.size());
            const double q = probs[idx];
            const double fd_q = central_diff(probs, idx, 1e-3, [&] {
                return wiou(ProbabilityMap(h, w_, probs), y, wmap).value;
            });
            const double fd_logit = fd_q * q * (1.0 - q); // same chain factor as the analytic path
            CHECK(rel_error(analytic.grad.data()[idx], fd_logit, 1e-9) < 1e-4);
        }
    }
}

TEST_CASE("ssim loss: self-similarity, anti-correlation, window precondition") {
    cgm::Rng rng(41);
    const auto y = cgmtest::random_blob_mask(rng, 24, 24);
    const auto why = cgmtest::mask_as_prob(y);
    CHECK(ssim_loss(why, y).value == doctest::Approx(0.0).epsilon(1e-12));

    const auto plane = half_plane(32, 32, 16);
    std::vector<float> inv(static_cast<std::size_t>(32) * 32);
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0f - plane.data()[i];
    const auto anti = ssim_loss(ProbabilityMap(32, 32, std::move(inv)), plane);
    CHECK(anti.value > 1.0);  // negative SSIM in boundary windows
    CHECK(anti.value <= 2.0);

    CHECK_THROWS_AS(ssim_loss(ProbabilityMap::constant(10, 32, 0.5f), half_plane(10, 32, 16)),
                    std::invalid_argument);
}

TEST_CASE("ssim gradient matches finite differences") {
    cgm::Rng rng(43);
    for (int round = 0; round < 6; ++round) {
        const int h = 12 + static_cast<int>(rng.uniform_index(21));
        const int w_ = 12 + static_cast<int>(rng.uniform_index(21));
        const auto y = cgmtest::random_blob_mask(rng, h, w_);
        std::vector<float> probs(static_cast<std::size_t>(h) * w_);
        for (float& v : probs) v = static_cast<float>(rng.uniform(0.05, 0.95));

        const auto analytic = ssim_loss(ProbabilityMap(h, w_, probs), y);
        for (int probe = 0; probe < 10; ++probe) {
            const std::size_t idx = rng.uniform_index(probs.size());
            const double q = probs[idx];
            const double fd_q = central_diff(probs, idx, 1e-3, [&] {
                return ssim_loss(ProbabilityMap(h, w_, probs), y).value;
            });
            const double fd_logit = fd_q * q * (1.0 - q);
            CHECK(rel_error(analytic.grad.data()[idx], fd_logit, 1e-8) < 1e-3);
        }
    }
}

TEST_CASE("structure loss: definition audit and default weights") {
    cgm::Rng rng(47);
    const auto y = cgmtest::random_blob_mask(rng, 20, 20);
    const auto p = cgmtest::random_logits(rng, 20, 20);

    const LossWeights defaults;
    CHECK(defaults.bce == 4.0);
    CHECK(defaults.iou == 1.0);
    CHECK(defaults.ssim == 2.0);

    const auto breakdown = structure_loss(p, y);
    const double recombined = 4.0 * breakdown.wbce + 1.0 * breakdown.wiou + 2.0 * breakdown.ssim;
    CHECK(std::abs(breakdown.total - recombined) < 1e-9);

    // Term values equal standalone evaluations.
    const auto w = boundary_weight_map(y);
    const auto q = sigmoid_map(p);
    CHECK(breakdown.wbce == wbce(p, y, w).value);
    CHECK(breakdown.wiou == wiou(q, y, w).value);
    CHECK(breakdown.ssim == ssim_loss(q, y).value);
}

TEST_CASE("structure loss: perfect saturated prediction scores near zero") {
    cgm::Rng rng(53);
    const auto y = cgmtest::random_blob_mask(rng, 24, 24);
    std::vector<float> logits(y.data().size());
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = y.data()[i] ? 40.0f : -40.0f;
    const auto breakdown = structure_loss(LogitMap(24, 24, logits), y);
    CHECK(breakdown.total < 0.01);
}

TEST_CASE("structure loss: any single flipped pixel strictly increases the total") {
    cgm::Rng rng(59);
    const auto y = cgmtest::random_blob_mask(rng, 16, 16);
    std::vector<float> logits(y.data().size());
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = y.data()[i] ? 12.0f : -12.0f;
    const double baseline = structure_loss(LogitMap(16, 16, logits), y).total;
    for (int round = 0; round < 10; ++round) {
        const std::size_t idx = rng.uniform_index(logits.size());
        std::vector<float> flipped = logits;
        flipped[idx] = -flipped[idx];
        CHECK(structure_loss(LogitMap(16, 16, flipped), y).total > baseline);
    }
}

TEST_CASE("structure loss gradient agrees with finite differences end to end") {
    cgm::Rng rng(61);
    const int h = 16, w_ = 16;
    const auto y = cgmtest::random_blob_mask(rng, h, w_);
    std::vector<float> logits(static_cast<std::size_t>(h) * w_);
    for (float& v : logits) v = static_cast<float>(rng.uniform(-3.0, 3.0));
    const auto breakdown = structure_loss(LogitMap(h, w_, logits), y);
    for (int probe = 0; probe < 10; ++probe) {
        const std::size_t idx = rng.uniform_index(logits.size());
        const double fd = central_diff(logits, idx, 1e-3, [&] {
            return structure_loss(LogitMap(h, w_, logits), y).total;
        });
        CHECK(rel_error(breakdown.grad.data()[idx], fd, 1e-6) < 1e-3);
    }
}

TEST_CASE("combined loss: degenerate configuration, coefficient audit, bounds") {
    cgm::Rng rng(67);
    const auto y = cgmtest::random_blob_mask(rng, 16, 16);
    const auto p = cgmtest::random_logits(rng, 16, 16);

    MultiScaleOutputs single;
    single.local.push_back(ScalePair{p, y});
    const auto one = combined_loss(single);
    CHECK(one.value == structure_loss(p, y).total);

    CHECK_THROWS_AS(combined_loss(MultiScaleOutputs{}), std::invalid_argument);

    // Default 6/5/4 scale counts live in the named constants.
    CHECK(kDefaultLocalScales == 6);
    CHECK(kDefaultGlobalScales == 5);
    CHECK(kDefaultTokenScales == 4);

    MultiScaleOutputs ms;
    for (int i = 0; i < 3; ++i) ms.local.push_back(ScalePair{cgmtest::random_logits(rng, 16, 16), y});
    for (int i = 0; i < 2; ++i) ms.global.push_back(ScalePair{cgmtest::random_logits(rng, 16, 16), y});
    for (int i = 0; i < 2; ++i) ms.token.push_back(ScalePair{cgmtest::random_logits(rng, 16, 16), y});

    const auto full = combined_loss(ms);
    CHECK(full.value == 0.3 * full.global_sum + 0.3 * full.token_sum + 1.0 * full.local_sum);

    // Coefficients (0,0,1) return exactly the local sum.
    const auto local_only = combined_loss(ms, LossWeights{}, CombinedCoefficients{0.0, 0.0, 1.0});
    CHECK(local_only.value == local_only.local_sum);
    CHECK(local_only.value == full.local_sum);

    // Gradients scale by the coefficients: global maps at 0.3.
    const auto g_structure = structure_loss(ms.global[0].pred, ms.global[0].gt);
    for (std::size_t i = 0; i < g_structure.grad.data().size(); ++i) {
        CHECK(full.global_grads[0].data()[i] ==
              doctest::Approx(0.3 * g_structure.grad.data()[i]).epsilon(1e-6));
    }
}

TEST_CASE("combined loss: all-perfect maps stay under the budget") {
    cgm::Rng rng(71);
    const auto y = cgmtest::random_blob_mask(rng, 32, 32);
    auto perfect = [&](int h, int w_) {
        const auto scaled = downsample_mask(y, h, w_);
        std::vector<float> logits(scaled.data().size());
        for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = scaled.data()[i] ? 40.0f : -40.0f;
        return ScalePair{LogitMap(h, w_, std::move(logits)), scaled};
    };

    MultiScaleOutputs ms;
    const int scales[3] = {32, 16, 16};
    for (int i = 0; i < kDefaultLocalScales; ++i) {
        const int s = scales[i % 3];
        ms.local.push_back(perfect(s, s));
    }
    for (int i = 0; i < kDefaultGlobalScales; ++i) {
        const int s = scales[i % 3];
        ms.global.push_back(perfect(s, s));
    }
    for (int i = 0; i < kDefaultTokenScales; ++i) {
        const int s = scales[i % 3];
        ms.token.push_back(perfect(s, s));
    }
    CHECK(combined_loss(ms).value < 0.15);
}

TEST_CASE("downsample_mask rebinarizes at 0.5 and keeps the alphabet") {
    cgm::Rng rng(73);
    const auto y = cgmtest::random_blob_mask(rng, 32, 32);
    const auto half = downsample_mask(y, 16, 16);
    CHECK(half.height() == 16);
    for (auto v : half.data()) CHECK((v == 0 || v == 1));
    // A solid half-plane survives the downsample as a half-plane.
    const auto plane = half_plane(32, 32, 16);
    const auto small = downsample_mask(plane, 16, 16);
    for (int y_ = 0; y_ < 16; ++y_) {
        CHECK(small.at(y_, 0) == 0);
        CHECK(small.at(y_, 15) == 1);
    }
}
