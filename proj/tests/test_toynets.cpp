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
#include "cgm/toynets.hpp"
#include "support/fd_check.hpp"
#include "support/test_util.hpp"

using namespace cgm;
using namespace cgmtest;

TEST_CASE("toy base: shape contract and head counts") {
    ToyNetConfig cfg;
    cfg.input_size = 64;
    ToyNet net = build_toy_base(cfg, 7);

    CHECK(net.in_channels == 3);
    CHECK(net.local_heads.size() == 6);
    CHECK(net.global_heads.size() == 5);
    CHECK(net.token_heads.size() == 4);
    CHECK(net.local_heads.front() == net.final_logits);

    const Image img = Image::constant(64, 64, 0.4f, 0.5f, 0.6f);
    const LogitMap main = predict_base(net, img);
    CHECK(main.height() == 64);
    CHECK(main.width() == 64);

    // Head scales are dyadic and never smaller than 16.
    for (const auto& heads : {net.local_heads, net.global_heads, net.token_heads}) {
        for (NodeId id : heads) {
            const Tensor& v = net.graph.value(id);
            CHECK(v.channels() == 1);
            CHECK(v.height() >= 16);
            CHECK((64 % v.height()) == 0);
        }
    }
}

TEST_CASE("toy refiner: four input channels, single head") {
    ToyNetConfig cfg;
    ToyNet refiner = build_toy_refiner(cfg, 9);
    CHECK(refiner.in_channels == 4);
    CHECK(refiner.local_heads.size() == 1);
    CHECK(refiner.global_heads.empty());
    CHECK(refiner.token_heads.empty());

    const Image img = Image::constant(64, 64, 0.2f, 0.2f, 0.2f);
    const Trimap trimap = Trimap::constant(64, 64, 128);
    const LogitMap out = predict_refiner(refiner, img, trimap);
    CHECK(out.height() == 64);

    ToyNet base = build_toy_base(cfg, 9);
    CHECK_THROWS_AS(predict_refiner(base, img, trimap), std::invalid_argument);
    CHECK_THROWS_AS(predict_base(refiner, img), std::invalid_argument);
}

TEST_CASE("seeded init is reproducible and seed-sensitive") {
    ToyNetConfig cfg;
    ToyNet a = build_toy_base(cfg, 42);
    ToyNet b = build_toy_base(cfg, 42);
    ToyNet c = build_toy_base(cfg, 43);

    const auto pa = a.graph.export_params();
    const auto pb = b.graph.export_params();
    const auto pc = c.graph.export_params();
    REQUIRE(pa.size() == pb.size());

    bool any_diff_seed = false;
    for (const auto& [name, tensor] : pa) {
        const auto& same = pb.at(name);
        for (std::size_t i = 0; i < tensor.data.size(); ++i) {
            CHECK(tensor.data[i] == same.data[i]);
        }
        const auto& other = pc.at(name);
        for (std::size_t i = 0; i < tensor.data.size(); ++i) {
            if (tensor.data[i] != other.data[i]) any_diff_seed = true;
        }
    }
    CHECK(any_diff_seed);
}

TEST_CASE("forward at init never produces NaN on unit-range inputs") {
    cgm::Rng rng(51);
    ToyNetConfig cfg;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        ToyNet net = build_toy_base(cfg, seed);
        std::vector<float> data(static_cast<std::size_t>(64) * 64 * 3);
        for (float& v : data) v = static_cast<float>(rng.uniform());
        predict_base(net, Image(64, 64, std::move(data)));
        for (NodeId id : net.local_heads) {
            for (float v : net.graph.value(id).data) CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("config validation") {
    ToyNetConfig bad;
    bad.depth = 3;
    bad.input_size = 64; // 64 / 8 = 8 < 16: head outputs could not fit the SSIM window
    CHECK_THROWS_AS(build_toy_base(bad, 1), std::invalid_argument);

    bad.depth = 2;
    bad.input_size = 50; // not divisible by 4
    CHECK_THROWS_AS(build_toy_base(bad, 1), std::invalid_argument);

    bad.input_size = 64;
    bad.channels = 64;
    CHECK_THROWS_AS(build_toy_base(bad, 1), std::invalid_argument);

    ToyNetConfig deep;
    deep.depth = 3;
    deep.input_size = 128;
    CHECK_NOTHROW(build_toy_base(deep, 1));
}

TEST_CASE("collect_multi_scale pairs each head with a matching-resolution GT") {
    cgm::Rng rng(53);
    ToyNetConfig cfg;
    ToyNet net = build_toy_base(cfg, 5);
    const auto gt = random_blob_mask(rng, 64, 64);
    predict_base(net, Image::constant(64, 64, 0.5f, 0.5f, 0.5f));
    const MultiScaleOutputs ms = collect_multi_scale(net, gt);
    REQUIRE(ms.local.size() == 6);
    REQUIRE(ms.global.size() == 5);
    REQUIRE(ms.token.size() == 4);
    for (const auto& list : {ms.local, ms.global, ms.token}) {
        for (const auto& pair : list) {
            CHECK(pair.pred.height() == pair.gt.height());
            CHECK(pair.pred.width() == pair.gt.width());
        }
    }
    CHECK(ms.local[0].gt.height() == 64);
    // The combined loss accepts the collected pairs directly.
    CHECK_NOTHROW(combined_loss(ms));
}

TEST_CASE("frozen net + structure loss: parameter gradients match finite differences") {
    cgm::Rng rng(57);
    ToyNetConfig cfg;
    cfg.channels = 4;
    cfg.depth = 1;
    cfg.input_size = 32;
    ToyNet net = build_toy_base(cfg, 3);

    std::vector<float> img_data(static_cast<std::size_t>(32) * 32 * 3);
    for (float& v : img_data) v = static_cast<float>(rng.uniform());
    const Image img(32, 32, std::move(img_data));
    const auto gt = random_blob_mask(rng, 32, 32);

    auto loss_value = [&]() {
        net.graph.forward();
        const LogitMap logits = net.graph.value(net.final_logits).to_logits();
        return structure_loss(logits, gt).total;
    };

    net.graph.feed(net.input, Tensor::from_image(img));
    net.graph.forward();
    const LogitMap logits = net.graph.value(net.final_logits).to_logits();
    const LossBreakdown breakdown = structure_loss(logits, gt);
    net.graph.zero_grad();
    net.graph.backward({{net.final_logits, Tensor::from_logits(breakdown.grad)}});

    // Probe a few parameters across the net.
    for (const char* name : {"enc0.w", "dec0.w", "head_final.w", "enc0.gamma"}) {
        const NodeId id = net.graph.param_id(name);
        const Tensor analytic = net.graph.grad(id);
        std::vector<float>& buffer = net.graph.mutable_value(id).data;
        for (int probe = 0; probe < 4; ++probe) {
            const std::size_t idx = rng.uniform_index(buffer.size());
            const double fd = central_diff(buffer, idx, 1e-2, loss_value);
            CHECK(rel_error(analytic.data[idx], fd, 3e-2) < 1e-3);
        }
        net.graph.forward();
    }
}
