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

#include "cgm/toynets.hpp"

#include <stdexcept>
#include <string>

namespace cgm {

namespace {

void validate_config(const ToyNetConfig& cfg) {
    if (cfg.channels < 1 || cfg.channels > 32) {
        throw std::invalid_argument("ToyNetConfig: channels must be in [1, 32]");
    }
    if (cfg.depth < 1 || cfg.depth > 3) {
        throw std::invalid_argument("ToyNetConfig: depth must be in [1, 3]");
    }
    const int stride = 1 << cfg.depth;
    if (cfg.input_size % stride != 0) {
        throw std::invalid_argument("ToyNetConfig: input_size must be divisible by 2^depth");
    }
    if (cfg.input_size / stride < 16) {
        throw std::invalid_argument(
            "ToyNetConfig: smallest scale must be >= 16 (head outputs feed an 11x11 window)");
    }
}

NodeId conv_block(Graph& g, NodeId x, int cin, int cout, const std::string& name, Rng& rng) {
    const NodeId w = g.param(name + ".w", {cout, cin, 3, 3});
    init_conv_weight(g.mutable_value(w), rng);
    const NodeId b = g.param(name + ".b", {cout});
    const NodeId gamma = g.param(name + ".gamma", {cout});
    for (float& v : g.mutable_value(gamma).data) v = 1.0f;
    const NodeId beta = g.param(name + ".beta", {cout});
    return g.gelu(g.instance_norm(g.conv2d(x, w, b), gamma, beta));
}

NodeId head1x1(Graph& g, NodeId x, int cin, const std::string& name, Rng& rng) {
    const NodeId w = g.param(name + ".w", {1, cin, 1, 1});
    init_conv_weight(g.mutable_value(w), rng);
    const NodeId b = g.param(name + ".b", {1});
    return g.conv2d(x, w, b);
}

struct Backbone {
    NodeId input;
    std::vector<NodeId> features;      // decoder features, full scale first
    std::vector<int> feature_channels;
};

Backbone build_backbone(Graph& g, const ToyNetConfig& cfg, int in_channels, Rng& rng) {
    Backbone bb;
    bb.input = g.input({in_channels, cfg.input_size, cfg.input_size});

    std::vector<NodeId> enc(cfg.depth);
    std::vector<int> enc_ch(cfg.depth);
    NodeId x = bb.input;
    int ch_in = in_channels;
    for (int s = 0; s < cfg.depth; ++s) {
        const int ch = cfg.channels << s;
        if (s > 0) x = g.avg_pool2(x);
        x = conv_block(g, x, ch_in, ch, "enc" + std::to_string(s), rng);
        enc[s] = x;
        enc_ch[s] = ch;
        ch_in = ch;
    }

    const int bott_ch = cfg.channels << cfg.depth;
    NodeId bott = conv_block(g, g.avg_pool2(x), ch_in, bott_ch, "bott", rng);

    std::vector<NodeId> dec(cfg.depth);
    NodeId up = bott;
    int up_ch = bott_ch;
    for (int s = cfg.depth - 1; s >= 0; --s) {
        const NodeId merged = g.concat(g.upsample2(up), enc[s]);
        const int ch = enc_ch[s];
        up = conv_block(g, merged, up_ch + enc_ch[s], ch, "dec" + std::to_string(s), rng);
        dec[s] = up;
        up_ch = ch;
    }

    // Full scale first, then coarser decoder stages, then the bottleneck.
    for (int s = 0; s < cfg.depth; ++s) {
        bb.features.push_back(dec[s]);
        bb.feature_channels.push_back(enc_ch[s]);
    }
    bb.features.push_back(bott);
    bb.feature_channels.push_back(bott_ch);
    return bb;
}

} // namespace

ToyNet build_toy_base(const ToyNetConfig& cfg, std::uint64_t seed) {
    validate_config(cfg);
    Rng rng(seed);
    ToyNet net;
    net.config = cfg;
    net.in_channels = 3;

    const Backbone bb = build_backbone(net.graph, cfg, 3, rng);
    net.input = bb.input;
    net.final_logits = head1x1(net.graph, bb.features[0], bb.feature_channels[0], "head_final", rng);

    const int nf = static_cast<int>(bb.features.size());
    net.local_heads.push_back(net.final_logits);
    for (int i = 1; i < kDefaultLocalScales; ++i) {
        const int f = (i - 1) % nf;
        net.local_heads.push_back(head1x1(net.graph, bb.features[f], bb.feature_channels[f],
                                          "head_local" + std::to_string(i), rng));
    }
    for (int i = 0; i < kDefaultGlobalScales; ++i) {
        const int f = (i + 1) % nf;
        net.global_heads.push_back(head1x1(net.graph, bb.features[f], bb.feature_channels[f],
                                           "head_global" + std::to_string(i), rng));
    }
    for (int i = 0; i < kDefaultTokenScales; ++i) {
        const int f = (i + 2) % nf;
        net.token_heads.push_back(head1x1(net.graph, bb.features[f], bb.feature_channels[f],
                                          "head_token" + std::to_string(i), rng));
    }
    return net;
}

ToyNet build_toy_refiner(const ToyNetConfig& cfg, std::uint64_t seed) {
    validate_config(cfg);
    Rng rng(seed);
    ToyNet net;
    net.config = cfg;
    net.in_channels = 4;

    const Backbone bb = build_backbone(net.graph, cfg, 4, rng);
    net.input = bb.input;
    net.final_logits = head1x1(net.graph, bb.features[0], bb.feature_channels[0], "head_final", rng);
    net.local_heads.push_back(net.final_logits);
    return net;
}

LogitMap predict_base(ToyNet& net, const Image& img) {
    if (net.in_channels != 3) {
        throw std::invalid_argument("predict_base: network expects 3 input channels");
    }
    if (img.height() != net.config.input_size || img.width() != net.config.input_size) {
        throw std::invalid_argument("predict_base: image size does not match the working resolution");
    }
    net.graph.feed(net.input, Tensor::from_image(img));
    net.graph.forward();
    return net.graph.value(net.final_logits).to_logits();
}

LogitMap predict_refiner(ToyNet& net, const Image& img, const Trimap& trimap) {
    if (net.in_channels != 4) {
        throw std::invalid_argument("predict_refiner: network expects 4 input channels");
    }
    if (img.height() != net.config.input_size || img.width() != net.config.input_size ||
        trimap.height() != img.height() || trimap.width() != img.width()) {
        throw std::invalid_argument("predict_refiner: input size mismatch");
    }
    Tensor t({4, img.height(), img.width()});
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                t.at(c, y, x) = img.at(y, x, c);
            }
        }
    }
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            t.at(3, y, x) = static_cast<float>(trimap.at(y, x)) / 255.0f;
        }
    }
    net.graph.feed(net.input, std::move(t));
    net.graph.forward();
    return net.graph.value(net.final_logits).to_logits();
}

namespace {

std::vector<ScalePair> pairs_for(const ToyNet& net, const std::vector<NodeId>& heads,
                                 const BinaryMask& gt) {
    std::vector<ScalePair> out;
    out.reserve(heads.size());
    for (NodeId id : heads) {
        LogitMap pred = net.graph.value(id).to_logits();
        BinaryMask scaled = (pred.height() == gt.height() && pred.width() == gt.width())
                                ? gt
                                : downsample_mask(gt, pred.height(), pred.width());
        out.push_back(ScalePair{std::move(pred), std::move(scaled)});
    }
    return out;
}

} // namespace

MultiScaleOutputs collect_multi_scale(const ToyNet& net, const BinaryMask& gt) {
    MultiScaleOutputs ms;
    ms.local = pairs_for(net, net.local_heads, gt);
    ms.global = pairs_for(net, net.global_heads, gt);
    ms.token = pairs_for(net, net.token_heads, gt);
    return ms;
}

} // namespace cgm
