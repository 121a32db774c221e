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

#include "cgm/autodiff.hpp"
#include "cgm/losses.hpp"
#include "cgm/trimap.hpp"

namespace cgm {

/// Desk-scale encoder-decoder networks with instance normalization and GELU
/// activations. The base network emits a main logit map plus auxiliary
/// side/global/token head lists (6/5/4 one-by-one conv heads cycling over the
/// decoder scales); the refiner consumes image plus trimap/255 and emits a
/// single logit map.

struct ToyNetConfig {
    int channels = 8;   // first-stage width, <= 32
    int depth = 2;      // down/up stages, <= 3
    int input_size = 64;
};

struct ToyNet {
    Graph graph;
    NodeId input = -1;
    NodeId final_logits = -1;
    std::vector<NodeId> local_heads;  // front element is the final output
    std::vector<NodeId> global_heads;
    std::vector<NodeId> token_heads;
    ToyNetConfig config;
    int in_channels = 0;
};

/// Base segmentation network over a 3-channel image. Requires input_size
/// divisible by 2^depth and a smallest decoder scale of at least 16 so every
/// head output fits the 11x11 SSIM window.
ToyNet build_toy_base(const ToyNetConfig& cfg, std::uint64_t seed);

/// Refiner over 4 channels (image plus trimap scaled by 1/255), same
/// topology, single output head.
ToyNet build_toy_refiner(const ToyNetConfig& cfg, std::uint64_t seed);

/// Feeds the image and runs forward; returns the main logit map.
LogitMap predict_base(ToyNet& net, const Image& img);

/// Feeds image + trimap/255 and runs forward; returns the refined logit map.
LogitMap predict_refiner(ToyNet& net, const Image& img, const Trimap& trimap);

/// Multi-scale supervision pairs from the current forward pass, with the GT
/// mask resampled to each head's resolution.
MultiScaleOutputs collect_multi_scale(const ToyNet& net, const BinaryMask& gt);

} // namespace cgm
