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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cgm/image.hpp"
#include "cgm/rng.hpp"

namespace cgm {

/// Minimal reverse-mode differentiation over a fixed op set, sized for toy
/// encoder-decoder networks. Parameters and activations are single
/// precision; loss accumulation elsewhere is double.

struct Tensor {
    std::vector<int> shape;
    std::vector<float> data;

    Tensor() = default;
    Tensor(std::vector<int> s, float fill = 0.0f);

    std::size_t numel() const { return data.size(); }
    // CHW accessors for rank-3 activations.
    int channels() const { return shape[0]; }
    int height() const { return shape[1]; }
    int width() const { return shape[2]; }
    float& at(int c, int y, int x);
    float at(int c, int y, int x) const;

    static Tensor from_image(const Image& img);
    static Tensor from_logits(const LogitMap& logits);
    LogitMap to_logits() const; // rank-3, single channel
};

enum class OpKind {
    Input,
    Param,
    Conv2d, // odd kernel, stride 1, same padding
    AvgPool2,
    Upsample2,
    InstanceNorm,
    Gelu,
    Sigmoid,
    Concat, // channel axis
    Add,
};

using NodeId = int;

/// Topologically ordered operation records (inputs always precede their
/// consumers). Gradient buffers must be zeroed between backward passes.
class Graph {
public:
    NodeId input(std::vector<int> shape);
    NodeId param(const std::string& name, std::vector<int> shape);

    NodeId conv2d(NodeId x, NodeId weight, NodeId bias); // weight (Cout, Cin, k, k)
    NodeId avg_pool2(NodeId x);
    NodeId upsample2(NodeId x);
    NodeId instance_norm(NodeId x, NodeId gamma, NodeId beta); // eps 1e-5
    NodeId gelu(NodeId x);  // exact Gaussian CDF form
    NodeId sigmoid(NodeId x);
    NodeId concat(NodeId a, NodeId b);
    NodeId add(NodeId a, NodeId b);

    void feed(NodeId input_id, Tensor value);

    /// Recomputes every non-leaf node in order.
    void forward();

    /// Accumulates gradients for every node and parameter from the given
    /// seeds (dL/dnode). Requires a completed forward pass and zeroed
    /// gradients; a second backward without zero_grad() is rejected.
    void backward(const std::vector<std::pair<NodeId, Tensor>>& seeds);

    void zero_grad();

    const Tensor& value(NodeId id) const;
    const Tensor& grad(NodeId id) const;
    Tensor& mutable_value(NodeId id); // parameter updates

    const std::vector<std::string>& param_names() const { return param_names_; }
    NodeId param_id(const std::string& name) const;

    /// Named parameter tensors in registration order.
    std::map<std::string, Tensor> export_params() const;
    /// Loads values for every registered parameter; shapes must match.
    void import_params(const std::map<std::string, Tensor>& params);

private:
    struct Node {
        OpKind kind;
        std::vector<NodeId> inputs;
        Tensor value;
        Tensor grad;
        // InstanceNorm statistics saved by forward for the backward pass.
        std::vector<float> saved_mean;
        std::vector<float> saved_invstd;
    };

    NodeId add_node(Node node);
    const Node& node(NodeId id) const;

    std::vector<Node> nodes_;
    std::vector<std::string> param_names_;
    std::map<std::string, NodeId> params_;
    bool forward_done_ = false;
    bool backward_done_ = false;
};

/// One Adam update on a flat parameter/gradient pair; m and v are the
/// first/second moment buffers and step counts from 1. Aborts with
/// NumericError on non-finite gradients.
void adam_step(std::span<float> params, std::span<const float> grads, std::vector<float>& m,
               std::vector<float>& v, long step, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

/// Adam over every parameter of a graph, keeping per-parameter moments.
class AdamOptimizer {
public:
    explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    void step(Graph& graph);
    long step_count() const { return step_; }

    /// Moment buffers as named tensors ("adam.m.<param>"), for checkpoints.
    std::map<std::string, Tensor> export_state(const Graph& graph) const;
    void import_state(const Graph& graph, const std::map<std::string, Tensor>& state, long step);

private:
    double lr_, beta1_, beta2_, eps_;
    long step_ = 0;
    std::map<std::string, std::pair<std::vector<float>, std::vector<float>>> moments_;
};

/// Kaiming-style fan-in initialization (gain sqrt(2), suited to GELU).
void init_conv_weight(Tensor& weight, Rng& rng);

} // namespace cgm
