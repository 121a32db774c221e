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

#include "cgm/autodiff.hpp"

#include <cmath>
#include <stdexcept>

#include "cgm/errors.hpp"

namespace cgm {

namespace {

std::size_t shape_numel(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int d : shape) {
        if (d < 1) throw std::invalid_argument("tensor dimensions must be positive");
        n *= static_cast<std::size_t>(d);
    }
    return shape.empty() ? 0 : n;
}

void check_rank3(const Tensor& t, const char* what) {
    if (t.shape.size() != 3) {
        throw std::invalid_argument(std::string(what) + ": expected a CHW tensor");
    }
}

constexpr double kInstanceNormEps = 1e-5;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

} // namespace

Tensor::Tensor(std::vector<int> s, float fill) : shape(std::move(s)) {
    data.assign(shape_numel(shape), fill);
}

float& Tensor::at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * shape[1] + y) * shape[2] + x];
}

float Tensor::at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * shape[1] + y) * shape[2] + x];
}

Tensor Tensor::from_image(const Image& img) {
    Tensor t({3, img.height(), img.width()});
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                t.at(c, y, x) = img.at(y, x, c);
            }
        }
    }
    return t;
}

Tensor Tensor::from_logits(const LogitMap& logits) {
    Tensor t({1, logits.height(), logits.width()});
    std::copy(logits.data().begin(), logits.data().end(), t.data.begin());
    return t;
}

LogitMap Tensor::to_logits() const {
    if (shape.size() != 3 || shape[0] != 1) {
        throw std::invalid_argument("to_logits: expected a 1xHxW tensor");
    }
    return LogitMap(shape[1], shape[2], data);
}

NodeId Graph::add_node(Node node) {
    nodes_.push_back(std::move(node));
    return static_cast<NodeId>(nodes_.size() - 1);
}

const Graph::Node& Graph::node(NodeId id) const {
    if (id < 0 || id >= static_cast<NodeId>(nodes_.size())) {
        throw std::invalid_argument("invalid node id " + std::to_string(id));
    }
    return nodes_[id];
}

NodeId Graph::input(std::vector<int> shape) {
    Node n{OpKind::Input, {}, Tensor(shape), Tensor(shape), {}, {}};
    return add_node(std::move(n));
}

NodeId Graph::param(const std::string& name, std::vector<int> shape) {
    if (params_.count(name)) {
        throw std::invalid_argument("duplicate parameter name: " + name);
    }
    Node n{OpKind::Param, {}, Tensor(shape), Tensor(shape), {}, {}};
    const NodeId id = add_node(std::move(n));
    params_[name] = id;
    param_names_.push_back(name);
    return id;
}

NodeId Graph::conv2d(NodeId x, NodeId weight, NodeId bias) {
    const Tensor& in = node(x).value;
    const Tensor& w = node(weight).value;
    const Tensor& b = node(bias).value;
    check_rank3(in, "conv2d");
    if (w.shape.size() != 4 || w.shape[2] != w.shape[3] || (w.shape[2] != 1 && w.shape[2] != 3)) {
        throw std::invalid_argument("conv2d: weight must be (Cout, Cin, k, k) with k in {1,3}");
    }
    if (w.shape[1] != in.channels()) {
        throw std::invalid_argument("conv2d: input channel mismatch");
    }
    if (b.shape.size() != 1 || b.shape[0] != w.shape[0]) {
        throw std::invalid_argument("conv2d: bias shape mismatch");
    }
    Node n{OpKind::Conv2d, {x, weight, bias},
           Tensor({w.shape[0], in.height(), in.width()}),
           Tensor({w.shape[0], in.height(), in.width()}),
           {}, {}};
    return add_node(std::move(n));
}

NodeId Graph::avg_pool2(NodeId x) {
    const Tensor& in = node(x).value;
    check_rank3(in, "avg_pool2");
    if (in.height() % 2 != 0 || in.width() % 2 != 0) {
        throw std::invalid_argument("avg_pool2: spatial size must be even");
    }
    Node n{OpKind::AvgPool2, {x},
           Tensor({in.channels(), in.height() / 2, in.width() / 2}),
           Tensor({in.channels(), in.height() / 2, in.width() / 2}),
           {}, {}};
    return add_node(std::move(n));
}

NodeId Graph::upsample2(NodeId x) {
    const Tensor& in = node(x).value;
    check_rank3(in, "upsample2");
    Node n{OpKind::Upsample2, {x},
           Tensor({in.channels(), in.height() * 2, in.width() * 2}),
           Tensor({in.channels(), in.height() * 2, in.width() * 2}),
           {}, {}};
    return add_node(std::move(n));
}

NodeId Graph::instance_norm(NodeId x, NodeId gamma, NodeId beta) {
    const Tensor& in = node(x).value;
    check_rank3(in, "instance_norm");
    const Tensor& g = node(gamma).value;
    const Tensor& b = node(beta).value;
    if (g.shape.size() != 1 || g.shape[0] != in.channels() || b.shape != g.shape) {
        throw std::invalid_argument("instance_norm: affine shape mismatch");
    }
    Node n{OpKind::InstanceNorm, {x, gamma, beta}, Tensor(in.shape), Tensor(in.shape), {}, {}};
    return add_node(std::move(n));
}

NodeId Graph::gelu(NodeId x) {
    const Tensor& in = node(x).value;
    Node n{OpKind::Gelu, {x}, Tensor(in.shape), Tensor(in.shape), {}, {}};
    return add_node(std::move(n));
}

NodeId Graph::sigmoid(NodeId x) {
    const Tensor& in = node(x).value;
    Node n{OpKind::Sigmoid, {x}, Tensor(in.shape), Tensor(in.shape), {}, {}};
    return add_node(std::move(n));
}

NodeId Graph::concat(NodeId a, NodeId b) {
    const Tensor& ta = node(a).value;
    const Tensor& tb = node(b).value;
    check_rank3(ta, "concat");
    check_rank3(tb, "concat");
    if (ta.height() != tb.height() || ta.width() != tb.width()) {
        throw std::invalid_argument("concat: spatial shape mismatch");
    }
    Node n{OpKind::Concat, {a, b},
           Tensor({ta.channels() + tb.channels(), ta.height(), ta.width()}),
           Tensor({ta.channels() + tb.channels(), ta.height(), ta.width()}),
           {}, {}};
    return add_node(std::move(n));
}

NodeId Graph::add(NodeId a, NodeId b) {
    const Tensor& ta = node(a).value;
    const Tensor& tb = node(b).value;
    if (ta.shape != tb.shape) {
        throw std::invalid_argument("add: shape mismatch");
    }
    Node n{OpKind::Add, {a, b}, Tensor(ta.shape), Tensor(ta.shape), {}, {}};
    return add_node(std::move(n));
}

void Graph::feed(NodeId input_id, Tensor value) {
    Node& n = nodes_.at(input_id);
    if (n.kind != OpKind::Input) {
        throw std::invalid_argument("feed: node is not an input");
    }
    if (value.shape != n.value.shape) {
        throw std::invalid_argument("feed: shape mismatch");
    }
    n.value = std::move(value);
    forward_done_ = false;
}

namespace {

void conv2d_forward(const Tensor& in, const Tensor& w, const Tensor& b, Tensor& out) {
    const int cout = w.shape[0];
    const int cin = w.shape[1];
    const int k = w.shape[2];
    const int pad = k / 2;
    const int h = in.height();
    const int wd = in.width();
    for (int oc = 0; oc < cout; ++oc) {
        const float bias = b.data[oc];
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < wd; ++x) {
                float acc = bias;
                for (int ic = 0; ic < cin; ++ic) {
                    for (int ky = 0; ky < k; ++ky) {
                        const int iy = y + ky - pad;
                        if (iy < 0 || iy >= h) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            const int ix = x + kx - pad;
                            if (ix < 0 || ix >= wd) continue;
                            acc += w.data[((static_cast<std::size_t>(oc) * cin + ic) * k + ky) * k + kx] *
                                   in.at(ic, iy, ix);
                        }
                    }
                }
                out.at(oc, y, x) = acc;
            }
        }
    }
}

void conv2d_backward(const Tensor& in, const Tensor& w, const Tensor& gout, Tensor& gin, Tensor& gw,
                     Tensor& gb) {
    const int cout = w.shape[0];
    const int cin = w.shape[1];
    const int k = w.shape[2];
    const int pad = k / 2;
    const int h = in.height();
    const int wd = in.width();
    for (int oc = 0; oc < cout; ++oc) {
        double bias_acc = 0.0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < wd; ++x) {
                const float g = gout.at(oc, y, x);
                bias_acc += g;
                for (int ic = 0; ic < cin; ++ic) {
                    for (int ky = 0; ky < k; ++ky) {
                        const int iy = y + ky - pad;
                        if (iy < 0 || iy >= h) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            const int ix = x + kx - pad;
                            if (ix < 0 || ix >= wd) continue;
                            const std::size_t wi =
                                ((static_cast<std::size_t>(oc) * cin + ic) * k + ky) * k + kx;
                            gin.at(ic, iy, ix) += w.data[wi] * g;
                            gw.data[wi] += in.at(ic, iy, ix) * g;
                        }
                    }
                }
            }
        }
        gb.data[oc] += static_cast<float>(bias_acc);
    }
}

inline float gelu_value(float x) {
    return static_cast<float>(0.5 * x * (1.0 + std::erf(x * kInvSqrt2)));
}

inline float gelu_derivative(float x) {
    const double phi = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * static_cast<double>(x) * x);
    return static_cast<float>(phi + x * pdf);
}

} // namespace

void Graph::forward() {
    for (Node& n : nodes_) {
        switch (n.kind) {
            case OpKind::Input:
            case OpKind::Param:
                break;
            case OpKind::Conv2d:
                conv2d_forward(nodes_[n.inputs[0]].value, nodes_[n.inputs[1]].value,
                               nodes_[n.inputs[2]].value, n.value);
                break;
            case OpKind::AvgPool2: {
                const Tensor& in = nodes_[n.inputs[0]].value;
                for (int c = 0; c < n.value.channels(); ++c) {
                    for (int y = 0; y < n.value.height(); ++y) {
                        for (int x = 0; x < n.value.width(); ++x) {
                            n.value.at(c, y, x) = 0.25f * (in.at(c, 2 * y, 2 * x) +
                                                           in.at(c, 2 * y, 2 * x + 1) +
                                                           in.at(c, 2 * y + 1, 2 * x) +
                                                           in.at(c, 2 * y + 1, 2 * x + 1));
                        }
                    }
                }
                break;
            }
            case OpKind::Upsample2: {
                const Tensor& in = nodes_[n.inputs[0]].value;
                for (int c = 0; c < n.value.channels(); ++c) {
                    for (int y = 0; y < n.value.height(); ++y) {
                        for (int x = 0; x < n.value.width(); ++x) {
                            n.value.at(c, y, x) = in.at(c, y / 2, x / 2);
                        }
                    }
                }
                break;
            }
            case OpKind::InstanceNorm: {
                const Tensor& in = nodes_[n.inputs[0]].value;
                const Tensor& gamma = nodes_[n.inputs[1]].value;
                const Tensor& beta = nodes_[n.inputs[2]].value;
                const int channels = in.channels();
                const std::size_t area = static_cast<std::size_t>(in.height()) * in.width();
                n.saved_mean.assign(channels, 0.0f);
                n.saved_invstd.assign(channels, 0.0f);
                for (int c = 0; c < channels; ++c) {
                    const float* src = in.data.data() + c * area;
                    double mean = 0.0;
                    for (std::size_t i = 0; i < area; ++i) mean += src[i];
                    mean /= static_cast<double>(area);
                    double var = 0.0;
                    for (std::size_t i = 0; i < area; ++i) {
                        const double d = src[i] - mean;
                        var += d * d;
                    }
                    var /= static_cast<double>(area);
                    n.saved_mean[c] = static_cast<float>(mean);
                    n.saved_invstd[c] = static_cast<float>(1.0 / std::sqrt(var + kInstanceNormEps));
                    // Normalize with the saved single-precision statistics so
                    // the backward pass sees exactly the forward mapping.
                    const float fmean = n.saved_mean[c];
                    const float finvstd = n.saved_invstd[c];
                    float* dst = n.value.data.data() + c * area;
                    const float g = gamma.data[c];
                    const float b = beta.data[c];
                    for (std::size_t i = 0; i < area; ++i) {
                        dst[i] = (src[i] - fmean) * finvstd * g + b;
                    }
                }
                break;
            }
            case OpKind::Gelu: {
                const Tensor& in = nodes_[n.inputs[0]].value;
                for (std::size_t i = 0; i < in.numel(); ++i) {
                    n.value.data[i] = gelu_value(in.data[i]);
                }
                break;
            }
            case OpKind::Sigmoid: {
                const Tensor& in = nodes_[n.inputs[0]].value;
                for (std::size_t i = 0; i < in.numel(); ++i) {
                    n.value.data[i] = static_cast<float>(stable_sigmoid(in.data[i]));
                }
                break;
            }
            case OpKind::Concat: {
                const Tensor& a = nodes_[n.inputs[0]].value;
                const Tensor& b = nodes_[n.inputs[1]].value;
                std::copy(a.data.begin(), a.data.end(), n.value.data.begin());
                std::copy(b.data.begin(), b.data.end(), n.value.data.begin() + a.numel());
                break;
            }
            case OpKind::Add: {
                const Tensor& a = nodes_[n.inputs[0]].value;
                const Tensor& b = nodes_[n.inputs[1]].value;
                for (std::size_t i = 0; i < a.numel(); ++i) {
                    n.value.data[i] = a.data[i] + b.data[i];
                }
                break;
            }
        }
    }
    forward_done_ = true;
}

void Graph::backward(const std::vector<std::pair<NodeId, Tensor>>& seeds) {
    if (!forward_done_) {
        throw std::logic_error("backward called before forward");
    }
    if (backward_done_) {
        throw std::logic_error("backward called twice without zero_grad");
    }
    for (const auto& [id, seed] : seeds) {
        Node& n = nodes_.at(id);
        if (seed.shape != n.value.shape) {
            throw std::invalid_argument("backward: seed shape mismatch");
        }
        for (std::size_t i = 0; i < seed.numel(); ++i) {
            n.grad.data[i] += seed.data[i];
        }
    }

    for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
        Node& n = nodes_[id];
        switch (n.kind) {
            case OpKind::Input:
            case OpKind::Param:
                break;
            case OpKind::Conv2d:
                conv2d_backward(nodes_[n.inputs[0]].value, nodes_[n.inputs[1]].value, n.grad,
                                nodes_[n.inputs[0]].grad, nodes_[n.inputs[1]].grad,
                                nodes_[n.inputs[2]].grad);
                break;
            case OpKind::AvgPool2: {
                Tensor& gin = nodes_[n.inputs[0]].grad;
                for (int c = 0; c < n.value.channels(); ++c) {
                    for (int y = 0; y < n.value.height(); ++y) {
                        for (int x = 0; x < n.value.width(); ++x) {
                            const float g = 0.25f * n.grad.at(c, y, x);
                            gin.at(c, 2 * y, 2 * x) += g;
                            gin.at(c, 2 * y, 2 * x + 1) += g;
                            gin.at(c, 2 * y + 1, 2 * x) += g;
                            gin.at(c, 2 * y + 1, 2 * x + 1) += g;
                        }
                    }
                }
                break;
            }
            case OpKind::Upsample2: {
                Tensor& gin = nodes_[n.inputs[0]].grad;
                for (int c = 0; c < n.value.channels(); ++c) {
                    for (int y = 0; y < n.value.height(); ++y) {
                        for (int x = 0; x < n.value.width(); ++x) {
                            gin.at(c, y / 2, x / 2) += n.grad.at(c, y, x);
                        }
                    }
                }
                break;
            }
            case OpKind::InstanceNorm: {
                const Tensor& in = nodes_[n.inputs[0]].value;
                const Tensor& gamma = nodes_[n.inputs[1]].value;
                Tensor& gin = nodes_[n.inputs[0]].grad;
                Tensor& ggamma = nodes_[n.inputs[1]].grad;
                Tensor& gbeta = nodes_[n.inputs[2]].grad;
                const int channels = in.channels();
                const std::size_t area = static_cast<std::size_t>(in.height()) * in.width();
                for (int c = 0; c < channels; ++c) {
                    const float* src = in.data.data() + c * area;
                    const float* gout = n.grad.data.data() + c * area;
                    float* gsrc = gin.data.data() + c * area;
                    const double mean = n.saved_mean[c];
                    const double invstd = n.saved_invstd[c];
                    const double g = gamma.data[c];
                    double sum_g = 0.0, sum_gx = 0.0;
                    for (std::size_t i = 0; i < area; ++i) {
                        const double xhat = (src[i] - mean) * invstd;
                        sum_g += gout[i];
                        sum_gx += gout[i] * xhat;
                    }
                    gbeta.data[c] += static_cast<float>(sum_g);
                    ggamma.data[c] += static_cast<float>(sum_gx);
                    const double mean_g = sum_g / static_cast<double>(area);
                    const double mean_gx = sum_gx / static_cast<double>(area);
                    for (std::size_t i = 0; i < area; ++i) {
                        const double xhat = (src[i] - mean) * invstd;
                        gsrc[i] += static_cast<float>(g * invstd * (gout[i] - mean_g - xhat * mean_gx));
                    }
                }
                break;
            }
            case OpKind::Gelu: {
                const Tensor& in = nodes_[n.inputs[0]].value;
                Tensor& gin = nodes_[n.inputs[0]].grad;
                for (std::size_t i = 0; i < in.numel(); ++i) {
                    gin.data[i] += n.grad.data[i] * gelu_derivative(in.data[i]);
                }
                break;
            }
            case OpKind::Sigmoid: {
                Tensor& gin = nodes_[n.inputs[0]].grad;
                for (std::size_t i = 0; i < n.value.numel(); ++i) {
                    const float s = n.value.data[i];
                    gin.data[i] += n.grad.data[i] * s * (1.0f - s);
                }
                break;
            }
            case OpKind::Concat: {
                Tensor& ga = nodes_[n.inputs[0]].grad;
                Tensor& gb = nodes_[n.inputs[1]].grad;
                for (std::size_t i = 0; i < ga.numel(); ++i) {
                    ga.data[i] += n.grad.data[i];
                }
                for (std::size_t i = 0; i < gb.numel(); ++i) {
                    gb.data[i] += n.grad.data[ga.numel() + i];
                }
                break;
            }
            case OpKind::Add: {
                Tensor& ga = nodes_[n.inputs[0]].grad;
                Tensor& gb = nodes_[n.inputs[1]].grad;
                for (std::size_t i = 0; i < ga.numel(); ++i) {
                    ga.data[i] += n.grad.data[i];
                    gb.data[i] += n.grad.data[i];
                }
                break;
            }
        }
    }
    backward_done_ = true;
}

void Graph::zero_grad() {
    for (Node& n : nodes_) {
        std::fill(n.grad.data.begin(), n.grad.data.end(), 0.0f);
    }
    backward_done_ = false;
}

const Tensor& Graph::value(NodeId id) const { return node(id).value; }

const Tensor& Graph::grad(NodeId id) const { return node(id).grad; }

Tensor& Graph::mutable_value(NodeId id) {
    if (id < 0 || id >= static_cast<NodeId>(nodes_.size())) {
        throw std::invalid_argument("invalid node id");
    }
    return nodes_[id].value;
}

NodeId Graph::param_id(const std::string& name) const {
    const auto it = params_.find(name);
    if (it == params_.end()) {
        throw std::invalid_argument("unknown parameter: " + name);
    }
    return it->second;
}

std::map<std::string, Tensor> Graph::export_params() const {
    std::map<std::string, Tensor> out;
    for (const auto& [name, id] : params_) {
        out[name] = nodes_[id].value;
    }
    return out;
}

void Graph::import_params(const std::map<std::string, Tensor>& params) {
    for (const std::string& name : param_names_) {
        const auto it = params.find(name);
        if (it == params.end()) {
            throw std::invalid_argument("missing parameter in checkpoint: " + name);
        }
        Node& n = nodes_[params_.at(name)];
        if (it->second.shape != n.value.shape) {
            throw std::invalid_argument("parameter shape mismatch: " + name);
        }
        n.value = it->second;
    }
    forward_done_ = false;
}

void adam_step(std::span<float> params, std::span<const float> grads, std::vector<float>& m,
               std::vector<float>& v, long step, double lr, double beta1, double beta2, double eps) {
    if (params.size() != grads.size() || m.size() != params.size() || v.size() != params.size()) {
        throw std::invalid_argument("adam_step: buffer size mismatch");
    }
    if (step < 1) {
        throw std::invalid_argument("adam_step: step counts from 1");
    }
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        if (!std::isfinite(g)) {
            throw NumericError("adam_step: non-finite gradient at index " + std::to_string(i));
        }
        const double mi = beta1 * m[i] + (1.0 - beta1) * g;
        const double vi = beta2 * v[i] + (1.0 - beta2) * g * g;
        m[i] = static_cast<float>(mi);
        v[i] = static_cast<float>(vi);
        const double mhat = mi / bc1;
        const double vhat = vi / bc2;
        params[i] = static_cast<float>(params[i] - lr * mhat / (std::sqrt(vhat) + eps));
    }
}

AdamOptimizer::AdamOptimizer(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::step(Graph& graph) {
    ++step_;
    for (const std::string& name : graph.param_names()) {
        const NodeId id = graph.param_id(name);
        Tensor& value = graph.mutable_value(id);
        const Tensor& grad = graph.grad(id);
        auto& [m, v] = moments_[name];
        if (m.empty()) {
            m.assign(value.numel(), 0.0f);
            v.assign(value.numel(), 0.0f);
        }
        adam_step(value.data, grad.data, m, v, step_, lr_, beta1_, beta2_, eps_);
    }
}

std::map<std::string, Tensor> AdamOptimizer::export_state(const Graph& graph) const {
    std::map<std::string, Tensor> out;
    for (const std::string& name : graph.param_names()) {
        const auto it = moments_.find(name);
        if (it == moments_.end()) continue;
        const Tensor& value = graph.value(graph.param_id(name));
        Tensor m(value.shape);
        Tensor v(value.shape);
        m.data = it->second.first;
        v.data = it->second.second;
        out["adam.m." + name] = std::move(m);
        out["adam.v." + name] = std::move(v);
    }
    return out;
}

void AdamOptimizer::import_state(const Graph& graph, const std::map<std::string, Tensor>& state,
                                 long step) {
    step_ = step;
    moments_.clear();
    for (const std::string& name : graph.param_names()) {
        const auto mit = state.find("adam.m." + name);
        const auto vit = state.find("adam.v." + name);
        if (mit == state.end() || vit == state.end()) continue;
        moments_[name] = {mit->second.data, vit->second.data};
    }
}

void init_conv_weight(Tensor& weight, Rng& rng) {
    const std::size_t fan_in = weight.shape.size() == 4
                                   ? static_cast<std::size_t>(weight.shape[1]) * weight.shape[2] * weight.shape[3]
                                   : weight.numel();
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (float& w : weight.data) {
        w = static_cast<float>(rng.normal(0.0, stddev));
    }
}

} // namespace cgm
