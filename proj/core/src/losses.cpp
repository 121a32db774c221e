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

#include "cgm/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cgm {

namespace {

void check_same_shape(int h1, int w1, int h2, int w2, const char* what) {
    if (h1 != h2 || w1 != w2) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch " + std::to_string(h1) +
                                    "x" + std::to_string(w1) + " vs " + std::to_string(h2) + "x" +
                                    std::to_string(w2));
    }
}

constexpr int kBoxRadius = 15; // 31x31 pool
constexpr int kBoxArea = 31 * 31;

} // namespace

WeightMap WeightMap::uniform(int height, int width) {
    return WeightMap{height, width, std::vector<float>(static_cast<std::size_t>(height) * width, 1.0f)};
}

WeightMap boundary_weight_map(const BinaryMask& y) {
    const int h = y.height();
    const int w = y.width();

    // Separable 31x31 box sum with edge replication, exact in integers.
    std::vector<int> row_sums(static_cast<std::size_t>(h) * w);
    std::vector<int> prefix(w + 1);
    for (int i = 0; i < h; ++i) {
        prefix[0] = 0;
        for (int j = 0; j < w; ++j) {
            prefix[j + 1] = prefix[j] + y.at(i, j);
        }
        const int left_edge = y.at(i, 0);
        const int right_edge = y.at(i, w - 1);
        for (int j = 0; j < w; ++j) {
            const int lo = std::max(0, j - kBoxRadius);
            const int hi = std::min(w - 1, j + kBoxRadius);
            int sum = prefix[hi + 1] - prefix[lo];
            sum += std::max(0, kBoxRadius - j) * left_edge;
            sum += std::max(0, j + kBoxRadius - (w - 1)) * right_edge;
            row_sums[static_cast<std::size_t>(i) * w + j] = sum;
        }
    }

    WeightMap out{h, w, std::vector<float>(static_cast<std::size_t>(h) * w)};
    std::vector<int> col_prefix(h + 1);
    for (int j = 0; j < w; ++j) {
        col_prefix[0] = 0;
        for (int i = 0; i < h; ++i) {
            col_prefix[i + 1] = col_prefix[i] + row_sums[static_cast<std::size_t>(i) * w + j];
        }
        const int top_edge = row_sums[j];
        const int bottom_edge = row_sums[static_cast<std::size_t>(h - 1) * w + j];
        for (int i = 0; i < h; ++i) {
            const int lo = std::max(0, i - kBoxRadius);
            const int hi = std::min(h - 1, i + kBoxRadius);
            int sum = col_prefix[hi + 1] - col_prefix[lo];
            sum += std::max(0, kBoxRadius - i) * top_edge;
            sum += std::max(0, i + kBoxRadius - (h - 1)) * bottom_edge;
            const double pooled = static_cast<double>(sum) / kBoxArea;
            out.data[static_cast<std::size_t>(i) * w + j] =
                static_cast<float>(1.0 + 5.0 * std::abs(pooled - y.at(i, j)));
        }
    }
    return out;
}

TermLoss wbce(const LogitMap& p, const BinaryMask& y, const WeightMap& w) {
    check_same_shape(p.height(), p.width(), y.height(), y.width(), "wbce");
    check_same_shape(p.height(), p.width(), w.height, w.width, "wbce weights");

    const std::size_t n = p.data().size();
    double weight_sum = 0.0;
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = p.data()[i];
        const double yi = y.data()[i];
        const double wi = w.data[i];
        // Stable BCE from logits: max(p,0) - p*y + log(1 + exp(-|p|)).
        const double bce = std::max(pi, 0.0) - pi * yi + std::log1p(std::exp(-std::abs(pi)));
        loss_sum += wi * bce;
        weight_sum += wi;
    }

    std::vector<float> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = p.data()[i];
        const double yi = y.data()[i];
        const double wi = w.data[i];
        grad[i] = static_cast<float>(wi * (stable_sigmoid(pi) - yi) / weight_sum);
    }
    return TermLoss{loss_sum / weight_sum, LogitMap(p.height(), p.width(), std::move(grad))};
}

TermLoss wiou(const ProbabilityMap& q, const BinaryMask& y, const WeightMap& w) {
    check_same_shape(q.height(), q.width(), y.height(), y.width(), "wiou");
    check_same_shape(q.height(), q.width(), w.height, w.width, "wiou weights");

    constexpr double kSmooth = 1.0;
    const std::size_t n = q.data().size();
    double inter = 0.0;
    double uni = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double qi = q.data()[i];
        const double yi = y.data()[i];
        const double wi = w.data[i];
        inter += wi * qi * yi;
        uni += wi * (qi + yi - qi * yi);
    }
    const double num = inter + kSmooth;
    const double den = uni + kSmooth;
    const double value = 1.0 - num / den;

    std::vector<float> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double qi = q.data()[i];
        const double yi = y.data()[i];
        const double wi = w.data[i];
        const double d_q = -(wi * yi * den - num * wi * (1.0 - yi)) / (den * den);
        grad[i] = static_cast<float>(d_q * qi * (1.0 - qi)); // chain through sigmoid
    }
    return TermLoss{value, LogitMap(q.height(), q.width(), std::move(grad))};
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

std::array<double, kSsimWindow> gaussian_kernel() {
    std::array<double, kSsimWindow> k{};
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
        const double d = i - (kSsimWindow - 1) / 2.0;
        k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Valid-region separable correlation: (h, w) -> (h - 10, w - 10).
std::vector<double> filter_valid(const std::vector<double>& in, int h, int w,
                                 const std::array<double, kSsimWindow>& k) {
    const int mw = w - kSsimWindow + 1;
    const int mh = h - kSsimWindow + 1;
    std::vector<double> mid(static_cast<std::size_t>(h) * mw);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < mw; ++j) {
            double acc = 0.0;
            for (int t = 0; t < kSsimWindow; ++t) {
                acc += k[t] * in[static_cast<std::size_t>(i) * w + j + t];
            }
            mid[static_cast<std::size_t>(i) * mw + j] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(mh) * mw);
    for (int i = 0; i < mh; ++i) {
        for (int j = 0; j < mw; ++j) {
            double acc = 0.0;
            for (int t = 0; t < kSsimWindow; ++t) {
                acc += k[t] * mid[static_cast<std::size_t>(i + t) * mw + j];
            }
            out[static_cast<std::size_t>(i) * mw + j] = acc;
        }
    }
    return out;
}

// Adjoint of filter_valid: scatter window-grid fields back onto the image
// grid, (h - 10, w - 10) -> (h, w).
std::vector<double> scatter_full(const std::vector<double>& in, int h, int w,
                                 const std::array<double, kSsimWindow>& k) {
    const int gw = w - kSsimWindow + 1;
    const int gh = h - kSsimWindow + 1;
    std::vector<double> mid(static_cast<std::size_t>(gh) * w, 0.0);
    for (int i = 0; i < gh; ++i) {
        for (int j = 0; j < w; ++j) {
            const int blo = std::max(0, j - (kSsimWindow - 1));
            const int bhi = std::min(gw - 1, j);
            double acc = 0.0;
            for (int b = blo; b <= bhi; ++b) {
                acc += k[j - b] * in[static_cast<std::size_t>(i) * gw + b];
            }
            mid[static_cast<std::size_t>(i) * w + j] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(h) * w, 0.0);
    for (int i = 0; i < h; ++i) {
        const int alo = std::max(0, i - (kSsimWindow - 1));
        const int ahi = std::min(gh - 1, i);
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int a = alo; a <= ahi; ++a) {
                acc += k[i - a] * mid[static_cast<std::size_t>(a) * w + j];
            }
            out[static_cast<std::size_t>(i) * w + j] = acc;
        }
    }
    return out;
}

} // namespace

TermLoss ssim_loss(const ProbabilityMap& q, const BinaryMask& y) {
    check_same_shape(q.height(), q.width(), y.height(), y.width(), "ssim_loss");
    const int h = q.height();
    const int w = q.width();
    if (h < kSsimWindow || w < kSsimWindow) {
        throw std::invalid_argument("ssim_loss: map " + std::to_string(h) + "x" + std::to_string(w) +
                                    " is smaller than the 11x11 window");
    }

    const auto kernel = gaussian_kernel();
    const std::size_t n = static_cast<std::size_t>(h) * w;
    std::vector<double> x(n), t(n), xx(n), tt(n), xt(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = q.data()[i];
        t[i] = y.data()[i];
        xx[i] = x[i] * x[i];
        tt[i] = t[i] * t[i];
        xt[i] = x[i] * t[i];
    }

    const auto mu_x = filter_valid(x, h, w, kernel);
    const auto mu_t = filter_valid(t, h, w, kernel);
    const auto s_xx = filter_valid(xx, h, w, kernel);
    const auto s_tt = filter_valid(tt, h, w, kernel);
    const auto s_xt = filter_valid(xt, h, w, kernel);

    const std::size_t windows = mu_x.size();
    std::vector<double> coef_const(windows), coef_x(windows), coef_t(windows);
    double ssim_sum = 0.0;
    for (std::size_t i = 0; i < windows; ++i) {
        const double mx = mu_x[i];
        const double mt = mu_t[i];
        const double var_x = s_xx[i] - mx * mx;
        const double var_t = s_tt[i] - mt * mt;
        const double cov = s_xt[i] - mx * mt;
        const double a1 = 2.0 * mx * mt + kSsimC1;
        const double a2 = 2.0 * cov + kSsimC2;
        const double b1 = mx * mx + mt * mt + kSsimC1;
        const double b2 = var_x + var_t + kSsimC2;
        const double den = b1 * b2;
        const double ssim = a1 * a2 / den;
        ssim_sum += ssim;
        // d ssim / d x_i = g_i * (coef_const + coef_x * x_i + coef_t * t_i)
        coef_const[i] = (2.0 * mt * (a2 - a1) + 2.0 * mx * ssim * (b1 - b2)) / den;
        coef_x[i] = -2.0 * ssim * b1 / den;
        coef_t[i] = 2.0 * a1 / den;
    }
    const double value = 1.0 - ssim_sum / static_cast<double>(windows);

    const auto back_const = scatter_full(coef_const, h, w, kernel);
    const auto back_x = scatter_full(coef_x, h, w, kernel);
    const auto back_t = scatter_full(coef_t, h, w, kernel);

    std::vector<float> grad(n);
    const double inv_windows = 1.0 / static_cast<double>(windows);
    for (std::size_t i = 0; i < n; ++i) {
        const double d_x = -(back_const[i] + x[i] * back_x[i] + t[i] * back_t[i]) * inv_windows;
        grad[i] = static_cast<float>(d_x * x[i] * (1.0 - x[i])); // chain through sigmoid
    }
    return TermLoss{value, LogitMap(h, w, std::move(grad))};
}

LossBreakdown structure_loss(const LogitMap& p, const BinaryMask& y, const LossWeights& lw) {
    check_same_shape(p.height(), p.width(), y.height(), y.width(), "structure_loss");
    const WeightMap w = boundary_weight_map(y);
    const ProbabilityMap q = sigmoid_map(p);

    const TermLoss bce = wbce(p, y, w);
    const TermLoss iou = wiou(q, y, w);
    const TermLoss ssim = ssim_loss(q, y);

    const double total = lw.bce * bce.value + lw.iou * iou.value + lw.ssim * ssim.value;
    std::vector<float> grad(p.data().size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] = static_cast<float>(lw.bce * bce.grad.data()[i] + lw.iou * iou.grad.data()[i] +
                                     lw.ssim * ssim.grad.data()[i]);
    }
    return LossBreakdown{bce.value, iou.value, ssim.value, total,
                         LogitMap(p.height(), p.width(), std::move(grad))};
}

namespace {

double scale_sum(const std::vector<ScalePair>& pairs, const LossWeights& lw, double coeff,
                 std::vector<LogitMap>* grads) {
    double sum = 0.0;
    for (const ScalePair& pair : pairs) {
        LossBreakdown sl = structure_loss(pair.pred, pair.gt, lw);
        sum += sl.total;
        std::vector<float> g(sl.grad.data().begin(), sl.grad.data().end());
        for (float& v : g) v = static_cast<float>(v * coeff);
        grads->emplace_back(sl.grad.height(), sl.grad.width(), std::move(g));
    }
    return sum;
}

} // namespace

CombinedLoss combined_loss(const MultiScaleOutputs& outputs, const LossWeights& lw,
                           const CombinedCoefficients& coeffs) {
    if (outputs.local.empty()) {
        throw std::invalid_argument("combined_loss: the local list must contain the final prediction");
    }
    CombinedLoss result;
    result.local_sum = scale_sum(outputs.local, lw, coeffs.local_c, &result.local_grads);
    result.global_sum = scale_sum(outputs.global, lw, coeffs.global_c, &result.global_grads);
    result.token_sum = scale_sum(outputs.token, lw, coeffs.token_c, &result.token_grads);
    result.value = coeffs.global_c * result.global_sum + coeffs.token_c * result.token_sum +
                   coeffs.local_c * result.local_sum;
    return result;
}

BinaryMask downsample_mask(const BinaryMask& mask, int height, int width) {
    std::vector<float> as_prob(mask.data().begin(), mask.data().end());
    const ProbabilityMap soft(mask.height(), mask.width(), std::move(as_prob));
    return binarize(resize_bilinear(soft, height, width), 0.5);
}

} // namespace cgm
