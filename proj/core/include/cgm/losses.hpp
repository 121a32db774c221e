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

#include <vector>

#include "cgm/image.hpp"

namespace cgm {

/// Structure-loss family: boundary-weighted BCE, weighted soft IoU and a
/// windowed SSIM term, each returning the loss value together with its
/// analytic gradient with respect to the prediction logits. Values are
/// accumulated in double precision; gradients are stored single precision.

/// Per-term mixing coefficients. Defaults are (4, 1, 2).
struct LossWeights {
    double bce = 4.0;
    double iou = 1.0;
    double ssim = 2.0;
};

/// Per-pixel weights >= 1 emphasizing mask boundaries.
struct WeightMap {
    int height = 0;
    int width = 0;
    std::vector<float> data;

    float at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
    static WeightMap uniform(int height, int width);
};

/// Loss value plus gradient with respect to logits.
struct TermLoss {
    double value;
    LogitMap grad;
};

/// Per-term values of one structure-loss evaluation. total is the weighted
/// sum of the three terms and grad its gradient with respect to the logits.
struct LossBreakdown {
    double wbce;
    double wiou;
    double ssim;
    double total;
    LogitMap grad;
};

/// w = 1 + 5 * |meanpool31(y) - y| with a 31x31 box average under
/// edge-replicating padding. Range is [1, 6]; constant masks give all ones.
WeightMap boundary_weight_map(const BinaryMask& y);

/// Weighted binary cross-entropy from logits, sum(w * bce) / sum(w), in the
/// numerically stable formulation. Gradient: w * (sigmoid(p) - y) / sum(w).
TermLoss wbce(const LogitMap& p, const BinaryMask& y, const WeightMap& w);

/// Weighted soft IoU loss 1 - (sum(w q y) + 1) / (sum(w (q + y - q y)) + 1),
/// with unit smoothing so empty masks stay finite. The returned gradient is
/// with respect to logits (chained through the sigmoid at the stored q).
TermLoss wiou(const ProbabilityMap& q, const BinaryMask& y, const WeightMap& w);

/// 1 - mean SSIM over valid 11x11 Gaussian windows (sigma 1.5, C1 = 0.01^2,
/// C2 = 0.03^2 on unit dynamic range). Requires min dimension >= 11.
/// Gradient with respect to logits, chained through the sigmoid.
TermLoss ssim_loss(const ProbabilityMap& q, const BinaryMask& y);

/// StructureLoss(p, y) = w_bce * WBCE + w_iou * WIOU + w_ssim * SSIMloss with
/// the boundary weight map applied to the first two terms.
LossBreakdown structure_loss(const LogitMap& p, const BinaryMask& y, const LossWeights& lw = {});

/// One multi-scale prediction paired with ground truth at its resolution.
struct ScalePair {
    LogitMap pred;
    BinaryMask gt;
};

inline constexpr int kDefaultLocalScales = 6;
inline constexpr int kDefaultGlobalScales = 5;
inline constexpr int kDefaultTokenScales = 4;

/// Side (local), global and token prediction lists; the defaults above give
/// the canonical 6/5/4 counts.
struct MultiScaleOutputs {
    std::vector<ScalePair> local;
    std::vector<ScalePair> global;
    std::vector<ScalePair> token;
};

/// Scale coefficients of the combined loss; defaults 0.3/0.3/1.0.
struct CombinedCoefficients {
    double global_c = 0.3;
    double token_c = 0.3;
    double local_c = 1.0;
};

struct CombinedLoss {
    double value = 0.0;
    // Per-scale sums of StructureLoss totals before coefficients.
    double local_sum = 0.0;
    double global_sum = 0.0;
    double token_sum = 0.0;
    // Gradients per prediction map, already scaled by the coefficients.
    std::vector<LogitMap> local_grads;
    std::vector<LogitMap> global_grads;
    std::vector<LogitMap> token_grads;
};

/// L = global_c * sum(StructureLoss(g_i)) + token_c * sum(StructureLoss(t_i))
///   + local_c * sum(StructureLoss(s_i)). The local list must be non-empty
/// (the final prediction lives there).
CombinedLoss combined_loss(const MultiScaleOutputs& outputs, const LossWeights& lw = {},
                           const CombinedCoefficients& coeffs = {});

/// Ground-truth resampling for multi-scale supervision: bilinear then
/// re-binarize at 0.5. Preserves thin structures better at small scales than
/// nearest-neighbor.
BinaryMask downsample_mask(const BinaryMask& mask, int height, int width);

} // namespace cgm
