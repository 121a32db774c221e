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

#include <cstddef>
#include <vector>

#include "cgm/image.hpp"

namespace cgm {

/// Segmentation evaluation suite. All accumulation is in double precision.
/// Thresholded measures compare (double)q >= t.

/// The nine per-pair scores. On identical binary prediction/GT:
/// max_f = weighted_f = e_measure = s_measure = dice = iou = acc = 1 and
/// mae = ber = 0.
struct MetricReport {
    double max_f = 0.0;
    double weighted_f = 0.0;
    double e_measure = 0.0; // mean over 256 thresholds
    double s_measure = 0.0;
    double mae = 0.0;
    double dice = 0.0;
    double iou = 0.0;
    double ber = 0.0;
    double acc = 0.0;
};

/// Pixel counts at a fixed binarization threshold.
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
};

ConfusionCounts confusion_counts(const ProbabilityMap& q, const BinaryMask& y, double threshold = 0.5);

/// Mean absolute error.
double mae(const ProbabilityMap& q, const BinaryMask& y);

/// Max F-measure over the 256 thresholds {0,...,255}/255 with beta^2 = 0.3.
/// F is 0 where beta^2 P + R = 0. Requires non-empty GT foreground.
double max_f(const ProbabilityMap& q, const BinaryMask& y);

/// Margolin-style weighted F-measure (beta^2 = 1): background errors copied
/// from the nearest foreground pixel before a 7x7 sigma-5 Gaussian smoothing
/// (edge-replicating), foreground errors floored by the smoothed field,
/// background errors scaled by the dependency factor 2 - exp(ln(0.5)/5 * D)
/// with D the Euclidean distance to the nearest foreground pixel.
/// Nearest-pixel ties resolve to the smallest (row, column). Requires
/// non-empty GT foreground.
double weighted_f(const ProbabilityMap& q, const BinaryMask& y);

/// Enhanced-alignment measure averaged over the 256 thresholds
/// {1,...,256}/256 (a grid on which a binary prediction stays equal to its
/// GT at every threshold). Per threshold: mean-centered binarized prediction
/// and GT, alignment xi = 2 phi_p phi_y / (phi_p^2 + phi_y^2), enhanced
/// (xi+1)^2/4, averaged over pixels. All-zero GT scores mean(1 - B); all-one
/// GT scores mean(B).
double e_measure(const ProbabilityMap& q, const BinaryMask& y);

/// Structure measure: 0.5 * object similarity + 0.5 * region similarity
/// (4 quadrants split at the GT centroid), clamped to [0,1]. All-zero GT
/// scores 1 - mean(q); all-one GT scores mean(q).
double s_measure(const ProbabilityMap& q, const BinaryMask& y);

/// Overlap scores at a fixed threshold. Dice/IoU are 1 when prediction and
/// GT are both empty; a BER term with an empty class contributes 0.
double dice(const ProbabilityMap& q, const BinaryMask& y, double threshold = 0.5);
double iou(const ProbabilityMap& q, const BinaryMask& y, double threshold = 0.5);
double ber(const ProbabilityMap& q, const BinaryMask& y, double threshold = 0.5);
double acc(const ProbabilityMap& q, const BinaryMask& y, double threshold = 0.5);

/// Every score for one pair. Degenerate pairs (empty GT foreground) are the
/// caller's concern; metric_report throws std::invalid_argument for them.
MetricReport metric_report(const ProbabilityMap& q, const BinaryMask& y, double threshold = 0.5);

struct DatasetReport {
    MetricReport mean;         // arithmetic per-image average
    std::size_t evaluated = 0; // pairs included
    std::size_t excluded = 0;  // degenerate pairs skipped
};

/// Per-image metrics averaged arithmetically; max_f averages the per-image
/// maxima. Pairs with empty GT foreground are excluded and counted. Worker
/// threads may fan out per image; the reduction order is fixed.
DatasetReport evaluate_dataset(const std::vector<std::pair<ProbabilityMap, BinaryMask>>& pairs,
                               double threshold = 0.5, int jobs = 1);

} // namespace cgm
