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

#include <array>

#include "cgm/image.hpp"

namespace cgm {

/// Confidence band for trimap generation. Requires 0 < t_low < t_high < 1;
/// the three-way pixel classification is ambiguous otherwise.
class ThresholdPair {
public:
    ThresholdPair(double t_low, double t_high);
    ThresholdPair() : ThresholdPair(0.05, 0.95) {}

    double low() const { return low_; }
    double high() const { return high_; }

private:
    double low_;
    double high_;
};

/// Pixel-count fractions of the three trimap regions; they sum to 1.
struct RegionFractions {
    double background = 0.0;
    double unknown = 0.0;
    double foreground = 0.0;
};

/// Confidence-trimap generation: with M = sigmoid(P) evaluated in double
/// precision, M >= t_high -> 255, M <= t_low -> 0, otherwise 128. Defaults
/// are (0.05, 0.95). Output dimensions equal input dimensions.
Trimap generate_trimap(const LogitMap& logits, const ThresholdPair& thresholds = ThresholdPair());

/// Same classification applied directly to probabilities (compared in
/// double), for predictions that arrive already squashed.
Trimap generate_trimap(const ProbabilityMap& probabilities,
                       const ThresholdPair& thresholds = ThresholdPair());

RegionFractions region_fractions(const Trimap& trimap);

/// The seven ablation band settings, narrowest to widest:
/// (0.45,0.55), (0.35,0.65), (0.25,0.75), (0.15,0.85), (0.05,0.95),
/// (0.01,0.99), (0.005,0.995). The (0.05,0.95) pair is the default band.
std::array<ThresholdPair, 7> ablation_thresholds();

/// Index of the default (0.05, 0.95) pair within ablation_thresholds().
inline constexpr int kDefaultAblationIndex = 4;

} // namespace cgm
