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

#include "cgm/trimap.hpp"

#include <stdexcept>
#include <string>

namespace cgm {

ThresholdPair::ThresholdPair(double t_low, double t_high) : low_(t_low), high_(t_high) {
    if (!(0.0 < t_low && t_low < t_high && t_high < 1.0)) {
        throw std::invalid_argument("ThresholdPair requires 0 < t_low < t_high < 1, got (" +
                                    std::to_string(t_low) + ", " + std::to_string(t_high) + ")");
    }
}

namespace {

inline std::uint8_t classify(double m, const ThresholdPair& th) {
    if (m >= th.high()) return Trimap::kForeground;
    if (m <= th.low()) return Trimap::kBackground;
    return Trimap::kUnknown;
}

} // namespace

Trimap generate_trimap(const LogitMap& logits, const ThresholdPair& thresholds) {
    std::vector<std::uint8_t> data(logits.data().size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = classify(stable_sigmoid(logits.data()[i]), thresholds);
    }
    return Trimap(logits.height(), logits.width(), std::move(data));
}

Trimap generate_trimap(const ProbabilityMap& probabilities, const ThresholdPair& thresholds) {
    std::vector<std::uint8_t> data(probabilities.data().size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = classify(static_cast<double>(probabilities.data()[i]), thresholds);
    }
    return Trimap(probabilities.height(), probabilities.width(), std::move(data));
}

RegionFractions region_fractions(const Trimap& trimap) {
    std::size_t bg = 0, unk = 0, fg = 0;
    for (std::uint8_t v : trimap.data()) {
        if (v == Trimap::kBackground) {
            ++bg;
        } else if (v == Trimap::kUnknown) {
            ++unk;
        } else {
            ++fg;
        }
    }
    const double n = static_cast<double>(trimap.data().size());
    return RegionFractions{bg / n, unk / n, fg / n};
}

std::array<ThresholdPair, 7> ablation_thresholds() {
    return {ThresholdPair(0.45, 0.55),  ThresholdPair(0.35, 0.65), ThresholdPair(0.25, 0.75),
            ThresholdPair(0.15, 0.85),  ThresholdPair(0.05, 0.95), ThresholdPair(0.01, 0.99),
            ThresholdPair(0.005, 0.995)};
}

} // namespace cgm
