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

#include <functional>
#include <string>

#include "cgm/image.hpp"
#include "cgm/trimap.hpp"

namespace cgm {

/// End-to-end orchestration: base prediction -> confidence trimap ->
/// refinement -> final map.

/// How the final map is assembled. RefinerFull hands the refiner the whole
/// output; BandOnly keeps hard 0/1 on confident trimap regions and gives the
/// refiner authority over the unknown band only.
enum class CompositePolicy { RefinerFull, BandOnly };

CompositePolicy parse_policy(const std::string& name); // "refiner-full" | "band-only"
std::string policy_name(CompositePolicy policy);

struct PipelineResult {
    ProbabilityMap base_prob;
    Trimap trimap;
    ProbabilityMap refined_prob;
    ProbabilityMap final_prob;
};

/// Base stage: image -> logits.
using BaseFn = std::function<LogitMap(const Image&)>;
/// Refinement stage: image, trimap and base probabilities -> refined map.
/// Learned refiners may ignore the base probabilities.
using RefinerFn = std::function<ProbabilityMap(const Image&, const Trimap&, const ProbabilityMap&)>;

/// Runs the three stages in order. The image must already be at the working
/// resolution. Stage failures are rethrown with a stage label.
PipelineResult run_pipeline(const Image& img, const BaseFn& base, const RefinerFn& refiner,
                            const ThresholdPair& thresholds = ThresholdPair(),
                            CompositePolicy policy = CompositePolicy::BandOnly);

/// Deterministic non-learned refiner: confident trimap regions pass through
/// as 0/1; unknown-band pixels take alpha from an edge-aware guided smoothing
/// of the confident labels (grayscale image guidance, box radius 8,
/// regularization 1e-4), clamped to [0,1].
ProbabilityMap heuristic_refiner(const Image& img, const Trimap& trimap,
                                 const ProbabilityMap& base_prob);

/// Final-map assembly per policy: RefinerFull returns refined unchanged;
/// BandOnly forces 1 on trimap 255, 0 on trimap 0 and refined on 128.
ProbabilityMap composite(const ProbabilityMap& base_prob, const ProbabilityMap& refined_prob,
                         const Trimap& trimap, CompositePolicy policy);

/// Persists the four stage maps as PNGs (<stem>_base/_trimap/_refined/_final)
/// plus a JSON sidecar with thresholds and policy. Probability maps are
/// 8-bit by default; sixteen_bit raises their confidence resolution.
void save_pipeline_result(const PipelineResult& result, const std::string& directory,
                          const std::string& stem, const ThresholdPair& thresholds,
                          CompositePolicy policy, bool sixteen_bit = false);

} // namespace cgm
