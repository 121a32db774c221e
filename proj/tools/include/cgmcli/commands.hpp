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
#include <string>

namespace cgmcli {

/// Process exit codes: distinct classes so scripts can tell a bad flag from
/// a bad file from a numeric blow-up.
enum ExitCode : int {
    kOk = 0,
    kUnexpected = 1,
    kConfigError = 2,
    kIoError = 3,
    kNumericError = 4,
};

/// Batch evaluation: prediction PNGs vs GT PNGs matched by stem. Writes
/// per_image.csv (one row per id, nine metric columns) and aggregate.md.
struct EvalOptions {
    std::string pred_dir;
    std::string gt_dir;
    std::string out_dir;
    double threshold = 0.5;
    int jobs = 1;
};
void cmd_eval(const EvalOptions& opt);

/// Trimap generation for a directory of prediction PNGs. Inputs are
/// interpreted as probabilities (value/scale) or, with logits_input, mapped
/// through the inverse sigmoid (clamped to +/-40) so the logit path of the
/// generator is exercised. Writes one {0,128,255} PNG per input plus
/// band_stats.csv.
struct TrimapOptions {
    std::string pred_dir;
    std::string out_dir;
    double t_low = 0.05;
    double t_high = 0.95;
    bool logits_input = false;
};
void cmd_trimap(const TrimapOptions& opt);

/// Pipeline refinement over a directory of base prediction PNGs: confidence
/// trimap, heuristic refiner, composite per policy. Persists the four stage
/// maps per image plus a JSON sidecar of thresholds/policy.
struct RefineOptions {
    std::string pred_dir;
    std::string im_dir; // optional; predictions guide themselves when empty
    std::string out_dir;
    double t_low = 0.05;
    double t_high = 0.95;
    std::string policy = "band-only";
    bool sixteen_bit = false; // 16-bit probability PNGs for finer resolution
};
void cmd_refine(const RefineOptions& opt);

/// Toy training on synthetic data: base network first (combined multi-scale
/// loss), then the refiner (structure loss on its output). Emits per-step
/// loss CSVs and checkpoints; a fixed seed reproduces the curves bit for bit.
struct TrainToyOptions {
    std::string out_dir;
    std::uint64_t seed = 7;
    int size = 64;
    int steps = 200;
    int count = 16;
    std::string family = "disks";
    int channels = 8;
    int depth = 2;
    double lr = 2e-3;
    double noise = 0.10;
    bool resume = false;
};
void cmd_train_toy(const TrainToyOptions& opt);

/// Threshold ablation: runs the trimap + heuristic-refiner pipeline at the
/// seven standard band settings under both composite policies and reports
/// MAE/Dice/IoU/BER/Acc plus the unknown-band fraction per row. An optional
/// degenerate pair (0.5-eps, 0.5+eps) can be appended.
struct AblateOptions {
    std::string pred_dir;
    std::string gt_dir;
    std::string im_dir; // optional; predictions guide themselves when empty
    std::string out_dir;
    double threshold = 0.5;
    double degenerate_eps = 0.0; // 0 disables the extra row
    int jobs = 1;
};
void cmd_ablate(const AblateOptions& opt);

} // namespace cgmcli
