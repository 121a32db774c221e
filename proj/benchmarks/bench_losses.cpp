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

#include <benchmark/benchmark.h>

#include "cgm/losses.hpp"
#include "cgm/rng.hpp"

namespace {

cgm::LogitMap make_logits(int n, std::uint64_t seed) {
    cgm::Rng rng(seed);
    std::vector<float> data(static_cast<std::size_t>(n) * n);
    for (float& v : data) v = static_cast<float>(rng.uniform(-4.0, 4.0));
    return cgm::LogitMap(n, n, std::move(data));
}

cgm::BinaryMask make_mask(int n, std::uint64_t seed) {
    cgm::Rng rng(seed);
    std::vector<std::uint8_t> data(static_cast<std::size_t>(n) * n, 0);
    const double cy = n / 2.0, cx = n / 2.0, r = n / 3.0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= r * r) {
                data[static_cast<std::size_t>(y) * n + x] = 1;
            }
        }
    }
    return cgm::BinaryMask(n, n, std::move(data));
}

void BM_BoundaryWeightMap(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto mask = make_mask(n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cgm::boundary_weight_map(mask));
    }
    state.SetComplexityN(n * n);
}
BENCHMARK(BM_BoundaryWeightMap)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void BM_StructureLoss(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto logits = make_logits(n, 2);
    const auto mask = make_mask(n, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cgm::structure_loss(logits, mask));
    }
    state.SetComplexityN(n * n);
}
BENCHMARK(BM_StructureLoss)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_SsimLoss(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto probs = cgm::sigmoid_map(make_logits(n, 4));
    const auto mask = make_mask(n, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cgm::ssim_loss(probs, mask));
    }
    state.SetComplexityN(n * n);
}
BENCHMARK(BM_SsimLoss)->Arg(64)->Arg(128)->Arg(256)->Complexity();

} // namespace
