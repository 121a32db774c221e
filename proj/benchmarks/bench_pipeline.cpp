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

#include "cgm/datasets.hpp"
#include "cgm/pipeline.hpp"
#include "cgm/toynets.hpp"
#include "cgm/trimap.hpp"

namespace {

void BM_GenerateTrimap(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    cgm::Rng rng(3);
    std::vector<float> logits(static_cast<std::size_t>(n) * n);
    for (float& v : logits) v = static_cast<float>(rng.uniform(-8.0, 8.0));
    const cgm::LogitMap map(n, n, std::move(logits));
    for (auto _ : state) benchmark::DoNotOptimize(cgm::generate_trimap(map));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_GenerateTrimap)->Arg(64)->Arg(256)->Arg(1024);

void BM_HeuristicRefiner(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    cgm::SynthSpec spec;
    spec.size = std::max(n, 32);
    spec.count = 1;
    const auto pair = cgm::generate_synthetic(spec)[0];
    std::vector<float> logits(pair.mask.data().size());
    cgm::Rng rng(5);
    for (std::size_t i = 0; i < logits.size(); ++i) {
        logits[i] = static_cast<float>((pair.mask.data()[i] ? 3.0 : -3.0) + rng.uniform(-2.0, 2.0));
    }
    const cgm::LogitMap base_logits(spec.size, spec.size, std::move(logits));
    const auto base_prob = cgm::sigmoid_map(base_logits);
    const auto trimap = cgm::generate_trimap(base_logits);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cgm::heuristic_refiner(pair.image, trimap, base_prob));
    }
}
BENCHMARK(BM_HeuristicRefiner)->Arg(64)->Arg(256)->Arg(1024);

void BM_ToyBaseForward(benchmark::State& state) {
    cgm::ToyNetConfig cfg;
    cfg.input_size = static_cast<int>(state.range(0));
    cgm::ToyNet net = cgm::build_toy_base(cfg, 1);
    const cgm::Image img = cgm::Image::constant(cfg.input_size, cfg.input_size, 0.4f, 0.5f, 0.6f);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cgm::predict_base(net, img));
    }
}
BENCHMARK(BM_ToyBaseForward)->Arg(64)->Arg(128);

} // namespace

BENCHMARK_MAIN();
