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

#include "cgm/metrics.hpp"
#include "cgm/rng.hpp"

namespace {

struct Fixture {
    cgm::ProbabilityMap q;
    cgm::BinaryMask y;
};

Fixture make_fixture(int n) {
    cgm::Rng rng(7);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * n, 0);
    const double cy = n / 2.0, cx = n / 2.0, r = n / 3.0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= r * r) {
                mask[static_cast<std::size_t>(y) * n + x] = 1;
            }
        }
    }
    std::vector<float> probs(mask.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = static_cast<float>(std::clamp(mask[i] * 0.8 + rng.uniform(0.0, 0.2), 0.0, 1.0));
    }
    return Fixture{cgm::ProbabilityMap(n, n, std::move(probs)), cgm::BinaryMask(n, n, std::move(mask))};
}

void BM_MaxF(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cgm::max_f(f.q, f.y));
}
BENCHMARK(BM_MaxF)->Arg(64)->Arg(256)->Arg(1024);

void BM_WeightedF(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cgm::weighted_f(f.q, f.y));
}
BENCHMARK(BM_WeightedF)->Arg(64)->Arg(256)->Arg(1024);

void BM_EMeasure(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cgm::e_measure(f.q, f.y));
}
BENCHMARK(BM_EMeasure)->Arg(64)->Arg(256)->Arg(1024);

void BM_SMeasure(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cgm::s_measure(f.q, f.y));
}
BENCHMARK(BM_SMeasure)->Arg(64)->Arg(256)->Arg(1024);

void BM_FullReport(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cgm::metric_report(f.q, f.y));
}
BENCHMARK(BM_FullReport)->Arg(64)->Arg(256);

} // namespace
