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

#include "cgm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cgm/errors.hpp"
#include "cgm/png_io.hpp"

namespace cgm {

CompositePolicy parse_policy(const std::string& name) {
    if (name == "refiner-full") return CompositePolicy::RefinerFull;
    if (name == "band-only") return CompositePolicy::BandOnly;
    throw std::invalid_argument("unknown policy: " + name + " (expected refiner-full|band-only)");
}

std::string policy_name(CompositePolicy policy) {
    return policy == CompositePolicy::RefinerFull ? "refiner-full" : "band-only";
}

namespace {

// Normalized box sums with valid-count normalization via prefix sums.
class BoxMean {
public:
    BoxMean(int h, int w, int radius) : h_(h), w_(w), r_(radius) {}

    std::vector<double> operator()(const std::vector<double>& in) const {
        std::vector<double> row(static_cast<std::size_t>(h_) * w_);
        std::vector<double> prefix(w_ + 1);
        for (int i = 0; i < h_; ++i) {
            prefix[0] = 0.0;
            for (int j = 0; j < w_; ++j) {
                prefix[j + 1] = prefix[j] + in[static_cast<std::size_t>(i) * w_ + j];
            }
            for (int j = 0; j < w_; ++j) {
                const int lo = std::max(0, j - r_);
                const int hi = std::min(w_ - 1, j + r_);
                row[static_cast<std::size_t>(i) * w_ + j] = prefix[hi + 1] - prefix[lo];
            }
        }
        std::vector<double> out(static_cast<std::size_t>(h_) * w_);
        std::vector<double> col_prefix(h_ + 1);
        for (int j = 0; j < w_; ++j) {
            col_prefix[0] = 0.0;
            for (int i = 0; i < h_; ++i) {
                col_prefix[i + 1] = col_prefix[i] + row[static_cast<std::size_t>(i) * w_ + j];
            }
            for (int i = 0; i < h_; ++i) {
                const int lo = std::max(0, i - r_);
                const int hi = std::min(h_ - 1, i + r_);
                const int count = (hi - lo + 1) * (std::min(w_ - 1, j + r_) - std::max(0, j - r_) + 1);
                out[static_cast<std::size_t>(i) * w_ + j] =
                    (col_prefix[hi + 1] - col_prefix[lo]) / count;
            }
        }
        return out;
    }

private:
    int h_, w_, r_;
};

} // namespace

ProbabilityMap heuristic_refiner(const Image& img, const Trimap& trimap,
                                 const ProbabilityMap& base_prob) {
    const int h = trimap.height();
    const int w = trimap.width();
    if (img.height() != h || img.width() != w || base_prob.height() != h || base_prob.width() != w) {
        throw std::invalid_argument("heuristic_refiner: shape mismatch");
    }

    constexpr int kRadius = 8;
    constexpr double kEps = 1e-4;
    const std::size_t n = static_cast<std::size_t>(h) * w;

    // Guidance: grayscale image. Signal: confident labels, with the base
    // probability seeding the unknown band.
    std::vector<double> guide(n), signal(n);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            guide[i] = (img.at(y, x, 0) + img.at(y, x, 1) + img.at(y, x, 2)) / 3.0;
            const std::uint8_t t = trimap.at(y, x);
            if (t == Trimap::kForeground) {
                signal[i] = 1.0;
            } else if (t == Trimap::kBackground) {
                signal[i] = 0.0;
            } else {
                signal[i] = base_prob.at(y, x);
            }
        }
    }

    // Guided filter (box window, scalar guidance).
    const BoxMean box(h, w, kRadius);
    std::vector<double> gp(n), gg(n);
    for (std::size_t i = 0; i < n; ++i) {
        gp[i] = guide[i] * signal[i];
        gg[i] = guide[i] * guide[i];
    }
    const auto mean_g = box(guide);
    const auto mean_p = box(signal);
    const auto mean_gp = box(gp);
    const auto mean_gg = box(gg);

    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double var = mean_gg[i] - mean_g[i] * mean_g[i];
        const double cov = mean_gp[i] - mean_g[i] * mean_p[i];
        a[i] = cov / (var + kEps);
        b[i] = mean_p[i] - a[i] * mean_g[i];
    }
    const auto mean_a = box(a);
    const auto mean_b = box(b);

    std::vector<float> out(n);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const std::uint8_t t = trimap.at(y, x);
            if (t == Trimap::kForeground) {
                out[i] = 1.0f;
            } else if (t == Trimap::kBackground) {
                out[i] = 0.0f;
            } else {
                const double alpha = mean_a[i] * guide[i] + mean_b[i];
                out[i] = static_cast<float>(std::clamp(alpha, 0.0, 1.0));
            }
        }
    }
    return ProbabilityMap(h, w, std::move(out));
}

ProbabilityMap composite(const ProbabilityMap& base_prob, const ProbabilityMap& refined_prob,
                         const Trimap& trimap, CompositePolicy policy) {
    const int h = trimap.height();
    const int w = trimap.width();
    if (base_prob.height() != h || base_prob.width() != w || refined_prob.height() != h ||
        refined_prob.width() != w) {
        throw std::invalid_argument("composite: shape mismatch");
    }
    if (policy == CompositePolicy::RefinerFull) {
        return refined_prob;
    }
    std::vector<float> out(refined_prob.data().begin(), refined_prob.data().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint8_t t = trimap.data()[i];
        if (t == Trimap::kForeground) {
            out[i] = 1.0f;
        } else if (t == Trimap::kBackground) {
            out[i] = 0.0f;
        }
    }
    return ProbabilityMap(h, w, std::move(out));
}

PipelineResult run_pipeline(const Image& img, const BaseFn& base, const RefinerFn& refiner,
                            const ThresholdPair& thresholds, CompositePolicy policy) {
    auto staged = [](const char* stage, auto&& fn) {
        try {
            return fn();
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("pipeline stage '") + stage + "': " + e.what());
        }
    };

    LogitMap logits = staged("base", [&] { return base(img); });
    ProbabilityMap base_prob = sigmoid_map(logits);
    Trimap trimap = staged("trimap", [&] { return generate_trimap(logits, thresholds); });
    ProbabilityMap refined = staged("refiner", [&] { return refiner(img, trimap, base_prob); });
    ProbabilityMap final_prob = composite(base_prob, refined, trimap, policy);
    return PipelineResult{std::move(base_prob), std::move(trimap), std::move(refined),
                          std::move(final_prob)};
}

void save_pipeline_result(const PipelineResult& result, const std::string& directory,
                          const std::string& stem, const ThresholdPair& thresholds,
                          CompositePolicy policy, bool sixteen_bit) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    std::error_code ec;
    fs::create_directories(dir, ec);

    save_probability(result.base_prob, (dir / (stem + "_base.png")).string(), sixteen_bit);
    save_trimap(result.trimap, (dir / (stem + "_trimap.png")).string());
    save_probability(result.refined_prob, (dir / (stem + "_refined.png")).string(), sixteen_bit);
    save_probability(result.final_prob, (dir / (stem + "_final.png")).string(), sixteen_bit);

    nlohmann::json sidecar;
    sidecar["t_low"] = thresholds.low();
    sidecar["t_high"] = thresholds.high();
    sidecar["policy"] = policy_name(policy);
    sidecar["maps"] = {stem + "_base.png", stem + "_trimap.png", stem + "_refined.png",
                       stem + "_final.png"};
    const fs::path json_path = dir / (stem + ".json");
    std::ofstream out(json_path);
    if (!out) throw IoError("cannot write sidecar: " + json_path.string());
    out << sidecar.dump(2) << "\n";
}

} // namespace cgm
