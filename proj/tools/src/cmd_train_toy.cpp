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

#include <cmath>
#include <filesystem>
#include <iostream>

#include "cgm/checkpoint.hpp"
#include "cgm/datasets.hpp"
#include "cgm/errors.hpp"
#include "cgm/losses.hpp"
#include "cgm/report.hpp"
#include "cgm/toynets.hpp"
#include "cgmcli/commands.hpp"
#include "common.hpp"

namespace fs = std::filesystem;

namespace cgmcli {

namespace {

std::map<std::string, std::string> resolved_config(const TrainToyOptions& opt) {
    return {
        {"command", "train-toy"},
        {"out", opt.out_dir},
        {"seed", std::to_string(opt.seed)},
        {"size", std::to_string(opt.size)},
        {"steps", std::to_string(opt.steps)},
        {"count", std::to_string(opt.count)},
        {"family", opt.family},
        {"channels", std::to_string(opt.channels)},
        {"depth", std::to_string(opt.depth)},
        {"lr", cgm::format_double(opt.lr)},
        {"noise", cgm::format_double(opt.noise)},
        {"resume", opt.resume ? "true" : "false"},
    };
}

void save_net_checkpoint(const std::string& path, const cgm::ToyNet& net,
                         const cgm::AdamOptimizer& adam, std::uint64_t step) {
    cgm::Checkpoint ckpt;
    ckpt.step = step;
    ckpt.tensors = net.graph.export_params();
    for (auto& [name, tensor] : adam.export_state(net.graph)) {
        ckpt.tensors[name] = std::move(tensor);
    }
    cgm::save_checkpoint(ckpt, path);
}

std::uint64_t maybe_resume(const std::string& path, cgm::ToyNet& net, cgm::AdamOptimizer& adam) {
    const cgm::Checkpoint ckpt = cgm::load_checkpoint(path);
    std::map<std::string, cgm::Tensor> params;
    for (const auto& [name, tensor] : ckpt.tensors) {
        if (name.rfind("adam.", 0) != 0) params[name] = tensor;
    }
    net.graph.import_params(params);
    adam.import_state(net.graph, ckpt.tensors, static_cast<long>(ckpt.step));
    return ckpt.step;
}

cgm::Tensor seed_from(const cgm::LogitMap& grad) {
    return cgm::Tensor::from_logits(grad);
}

} // namespace

void cmd_train_toy(const TrainToyOptions& opt) {
    ensure_dir(opt.out_dir);
    const auto config = resolved_config(opt);

    cgm::SynthSpec spec;
    spec.seed = opt.seed;
    spec.count = opt.count;
    spec.size = opt.size;
    spec.family = cgm::parse_shape_family(opt.family);
    spec.background_noise = opt.noise;
    spec.foreground_noise = opt.noise;
    const auto data = cgm::generate_synthetic(spec);

    cgm::ToyNetConfig net_cfg;
    net_cfg.channels = opt.channels;
    net_cfg.depth = opt.depth;
    net_cfg.input_size = opt.size;

    const std::string base_ckpt = (fs::path(opt.out_dir) / "base.ckpt").string();
    const std::string refiner_ckpt = (fs::path(opt.out_dir) / "refiner.ckpt").string();

    // ---- Phase A: base network on the combined multi-scale loss ----
    cgm::ToyNet base = cgm::build_toy_base(net_cfg, opt.seed);
    cgm::AdamOptimizer base_adam(opt.lr);
    std::uint64_t base_start = 0;
    if (opt.resume && fs::exists(base_ckpt)) {
        base_start = maybe_resume(base_ckpt, base, base_adam);
    }

    std::string base_csv = cgm::config_header(config);
    base_csv += cgm::csv_row({"step", "loss"});
    for (std::uint64_t step = base_start; step < static_cast<std::uint64_t>(opt.steps); ++step) {
        const auto& pair = data[step % data.size()];
        base.graph.feed(base.input, cgm::Tensor::from_image(pair.image));
        base.graph.forward();
        const cgm::MultiScaleOutputs ms = cgm::collect_multi_scale(base, pair.mask);
        const cgm::CombinedLoss loss = cgm::combined_loss(ms);
        if (!std::isfinite(loss.value)) {
            save_net_checkpoint(base_ckpt, base, base_adam, step);
            write_text_file((fs::path(opt.out_dir) / "base_loss.csv").string(), base_csv);
            throw cgm::NumericError("train-toy: base loss diverged at step " + std::to_string(step) +
                                    "; last good checkpoint kept");
        }
        base_csv += cgm::csv_row({std::to_string(step), cgm::format_double(loss.value)});

        std::vector<std::pair<cgm::NodeId, cgm::Tensor>> seeds;
        for (std::size_t i = 0; i < base.local_heads.size(); ++i) {
            seeds.emplace_back(base.local_heads[i], seed_from(loss.local_grads[i]));
        }
        for (std::size_t i = 0; i < base.global_heads.size(); ++i) {
            seeds.emplace_back(base.global_heads[i], seed_from(loss.global_grads[i]));
        }
        for (std::size_t i = 0; i < base.token_heads.size(); ++i) {
            seeds.emplace_back(base.token_heads[i], seed_from(loss.token_grads[i]));
        }
        base.graph.zero_grad();
        base.graph.backward(seeds);
        base_adam.step(base.graph);
    }
    save_net_checkpoint(base_ckpt, base, base_adam, static_cast<std::uint64_t>(opt.steps));
    write_text_file((fs::path(opt.out_dir) / "base_loss.csv").string(), base_csv);

    // ---- Phase B: refiner on the structure loss of its output ----
    cgm::ToyNet refiner = cgm::build_toy_refiner(net_cfg, opt.seed ^ 0x9E3779B97F4A7C15ULL);
    cgm::AdamOptimizer refiner_adam(opt.lr);
    std::uint64_t refiner_start = 0;
    if (opt.resume && fs::exists(refiner_ckpt)) {
        refiner_start = maybe_resume(refiner_ckpt, refiner, refiner_adam);
    }

    std::string refiner_csv = cgm::config_header(config);
    refiner_csv += cgm::csv_row({"step", "loss"});
    for (std::uint64_t step = refiner_start; step < static_cast<std::uint64_t>(opt.steps); ++step) {
        const auto& pair = data[step % data.size()];
        const cgm::LogitMap base_logits = cgm::predict_base(base, pair.image);
        const cgm::Trimap trimap = cgm::generate_trimap(base_logits);
        const cgm::LogitMap refined = cgm::predict_refiner(refiner, pair.image, trimap);
        const cgm::LossBreakdown loss = cgm::structure_loss(refined, pair.mask);
        if (!std::isfinite(loss.total)) {
            save_net_checkpoint(refiner_ckpt, refiner, refiner_adam, step);
            write_text_file((fs::path(opt.out_dir) / "refiner_loss.csv").string(), refiner_csv);
            throw cgm::NumericError("train-toy: refiner loss diverged at step " +
                                    std::to_string(step) + "; last good checkpoint kept");
        }
        refiner_csv += cgm::csv_row({std::to_string(step), cgm::format_double(loss.total)});

        refiner.graph.zero_grad();
        refiner.graph.backward({{refiner.final_logits, seed_from(loss.grad)}});
        refiner_adam.step(refiner.graph);
    }
    save_net_checkpoint(refiner_ckpt, refiner, refiner_adam, static_cast<std::uint64_t>(opt.steps));
    write_text_file((fs::path(opt.out_dir) / "refiner_loss.csv").string(), refiner_csv);

    std::cout << "train-toy: wrote " << base_ckpt << ", " << refiner_ckpt << "\n";
}

} // namespace cgmcli
