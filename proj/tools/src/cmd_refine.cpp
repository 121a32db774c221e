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

#include <filesystem>
#include <iostream>

#include "cgm/pipeline.hpp"
#include "cgm/png_io.hpp"
#include "cgm/report.hpp"
#include "cgm/trimap.hpp"
#include "cgmcli/commands.hpp"
#include "common.hpp"

namespace cgmcli {

namespace {

cgm::Image self_guidance(const cgm::ProbabilityMap& q) {
    std::vector<float> data(q.data().size() * 3);
    for (std::size_t i = 0; i < q.data().size(); ++i) {
        data[3 * i] = q.data()[i];
        data[3 * i + 1] = q.data()[i];
        data[3 * i + 2] = q.data()[i];
    }
    return cgm::Image(q.height(), q.width(), std::move(data));
}

} // namespace

void cmd_refine(const RefineOptions& opt) {
    const cgm::ThresholdPair thresholds(opt.t_low, opt.t_high);
    const cgm::CompositePolicy policy = cgm::parse_policy(opt.policy);
    const auto stems = list_png_stems(opt.pred_dir);
    if (stems.empty()) {
        throw cgm::IoError("refine: no PNG predictions under " + opt.pred_dir);
    }
    ensure_dir(opt.out_dir);

    for (const std::string& stem : stems) {
        const cgm::ProbabilityMap base_prob = cgm::load_probability(png_path(opt.pred_dir, stem));
        const cgm::Image img = opt.im_dir.empty() ? self_guidance(base_prob)
                                                  : cgm::load_image(png_path(opt.im_dir, stem));
        if (img.height() != base_prob.height() || img.width() != base_prob.width()) {
            throw cgm::IoError("refine: image size mismatch for stem " + stem);
        }
        const cgm::Trimap trimap = cgm::generate_trimap(base_prob, thresholds);
        const cgm::ProbabilityMap refined = cgm::heuristic_refiner(img, trimap, base_prob);
        const cgm::ProbabilityMap final_map = cgm::composite(base_prob, refined, trimap, policy);
        cgm::save_pipeline_result(cgm::PipelineResult{base_prob, trimap, refined, final_map},
                                  opt.out_dir, stem, thresholds, policy, opt.sixteen_bit);
    }
    std::cout << "refine: wrote " << stems.size() << " result sets to " << opt.out_dir << "\n";
}

} // namespace cgmcli
