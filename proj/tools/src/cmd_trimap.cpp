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

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "cgm/png_io.hpp"
#include "cgm/report.hpp"
#include "cgm/trimap.hpp"
#include "cgmcli/commands.hpp"
#include "common.hpp"

namespace cgmcli {

namespace {

// Inverse sigmoid with saturation so 0 and 1 stay finite.
cgm::LogitMap to_logits(const cgm::ProbabilityMap& q) {
    std::vector<float> data(q.data().size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = std::clamp(static_cast<double>(q.data()[i]), 0.0, 1.0);
        double logit;
        if (p <= 0.0) {
            logit = -40.0;
        } else if (p >= 1.0) {
            logit = 40.0;
        } else {
            logit = std::clamp(std::log(p / (1.0 - p)), -40.0, 40.0);
        }
        data[i] = static_cast<float>(logit);
    }
    return cgm::LogitMap(q.height(), q.width(), std::move(data));
}

} // namespace

void cmd_trimap(const TrimapOptions& opt) {
    const cgm::ThresholdPair thresholds(opt.t_low, opt.t_high);
    const auto stems = list_png_stems(opt.pred_dir);
    if (stems.empty()) {
        throw cgm::IoError("trimap: no PNG predictions under " + opt.pred_dir);
    }
    ensure_dir(opt.out_dir);

    const std::map<std::string, std::string> config = {
        {"command", "trimap"},
        {"pred", opt.pred_dir},
        {"out", opt.out_dir},
        {"t-low", cgm::format_double(opt.t_low)},
        {"t-high", cgm::format_double(opt.t_high)},
        {"input-kind", opt.logits_input ? "logits" : "probabilities"},
    };
    std::string csv = cgm::config_header(config);
    csv += cgm::csv_row({"id", "background", "unknown", "foreground"});

    for (const std::string& stem : stems) {
        const cgm::ProbabilityMap q = cgm::load_probability(png_path(opt.pred_dir, stem));
        const cgm::Trimap trimap = opt.logits_input
                                       ? cgm::generate_trimap(to_logits(q), thresholds)
                                       : cgm::generate_trimap(q, thresholds);
        cgm::save_trimap(trimap, png_path(opt.out_dir, stem));
        const cgm::RegionFractions f = cgm::region_fractions(trimap);
        csv += cgm::csv_row({stem, cgm::format_double(f.background), cgm::format_double(f.unknown),
                             cgm::format_double(f.foreground)});
    }
    write_text_file((std::filesystem::path(opt.out_dir) / "band_stats.csv").string(), csv);
}

} // namespace cgmcli
