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

#include <atomic>
#include <filesystem>
#include <iostream>
#include <thread>

#include "cgm/metrics.hpp"
#include "cgm/pipeline.hpp"
#include "cgm/png_io.hpp"
#include "cgm/report.hpp"
#include "cgmcli/commands.hpp"
#include "common.hpp"

namespace fs = std::filesystem;

namespace cgmcli {

namespace {

struct RowStats {
    double mae = 0.0, dice = 0.0, iou = 0.0, ber = 0.0, acc = 0.0, unknown = 0.0;

    void add(const RowStats& o) {
        mae += o.mae;
        dice += o.dice;
        iou += o.iou;
        ber += o.ber;
        acc += o.acc;
        unknown += o.unknown;
    }
};

cgm::Image guidance_from(const cgm::ProbabilityMap& q) {
    std::vector<float> data(q.data().size() * 3);
    for (std::size_t i = 0; i < q.data().size(); ++i) {
        data[3 * i] = q.data()[i];
        data[3 * i + 1] = q.data()[i];
        data[3 * i + 2] = q.data()[i];
    }
    return cgm::Image(q.height(), q.width(), std::move(data));
}

} // namespace

void cmd_ablate(const AblateOptions& opt) {
    std::vector<std::string> unmatched;
    const auto stems = match_stems(opt.pred_dir, opt.gt_dir, &unmatched);
    for (const auto& s : unmatched) {
        std::cerr << "ablate: unmatched stem '" << s << "'\n";
    }
    if (stems.empty()) {
        throw cgm::IoError("ablate: no matching prediction/GT pairs");
    }
    ensure_dir(opt.out_dir);

    const auto standard_bands = cgm::ablation_thresholds();
    std::vector<cgm::ThresholdPair> bands(standard_bands.begin(), standard_bands.end());
    if (opt.degenerate_eps > 0.0) {
        bands.emplace_back(0.5 - opt.degenerate_eps, 0.5 + opt.degenerate_eps);
    }
    const std::vector<cgm::CompositePolicy> policies = {cgm::CompositePolicy::BandOnly,
                                                        cgm::CompositePolicy::RefinerFull};

    // stats[policy][band]
    std::vector<std::vector<RowStats>> stats(policies.size(), std::vector<RowStats>(bands.size()));
    std::vector<std::vector<RowStats>> per_image(stems.size());

    auto process = [&](std::size_t idx) {
        const cgm::ProbabilityMap q = cgm::load_probability(png_path(opt.pred_dir, stems[idx]));
        const cgm::BinaryMask gt = cgm::load_mask(png_path(opt.gt_dir, stems[idx]));
        if (q.height() != gt.height() || q.width() != gt.width()) {
            throw cgm::IoError("ablate: size mismatch for stem " + stems[idx]);
        }
        const cgm::Image img = opt.im_dir.empty()
                                   ? guidance_from(q)
                                   : cgm::load_image(png_path(opt.im_dir, stems[idx]));
        if (img.height() != q.height() || img.width() != q.width()) {
            throw cgm::IoError("ablate: image size mismatch for stem " + stems[idx]);
        }

        std::vector<RowStats>& out = per_image[idx];
        out.resize(policies.size() * bands.size());
        for (std::size_t b = 0; b < bands.size(); ++b) {
            const cgm::Trimap trimap = cgm::generate_trimap(q, bands[b]);
            const cgm::ProbabilityMap refined = cgm::heuristic_refiner(img, trimap, q);
            const double unknown = cgm::region_fractions(trimap).unknown;
            for (std::size_t p = 0; p < policies.size(); ++p) {
                const cgm::ProbabilityMap final_map = cgm::composite(q, refined, trimap, policies[p]);
                RowStats& r = out[p * bands.size() + b];
                r.mae = cgm::mae(final_map, gt);
                r.dice = cgm::dice(final_map, gt, opt.threshold);
                r.iou = cgm::iou(final_map, gt, opt.threshold);
                r.ber = cgm::ber(final_map, gt, opt.threshold);
                r.acc = cgm::acc(final_map, gt, opt.threshold);
                r.unknown = unknown;
            }
        }
    };

    const int workers = std::max(1, opt.jobs);
    if (workers == 1) {
        for (std::size_t i = 0; i < stems.size(); ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::vector<std::string> errors(stems.size());
        const std::size_t pool_size = std::min<std::size_t>(workers, stems.size());
        for (std::size_t t = 0; t < pool_size; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= stems.size()) return;
                    try {
                        process(i);
                    } catch (const std::exception& e) {
                        errors[i] = e.what();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors) {
            if (!e.empty()) throw cgm::IoError(e);
        }
    }

    for (std::size_t i = 0; i < stems.size(); ++i) {
        for (std::size_t p = 0; p < policies.size(); ++p) {
            for (std::size_t b = 0; b < bands.size(); ++b) {
                stats[p][b].add(per_image[i][p * bands.size() + b]);
            }
        }
    }
    const double n = static_cast<double>(stems.size());

    const std::map<std::string, std::string> config = {
        {"command", "ablate"},
        {"pred", opt.pred_dir},
        {"gt", opt.gt_dir},
        {"im", opt.im_dir.empty() ? "(self-guided)" : opt.im_dir},
        {"out", opt.out_dir},
        {"threshold", cgm::format_double(opt.threshold)},
        {"degenerate-eps", cgm::format_double(opt.degenerate_eps)},
        {"jobs", std::to_string(opt.jobs)},
    };

    std::string csv = cgm::config_header(config);
    csv += cgm::csv_row({"policy", "t_low", "t_high", "mae", "dice", "iou", "ber", "acc",
                         "unknown_fraction", "is_default"});
    std::string md = "# Threshold ablation\n\n```\n" + cgm::config_header(config) + "```\n\n";
    md += "Images: " + std::to_string(stems.size()) + "\n";

    for (std::size_t p = 0; p < policies.size(); ++p) {
        cgm::MarkdownTable table;
        table.header = {"Low", "High", "MAE", "Dice", "IoU", "BER", "Acc", "Unknown"};
        for (std::size_t b = 0; b < bands.size(); ++b) {
            const RowStats& r = stats[p][b];
            const bool is_default = b == static_cast<std::size_t>(cgm::kDefaultAblationIndex);
            csv += cgm::csv_row({cgm::policy_name(policies[p]), cgm::format_double(bands[b].low()),
                                 cgm::format_double(bands[b].high()), cgm::format_double(r.mae / n),
                                 cgm::format_double(r.dice / n), cgm::format_double(r.iou / n),
                                 cgm::format_double(r.ber / n), cgm::format_double(r.acc / n),
                                 cgm::format_double(r.unknown / n), is_default ? "1" : "0"});
            std::string low = cgm::format_double(bands[b].low());
            if (is_default) low += " (default)";
            table.rows.push_back({low, cgm::format_double(bands[b].high()),
                                  cgm::format_fixed(r.mae / n, 4), cgm::format_fixed(r.dice / n, 4),
                                  cgm::format_fixed(r.iou / n, 4), cgm::format_fixed(r.ber / n, 4),
                                  cgm::format_fixed(r.acc / n, 4),
                                  cgm::format_fixed(r.unknown / n, 4)});
        }
        md += "\n## Policy: " + cgm::policy_name(policies[p]) + "\n\n" + table.render();
    }

    write_text_file((fs::path(opt.out_dir) / "ablation.csv").string(), csv);
    write_text_file((fs::path(opt.out_dir) / "ablation.md").string(), md);
}

} // namespace cgmcli
