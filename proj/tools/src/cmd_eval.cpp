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
#include <optional>
#include <thread>

#include "cgm/metrics.hpp"
#include "cgm/png_io.hpp"
#include "cgm/report.hpp"
#include "cgmcli/commands.hpp"
#include "common.hpp"

namespace cgmcli {

namespace {

std::map<std::string, std::string> resolved_config(const EvalOptions& opt) {
    return {
        {"command", "eval"},
        {"pred", opt.pred_dir},
        {"gt", opt.gt_dir},
        {"out", opt.out_dir},
        {"threshold", cgm::format_double(opt.threshold)},
        {"jobs", std::to_string(opt.jobs)},
    };
}

} // namespace

void cmd_eval(const EvalOptions& opt) {
    std::vector<std::string> unmatched;
    const auto stems = match_stems(opt.pred_dir, opt.gt_dir, &unmatched);
    for (const auto& s : unmatched) {
        std::cerr << "eval: unmatched stem '" << s << "'\n";
    }
    if (stems.empty()) {
        throw cgm::IoError("eval: no matching prediction/GT pairs between " + opt.pred_dir +
                           " and " + opt.gt_dir);
    }
    ensure_dir(opt.out_dir);

    struct Row {
        std::optional<cgm::MetricReport> report; // empty for degenerate pairs
    };
    std::vector<Row> rows(stems.size());
    std::vector<std::string> failures(stems.size());

    auto process = [&](std::size_t i) {
        const std::string pred_path = png_path(opt.pred_dir, stems[i]);
        const std::string gt_path = png_path(opt.gt_dir, stems[i]);
        try {
            const cgm::ProbabilityMap q = cgm::load_probability(pred_path);
            const cgm::BinaryMask y = cgm::load_mask(gt_path);
            if (q.height() != y.height() || q.width() != y.width()) {
                throw cgm::IoError("size mismatch between " + pred_path + " and " + gt_path);
            }
            if (y.foreground_count() == 0) {
                return; // degenerate, excluded from aggregation
            }
            rows[i].report = cgm::metric_report(q, y, opt.threshold);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    };

    const int workers = std::max(1, opt.jobs);
    if (workers == 1) {
        for (std::size_t i = 0; i < stems.size(); ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t pool_size = std::min<std::size_t>(workers, stems.size());
        for (std::size_t t = 0; t < pool_size; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= stems.size()) return;
                    process(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < stems.size(); ++i) {
        if (!failures[i].empty()) {
            std::cerr << "eval: " << stems[i] << ": " << failures[i] << "\n";
            throw cgm::IoError("eval: failed to process '" + stems[i] + "': " + failures[i]);
        }
    }

    const auto config = resolved_config(opt);
    std::string csv = cgm::config_header(config);
    csv += cgm::csv_row({"id", "max_f", "weighted_f", "e_measure", "s_measure", "mae", "dice", "iou",
                         "ber", "acc"});
    std::size_t evaluated = 0, excluded = 0;
    cgm::MetricReport sum;
    for (std::size_t i = 0; i < stems.size(); ++i) {
        if (!rows[i].report) {
            ++excluded;
            std::cerr << "eval: excluded degenerate pair (empty GT foreground): " << stems[i] << "\n";
            continue;
        }
        const cgm::MetricReport& r = *rows[i].report;
        csv += cgm::csv_row({stems[i], cgm::format_double(r.max_f), cgm::format_double(r.weighted_f),
                             cgm::format_double(r.e_measure), cgm::format_double(r.s_measure),
                             cgm::format_double(r.mae), cgm::format_double(r.dice),
                             cgm::format_double(r.iou), cgm::format_double(r.ber),
                             cgm::format_double(r.acc)});
        ++evaluated;
        sum.max_f += r.max_f;
        sum.weighted_f += r.weighted_f;
        sum.e_measure += r.e_measure;
        sum.s_measure += r.s_measure;
        sum.mae += r.mae;
        sum.dice += r.dice;
        sum.iou += r.iou;
        sum.ber += r.ber;
        sum.acc += r.acc;
    }
    if (evaluated == 0) {
        throw cgm::IoError("eval: every pair was degenerate (empty GT foreground)");
    }
    write_text_file((std::filesystem::path(opt.out_dir) / "per_image.csv").string(), csv);

    const double n = static_cast<double>(evaluated);
    cgm::MarkdownTable table;
    table.header = {"$F_\\beta^{max}$", "$F_\\beta^\\omega$", "$E_\\phi^m$", "$S_m$",
                    "MAE",              "Dice",               "IoU",         "BER",
                    "Acc"};
    table.rows.push_back({cgm::format_fixed(sum.max_f / n, 4), cgm::format_fixed(sum.weighted_f / n, 4),
                          cgm::format_fixed(sum.e_measure / n, 4),
                          cgm::format_fixed(sum.s_measure / n, 4), cgm::format_fixed(sum.mae / n, 4),
                          cgm::format_fixed(sum.dice / n, 4), cgm::format_fixed(sum.iou / n, 4),
                          cgm::format_fixed(sum.ber / n, 4), cgm::format_fixed(sum.acc / n, 4)});

    std::string md = "# Evaluation\n\n```\n" + cgm::config_header(config) + "```\n\n";
    md += "Pairs evaluated: " + std::to_string(evaluated) +
          ", excluded (empty GT): " + std::to_string(excluded) + "\n\n";
    md += table.render();
    write_text_file((std::filesystem::path(opt.out_dir) / "aggregate.md").string(), md);
}

} // namespace cgmcli
