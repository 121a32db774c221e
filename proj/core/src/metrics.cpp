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

#include "cgm/metrics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cgm {

namespace {

void check_same_shape(const ProbabilityMap& q, const BinaryMask& y, const char* what) {
    if (q.height() != y.height() || q.width() != y.width()) {
        throw std::invalid_argument(std::string(what) + ": prediction/GT shape mismatch");
    }
}

constexpr int kThresholds = 256;
constexpr double kBeta2MaxF = 0.3;

// Largest k in [0,255] with (double)q >= k/255. Floor arithmetic gives the
// candidate; the exact comparisons settle the boundary.
int threshold_level(double q) {
    int g = static_cast<int>(std::floor(q * 255.0));
    g = std::clamp(g, 0, 255);
    while (g < 255 && q >= static_cast<double>(g + 1) / 255.0) ++g;
    while (g > 0 && q < static_cast<double>(g) / 255.0) --g;
    return g;
}

// Per-threshold confusion via suffix sums of the level histogram.
struct SweepCounts {
    std::array<std::int64_t, kThresholds> tp{};  // foreground pixels with level >= k
    std::array<std::int64_t, kThresholds> pos{}; // pixels predicted positive at threshold k
    std::int64_t fg = 0;
    std::int64_t total = 0;
};

SweepCounts sweep_counts(const ProbabilityMap& q, const BinaryMask& y) {
    SweepCounts c;
    std::array<std::int64_t, kThresholds> hist_fg{};
    std::array<std::int64_t, kThresholds> hist_all{};
    const std::size_t n = q.data().size();
    for (std::size_t i = 0; i < n; ++i) {
        const int level = threshold_level(q.data()[i]);
        hist_all[level] += 1;
        hist_fg[level] += y.data()[i];
        c.fg += y.data()[i];
    }
    c.total = static_cast<std::int64_t>(n);
    std::int64_t run_fg = 0, run_all = 0;
    for (int k = kThresholds - 1; k >= 0; --k) {
        run_fg += hist_fg[k];
        run_all += hist_all[k];
        c.tp[k] = run_fg;
        c.pos[k] = run_all;
    }
    return c;
}

} // namespace

ConfusionCounts confusion_counts(const ProbabilityMap& q, const BinaryMask& y, double threshold) {
    check_same_shape(q, y, "confusion_counts");
    ConfusionCounts c;
    const std::size_t n = q.data().size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool pred = static_cast<double>(q.data()[i]) >= threshold;
        const bool gt = y.data()[i] != 0;
        if (pred && gt) {
            ++c.tp;
        } else if (pred && !gt) {
            ++c.fp;
        } else if (!pred && gt) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

double mae(const ProbabilityMap& q, const BinaryMask& y) {
    check_same_shape(q, y, "mae");
    double sum = 0.0;
    const std::size_t n = q.data().size();
    for (std::size_t i = 0; i < n; ++i) {
        sum += std::abs(static_cast<double>(q.data()[i]) - static_cast<double>(y.data()[i]));
    }
    return sum / static_cast<double>(n);
}

double max_f(const ProbabilityMap& q, const BinaryMask& y) {
    check_same_shape(q, y, "max_f");
    const SweepCounts c = sweep_counts(q, y);
    if (c.fg == 0) {
        throw std::invalid_argument("max_f: GT has no foreground pixels");
    }
    double best = 0.0;
    for (int k = 0; k < kThresholds; ++k) {
        const double tp = static_cast<double>(c.tp[k]);
        const double pos = static_cast<double>(c.pos[k]);
        const double precision = pos > 0.0 ? tp / pos : 0.0;
        const double recall = tp / static_cast<double>(c.fg);
        const double den = kBeta2MaxF * precision + recall;
        const double f = den > 0.0 ? (1.0 + kBeta2MaxF) * precision * recall / den : 0.0;
        best = std::max(best, f);
    }
    return best;
}

namespace {

// --- weighted F-measure machinery -------------------------------------

constexpr std::int64_t kDistInf = std::int64_t{1} << 50;

// Exact squared Euclidean distance transform (distance to the nearest
// foreground pixel), integer arithmetic throughout.
std::vector<std::int64_t> squared_edt(const BinaryMask& fg) {
    const int h = fg.height();
    const int w = fg.width();
    std::vector<std::int64_t> col_dist(static_cast<std::size_t>(h) * w, kDistInf);

    for (int j = 0; j < w; ++j) {
        int last = -1;
        for (int i = 0; i < h; ++i) {
            if (fg.at(i, j)) last = i;
            if (last >= 0) {
                const std::int64_t d = i - last;
                col_dist[static_cast<std::size_t>(i) * w + j] = d * d;
            }
        }
        last = -1;
        for (int i = h - 1; i >= 0; --i) {
            if (fg.at(i, j)) last = i;
            if (last >= 0) {
                const std::int64_t d = last - i;
                auto& cell = col_dist[static_cast<std::size_t>(i) * w + j];
                cell = std::min(cell, d * d);
            }
        }
    }

    // Lower-envelope pass along each row (Felzenszwalb-Huttenlocher).
    std::vector<std::int64_t> out(static_cast<std::size_t>(h) * w);
    std::vector<int> v(w);
    std::vector<double> z(w + 1);
    for (int i = 0; i < h; ++i) {
        const std::int64_t* f = col_dist.data() + static_cast<std::size_t>(i) * w;
        int k = 0;
        v[0] = 0;
        z[0] = -std::numeric_limits<double>::infinity();
        z[1] = std::numeric_limits<double>::infinity();
        for (int x = 1; x < w; ++x) {
            double s;
            for (;;) {
                const int p = v[k];
                s = (static_cast<double>(f[x] - f[p]) + static_cast<double>(x) * x -
                     static_cast<double>(p) * p) /
                    (2.0 * (x - p));
                if (s <= z[k]) {
                    --k;
                } else {
                    break;
                }
            }
            ++k;
            v[k] = x;
            z[k] = s;
            z[k + 1] = std::numeric_limits<double>::infinity();
        }
        k = 0;
        for (int x = 0; x < w; ++x) {
            while (z[k + 1] < x) ++k;
            const std::int64_t dx = x - v[k];
            out[static_cast<std::size_t>(i) * w + x] = dx * dx + f[v[k]];
        }
    }
    return out;
}

std::array<double, 49> wfm_gaussian_kernel() {
    std::array<double, 49> kernel{};
    double sum = 0.0;
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            const double di = i - 3;
            const double dj = j - 3;
            kernel[i * 7 + j] = std::exp(-(di * di + dj * dj) / (2.0 * 25.0));
            sum += kernel[i * 7 + j];
        }
    }
    for (double& k : kernel) k /= sum;
    return kernel;
}

} // namespace

double weighted_f(const ProbabilityMap& q, const BinaryMask& y) {
    check_same_shape(q, y, "weighted_f");
    const int h = q.height();
    const int w = q.width();
    const std::size_t n = q.data().size();
    const std::int64_t nfg = static_cast<std::int64_t>(y.foreground_count());
    if (nfg == 0) {
        throw std::invalid_argument("weighted_f: GT has no foreground pixels");
    }

    std::vector<double> err(n);
    for (std::size_t i = 0; i < n; ++i) {
        err[i] = std::abs(static_cast<double>(q.data()[i]) - static_cast<double>(y.data()[i]));
    }

    // Background errors are read through the nearest foreground pixel, but
    // only within kernel reach (3 px) of a foreground pixel; the nearest such
    // pixel then lies within radius 4, so a bounded window search is exact.
    // Ties resolve to the smallest (row, column).
    std::vector<double> err_t = err;
    constexpr int kSearch = 4;
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            if (y.at(i, j)) continue;
            std::int64_t best = kDistInf;
            int bi = -1, bj = -1;
            for (int di = -kSearch; di <= kSearch; ++di) {
                const int ii = i + di;
                if (ii < 0 || ii >= h) continue;
                for (int dj = -kSearch; dj <= kSearch; ++dj) {
                    const int jj = j + dj;
                    if (jj < 0 || jj >= w) continue;
                    if (!y.at(ii, jj)) continue;
                    const std::int64_t d = static_cast<std::int64_t>(di) * di +
                                           static_cast<std::int64_t>(dj) * dj;
                    if (d < best) {
                        best = d;
                        bi = ii;
                        bj = jj;
                    }
                }
            }
            if (best <= 18) { // a foreground pixel within Chebyshev distance 3 exists
                err_t[static_cast<std::size_t>(i) * w + j] = err[static_cast<std::size_t>(bi) * w + bj];
            }
        }
    }

    // 7x7 sigma-5 Gaussian smoothing with edge replication, so image borders
    // do not deflate the smoothed error field.
    const auto kernel = wfm_gaussian_kernel();
    std::vector<double> smoothed(n, 0.0);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int di = -3; di <= 3; ++di) {
                const int ii = std::clamp(i + di, 0, h - 1);
                for (int dj = -3; dj <= 3; ++dj) {
                    const int jj = std::clamp(j + dj, 0, w - 1);
                    acc += kernel[(di + 3) * 7 + (dj + 3)] * err_t[static_cast<std::size_t>(ii) * w + jj];
                }
            }
            smoothed[static_cast<std::size_t>(i) * w + j] = acc;
        }
    }

    const auto dist2 = squared_edt(y);
    const double decay = std::log(0.5) / 5.0;
    double fg_error = 0.0;
    double bg_error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (y.data()[i]) {
            const double e = std::min(err[i], smoothed[i]);
            fg_error += e;
        } else {
            const double dependency = 2.0 - std::exp(decay * std::sqrt(static_cast<double>(dist2[i])));
            bg_error += err[i] * dependency;
        }
    }

    const double tp_w = static_cast<double>(nfg) - fg_error;
    const double fp_w = bg_error;
    const double recall = 1.0 - fg_error / static_cast<double>(nfg);
    const double precision = (tp_w + fp_w) > 0.0 ? tp_w / (tp_w + fp_w) : 0.0;
    const double den = precision + recall;
    return den > 0.0 ? 2.0 * precision * recall / den : 0.0;
}

namespace {

// Largest m in [0,256] with (double)q >= m/256.
int threshold_level_256(double q) {
    int g = static_cast<int>(std::floor(q * 256.0));
    g = std::clamp(g, 0, 256);
    while (g < 256 && q >= static_cast<double>(g + 1) / 256.0) ++g;
    while (g > 0 && q < static_cast<double>(g) / 256.0) --g;
    return g;
}

} // namespace

double e_measure(const ProbabilityMap& q, const BinaryMask& y) {
    check_same_shape(q, y, "e_measure");

    // Binarization sweep over t = {1,...,256}/256; this grid keeps a binary
    // prediction equal to its GT at every threshold.
    std::array<std::int64_t, 257> hist_fg{};
    std::array<std::int64_t, 257> hist_all{};
    std::int64_t fg = 0;
    const std::size_t n = q.data().size();
    for (std::size_t i = 0; i < n; ++i) {
        const int level = threshold_level_256(q.data()[i]);
        hist_all[level] += 1;
        hist_fg[level] += y.data()[i];
        fg += y.data()[i];
    }
    std::array<std::int64_t, 257> tp_at{};  // foreground pixels with level >= m
    std::array<std::int64_t, 257> pos_at{}; // pixels with level >= m
    std::int64_t run_fg = 0, run_all = 0;
    for (int m = 256; m >= 0; --m) {
        run_fg += hist_fg[m];
        run_all += hist_all[m];
        tp_at[m] = run_fg;
        pos_at[m] = run_all;
    }

    const std::int64_t total_i = static_cast<std::int64_t>(n);
    const double total = static_cast<double>(n);
    const std::int64_t bg = total_i - fg;

    double score_sum = 0.0;
    for (int k = 0; k < kThresholds; ++k) {
        const std::int64_t tp = tp_at[k + 1];
        const std::int64_t pos = pos_at[k + 1];
        const std::int64_t fp = pos - tp;
        double score;
        if (fg == 0) {
            // GT all background: score mean(1 - B).
            score = static_cast<double>(total_i - pos) / total;
        } else if (bg == 0) {
            // GT all foreground: score mean(B).
            score = static_cast<double>(pos) / total;
        } else {
            const double mu_p = static_cast<double>(pos) / total;
            const double mu_y = static_cast<double>(fg) / total;
            // Pixels fall into four groups; the alignment is constant per group.
            const double phi_p[2] = {-mu_p, 1.0 - mu_p};
            const double phi_y[2] = {-mu_y, 1.0 - mu_y};
            const std::int64_t counts[2][2] = {
                {total_i - fg - fp, fp},          // y=0: pred 0, pred 1
                {fg - tp, tp},                    // y=1: pred 0, pred 1
            };
            double acc_score = 0.0;
            for (int gy = 0; gy < 2; ++gy) {
                for (int gp = 0; gp < 2; ++gp) {
                    if (counts[gy][gp] == 0) continue;
                    const double num = 2.0 * phi_p[gp] * phi_y[gy];
                    const double den = phi_p[gp] * phi_p[gp] + phi_y[gy] * phi_y[gy];
                    const double align = num / den; // den > 0: phi_y != 0 here
                    const double enhanced = (align + 1.0) * (align + 1.0) / 4.0;
                    acc_score += static_cast<double>(counts[gy][gp]) * enhanced;
                }
            }
            score = acc_score / total;
        }
        score_sum += score;
    }
    return score_sum / static_cast<double>(kThresholds);
}

namespace {

// Object score 2 x / (x^2 + 1 + sigma_x) over one region (sample std).
double object_score(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    if (n > 1) {
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n - 1);
    }
    const double sd = std::sqrt(var);
    return 2.0 * mean / (mean * mean + 1.0 + sd);
}

// SSIM-style similarity of one region pair with sample (n-1) moments.
double region_similarity(const std::vector<double>& pred, const std::vector<double>& gt) {
    const std::size_t n = pred.size();
    if (n == 0) return 1.0; // empty quadrant carries zero weight
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += pred[i];
        my += gt[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sx = 0.0, sy = 0.0, sxy = 0.0;
    if (n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            sx += (pred[i] - mx) * (pred[i] - mx);
            sy += (gt[i] - my) * (gt[i] - my);
            sxy += (pred[i] - mx) * (gt[i] - my);
        }
        sx /= static_cast<double>(n - 1);
        sy /= static_cast<double>(n - 1);
        sxy /= static_cast<double>(n - 1);
    }
    const double alpha = 4.0 * mx * my * sxy;
    const double beta = (mx * mx + my * my) * (sx + sy);
    if (alpha != 0.0) {
        return alpha / beta; // alpha != 0 implies beta > 0
    }
    return beta == 0.0 ? 1.0 : 0.0;
}

} // namespace

double s_measure(const ProbabilityMap& q, const BinaryMask& y) {
    check_same_shape(q, y, "s_measure");
    const int h = q.height();
    const int w = q.width();
    const std::size_t n = q.data().size();
    const std::int64_t nfg = static_cast<std::int64_t>(y.foreground_count());
    const std::int64_t nbg = static_cast<std::int64_t>(n) - nfg;

    if (nfg == 0) {
        double m = 0.0;
        for (float v : q.data()) m += v;
        return std::clamp(1.0 - m / static_cast<double>(n), 0.0, 1.0);
    }
    if (nbg == 0) {
        double m = 0.0;
        for (float v : q.data()) m += v;
        return std::clamp(m / static_cast<double>(n), 0.0, 1.0);
    }

    // Object term: foreground on q, background on 1-q, count-weighted.
    std::vector<double> fg_vals, bg_vals;
    fg_vals.reserve(nfg);
    bg_vals.reserve(nbg);
    for (std::size_t i = 0; i < n; ++i) {
        if (y.data()[i]) {
            fg_vals.push_back(q.data()[i]);
        } else {
            bg_vals.push_back(1.0 - q.data()[i]);
        }
    }
    const double s_object = (static_cast<double>(nfg) * object_score(fg_vals) +
                             static_cast<double>(nbg) * object_score(bg_vals)) /
                            static_cast<double>(n);

    // Region term: quadrants split at the rounded GT centroid.
    std::int64_t sum_i = 0, sum_j = 0;
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            if (y.at(i, j)) {
                sum_i += i;
                sum_j += j;
            }
        }
    }
    const int cy = static_cast<int>(std::lround(static_cast<double>(sum_i) / static_cast<double>(nfg)));
    const int cx = static_cast<int>(std::lround(static_cast<double>(sum_j) / static_cast<double>(nfg)));

    double region_acc = 0.0;
    for (int quad = 0; quad < 4; ++quad) {
        const int i0 = (quad / 2 == 0) ? 0 : cy + 1;
        const int i1 = (quad / 2 == 0) ? cy : h - 1;
        const int j0 = (quad % 2 == 0) ? 0 : cx + 1;
        const int j1 = (quad % 2 == 0) ? cx : w - 1;
        if (i1 < i0 || j1 < j0) continue;
        std::vector<double> pred, gt;
        pred.reserve(static_cast<std::size_t>(i1 - i0 + 1) * (j1 - j0 + 1));
        gt.reserve(pred.capacity());
        for (int i = i0; i <= i1; ++i) {
            for (int j = j0; j <= j1; ++j) {
                pred.push_back(q.at(i, j));
                gt.push_back(y.at(i, j));
            }
        }
        region_acc += static_cast<double>(pred.size()) * region_similarity(pred, gt);
    }
    const double s_region = region_acc / static_cast<double>(n);

    return std::clamp(0.5 * s_object + 0.5 * s_region, 0.0, 1.0);
}

namespace {

double safe_div(double num, double den, double fallback) {
    return den > 0.0 ? num / den : fallback;
}

} // namespace

double dice(const ProbabilityMap& q, const BinaryMask& y, double threshold) {
    const ConfusionCounts c = confusion_counts(q, y, threshold);
    const double den = static_cast<double>(2 * c.tp + c.fp + c.fn);
    return safe_div(static_cast<double>(2 * c.tp), den, 1.0); // both empty -> 1
}

double iou(const ProbabilityMap& q, const BinaryMask& y, double threshold) {
    const ConfusionCounts c = confusion_counts(q, y, threshold);
    const double den = static_cast<double>(c.tp + c.fp + c.fn);
    return safe_div(static_cast<double>(c.tp), den, 1.0); // both empty -> 1
}

double ber(const ProbabilityMap& q, const BinaryMask& y, double threshold) {
    const ConfusionCounts c = confusion_counts(q, y, threshold);
    const double fn_rate = safe_div(static_cast<double>(c.fn), static_cast<double>(c.tp + c.fn), 0.0);
    const double fp_rate = safe_div(static_cast<double>(c.fp), static_cast<double>(c.tn + c.fp), 0.0);
    return 0.5 * (fn_rate + fp_rate);
}

double acc(const ProbabilityMap& q, const BinaryMask& y, double threshold) {
    const ConfusionCounts c = confusion_counts(q, y, threshold);
    const double n = static_cast<double>(c.tp + c.fp + c.tn + c.fn);
    return static_cast<double>(c.tp + c.tn) / n;
}

MetricReport metric_report(const ProbabilityMap& q, const BinaryMask& y, double threshold) {
    MetricReport r;
    r.max_f = max_f(q, y);
    r.weighted_f = weighted_f(q, y);
    r.e_measure = e_measure(q, y);
    r.s_measure = s_measure(q, y);
    r.mae = mae(q, y);
    r.dice = dice(q, y, threshold);
    r.iou = iou(q, y, threshold);
    r.ber = ber(q, y, threshold);
    r.acc = acc(q, y, threshold);
    return r;
}

DatasetReport evaluate_dataset(const std::vector<std::pair<ProbabilityMap, BinaryMask>>& pairs,
                               double threshold, int jobs) {
    if (pairs.empty()) {
        throw std::invalid_argument("evaluate_dataset: empty pair list");
    }
    const int workers = std::max(1, jobs);

    std::vector<MetricReport> reports(pairs.size());
    std::vector<std::uint8_t> valid(pairs.size(), 0);

    auto process = [&](std::size_t i) {
        const auto& [q, y] = pairs[i];
        if (y.foreground_count() == 0) return;
        reports[i] = metric_report(q, y, threshold);
        valid[i] = 1;
    };

    if (workers == 1 || pairs.size() == 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t pool_size = std::min<std::size_t>(workers, pairs.size());
        pool.reserve(pool_size);
        for (std::size_t t = 0; t < pool_size; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= pairs.size()) return;
                    process(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction in pair order.
    DatasetReport out;
    MetricReport sum;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!valid[i]) {
            ++out.excluded;
            continue;
        }
        ++out.evaluated;
        sum.max_f += reports[i].max_f;
        sum.weighted_f += reports[i].weighted_f;
        sum.e_measure += reports[i].e_measure;
        sum.s_measure += reports[i].s_measure;
        sum.mae += reports[i].mae;
        sum.dice += reports[i].dice;
        sum.iou += reports[i].iou;
        sum.ber += reports[i].ber;
        sum.acc += reports[i].acc;
    }
    if (out.evaluated == 0) {
        throw std::invalid_argument("evaluate_dataset: every pair was degenerate (empty GT)");
    }
    const double n = static_cast<double>(out.evaluated);
    out.mean = MetricReport{sum.max_f / n, sum.weighted_f / n, sum.e_measure / n,
                            sum.s_measure / n, sum.mae / n,     sum.dice / n,
                            sum.iou / n,      sum.ber / n,      sum.acc / n};
    return out;
}

} // namespace cgm
