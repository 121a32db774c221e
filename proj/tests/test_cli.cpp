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

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cgm/datasets.hpp"
#include "cgm/errors.hpp"
#include "cgm/metrics.hpp"
#include "cgm/png_io.hpp"
#include "cgm/report.hpp"
#include "cgmcli/commands.hpp"
#include "support/test_util.hpp"

using namespace cgm;
using namespace cgmcli;
using cgmtest::read_file;
using cgmtest::TempDir;

namespace {

// Small matched prediction/GT tree with one noisy pair.
void write_fixture(const TempDir& dir, int count = 3) {
    std::filesystem::create_directories(dir.path() / "pred");
    std::filesystem::create_directories(dir.path() / "gt");
    std::filesystem::create_directories(dir.path() / "im");
    SynthSpec spec;
    spec.seed = 5;
    spec.count = count;
    spec.size = 64;
    const auto pairs = generate_synthetic(spec);
    cgm::Rng rng(17);
    for (int i = 0; i < count; ++i) {
        const std::string id = "img" + std::to_string(i);
        save_mask(pairs[i].mask, (dir.path() / "gt" / (id + ".png")).string());
        save_image(pairs[i].image, (dir.path() / "im" / (id + ".png")).string());
        std::vector<float> probs(pairs[i].mask.data().size());
        for (std::size_t p = 0; p < probs.size(); ++p) {
            const double base = pairs[i].mask.data()[p] ? 0.9 : 0.1;
            probs[p] = static_cast<float>(std::clamp(base + rng.uniform(-0.1, 0.1), 0.0, 1.0));
        }
        save_probability(ProbabilityMap(64, 64, probs), (dir.path() / "pred" / (id + ".png")).string());
    }
}

std::vector<std::string> csv_data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
}

} // namespace

TEST_CASE("cmd_eval: ideal predictions, determinism, config echo") {
    TempDir dir("cli_eval");
    std::filesystem::create_directories(dir.path() / "pred");
    std::filesystem::create_directories(dir.path() / "gt");
    SynthSpec spec;
    spec.seed = 3;
    spec.count = 2;
    const auto pairs = generate_synthetic(spec);
    for (int i = 0; i < 2; ++i) {
        const std::string id = "p" + std::to_string(i);
        save_mask(pairs[i].mask, (dir.path() / "gt" / (id + ".png")).string());
        save_mask(pairs[i].mask, (dir.path() / "pred" / (id + ".png")).string());
    }

    EvalOptions opt;
    opt.pred_dir = (dir.path() / "pred").string();
    opt.gt_dir = (dir.path() / "gt").string();
    opt.out_dir = (dir.path() / "out").string();
    cmd_eval(opt);

    const std::string csv = read_file((dir.path() / "out" / "per_image.csv").string());
    CHECK(csv.find("# command=eval") != std::string::npos);
    const auto lines = csv_data_lines(csv);
    REQUIRE(lines.size() == 3); // header + 2 rows
    CHECK(lines[1] == "p0,1,1,1,1,0,1,1,0,1");
    CHECK(lines[2] == "p1,1,1,1,1,0,1,1,0,1");

    const std::string md = read_file((dir.path() / "out" / "aggregate.md").string());
    CHECK(md.find("1.0000") != std::string::npos);
    CHECK(md.find("command=eval") != std::string::npos);

    // Rerun into a second directory: byte-identical CSV modulo the out path.
    opt.out_dir = (dir.path() / "out2").string();
    cmd_eval(opt);
    const std::string csv2 = read_file((dir.path() / "out2" / "per_image.csv").string());
    auto strip_out = [](std::string s) {
        std::istringstream in(s);
        std::string line, kept;
        while (std::getline(in, line)) {
            if (line.rfind("# out=", 0) == 0) continue;
            kept += line + "\n";
        }
        return kept;
    };
    CHECK(strip_out(csv) == strip_out(csv2));
}

TEST_CASE("cmd_eval: errors are I/O-classified and named") {
    TempDir dir("cli_eval_err");
    EvalOptions opt;
    opt.pred_dir = (dir.path() / "nope").string();
    opt.gt_dir = (dir.path() / "nope").string();
    opt.out_dir = (dir.path() / "out").string();
    CHECK_THROWS_AS(cmd_eval(opt), IoError);

    write_fixture(dir, 2);
    opt.pred_dir = (dir.path() / "pred").string();
    opt.gt_dir = (dir.path() / "gt").string();
    // Corrupt one prediction.
    std::ofstream((dir.path() / "pred" / "img0.png").string(), std::ios::binary) << "junk";
    CHECK_THROWS_AS(cmd_eval(opt), IoError);
}

TEST_CASE("cmd_trimap: probability inputs, defaults, fraction rows") {
    TempDir dir("cli_trimap");
    std::filesystem::create_directories(dir.path() / "pred");
    save_probability(ProbabilityMap::constant(8, 8, 0.5f), (dir.path() / "pred" / "flat.png").string());
    cgm::Rng rng(29);
    save_probability(cgmtest::random_probs(rng, 16, 16), (dir.path() / "pred" / "rand.png").string());

    TrimapOptions opt;
    opt.pred_dir = (dir.path() / "pred").string();
    opt.out_dir = (dir.path() / "out").string();
    CHECK(opt.t_low == 0.05);
    CHECK(opt.t_high == 0.95);
    cmd_trimap(opt);

    const auto flat = load_trimap((dir.path() / "out" / "flat.png").string());
    for (auto v : flat.data()) CHECK(v == 128);

    const std::string csv = read_file((dir.path() / "out" / "band_stats.csv").string());
    const auto lines = csv_data_lines(csv);
    REQUIRE(lines.size() == 3);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::string id, b, u, f;
        std::getline(row, id, ',');
        std::getline(row, b, ',');
        std::getline(row, u, ',');
        std::getline(row, f, ',');
        CHECK(std::abs(std::stod(b) + std::stod(u) + std::stod(f) - 1.0) < 1e-9);
    }

    // Logit interpretation agrees with probability interpretation after the
    // inverse-sigmoid round trip on interior values.
    TrimapOptions logit_opt = opt;
    logit_opt.out_dir = (dir.path() / "out_logits").string();
    logit_opt.logits_input = true;
    cmd_trimap(logit_opt);
    const auto a = load_trimap((dir.path() / "out" / "rand.png").string());
    const auto b = load_trimap((dir.path() / "out_logits" / "rand.png").string());
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        if (a.data()[i] != b.data()[i]) ++diff;
    }
    CHECK(diff == 0);

    TrimapOptions bad = opt;
    bad.t_low = 0.9;
    bad.t_high = 0.1;
    CHECK_THROWS_AS(cmd_trimap(bad), std::invalid_argument);
}

TEST_CASE("cmd_train_toy: short run, schema, resume continuation") {
    TempDir dir("cli_train");
    TrainToyOptions opt;
    opt.out_dir = dir.str();
    opt.steps = 4;
    opt.count = 2;
    opt.size = 64;
    opt.seed = 11;
    cmd_train_toy(opt);

    CHECK(std::filesystem::exists(dir.file("base.ckpt")));
    CHECK(std::filesystem::exists(dir.file("refiner.ckpt")));
    const auto lines = csv_data_lines(read_file(dir.file("base_loss.csv")));
    REQUIRE(lines.size() == 5); // header + 4 steps
    CHECK(lines[0] == "step,loss");
    CHECK(lines[1].rfind("0,", 0) == 0);
    CHECK(lines[4].rfind("3,", 0) == 0);

    // Resume: steps continue from the saved counter.
    TrainToyOptions more = opt;
    more.steps = 6;
    more.resume = true;
    cmd_train_toy(more);
    const auto resumed = csv_data_lines(read_file(dir.file("base_loss.csv")));
    REQUIRE(resumed.size() == 3); // header + steps 4,5
    CHECK(resumed[1].rfind("4,", 0) == 0);
    CHECK(resumed[2].rfind("5,", 0) == 0);

    // A fresh run with another seed produces the same schema.
    TempDir dir2("cli_train2");
    TrainToyOptions other = opt;
    other.out_dir = dir2.str();
    other.seed = 12;
    cmd_train_toy(other);
    const auto other_lines = csv_data_lines(read_file(dir2.file("base_loss.csv")));
    CHECK(other_lines.size() == 5);
    CHECK(other_lines[0] == "step,loss");
    CHECK(other_lines[1] != lines[1]); // different seed, different curve
}

TEST_CASE("cmd_ablate: seven rows per policy, monotone band, degenerate flag") {
    TempDir dir("cli_ablate");
    write_fixture(dir, 3);

    AblateOptions opt;
    opt.pred_dir = (dir.path() / "pred").string();
    opt.gt_dir = (dir.path() / "gt").string();
    opt.im_dir = (dir.path() / "im").string();
    opt.out_dir = (dir.path() / "out").string();
    cmd_ablate(opt);

    const std::string csv = read_file((dir.path() / "out" / "ablation.csv").string());
    const auto lines = csv_data_lines(csv);
    REQUIRE(lines.size() == 1 + 2 * 7);

    // Parse rows: policy,t_low,t_high,mae,dice,iou,ber,acc,unknown,is_default
    struct Row {
        std::string policy;
        double t_low, unknown;
        bool is_default;
    };
    std::vector<Row> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream in(lines[i]);
        std::string field;
        Row r;
        std::getline(in, r.policy, ',');
        std::getline(in, field, ',');
        r.t_low = std::stod(field);
        for (int skip = 0; skip < 6; ++skip) std::getline(in, field, ','); // t_high..acc
        std::getline(in, field, ',');
        r.unknown = std::stod(field);
        std::getline(in, field, ',');
        r.is_default = field == "1";
        rows.push_back(r);
    }
    int default_count = 0;
    for (const auto& r : rows) {
        if (r.is_default) {
            ++default_count;
            CHECK(r.t_low == 0.05);
        }
    }
    CHECK(default_count == 2); // one per policy

    // Unknown fraction is non-decreasing down each policy block.
    for (int block = 0; block < 2; ++block) {
        for (int i = 1; i < 7; ++i) {
            CHECK(rows[block * 7 + i].unknown >= rows[block * 7 + i - 1].unknown - 1e-12);
        }
    }

    const std::string md = read_file((dir.path() / "out" / "ablation.md").string());
    CHECK(md.find("band-only") != std::string::npos);
    CHECK(md.find("refiner-full") != std::string::npos);
    CHECK(md.find("(default)") != std::string::npos);

    // Degenerate pair appended via flag adds one row per policy, and its
    // band-only metrics equal the binarized-base metrics (the band is empty
    // for this fixture's prediction values).
    AblateOptions with_eps = opt;
    with_eps.out_dir = (dir.path() / "out_eps").string();
    with_eps.degenerate_eps = 1e-3;
    cmd_ablate(with_eps);
    const auto eps_lines = csv_data_lines(read_file((dir.path() / "out_eps" / "ablation.csv").string()));
    CHECK(eps_lines.size() == 1 + 2 * 8);

    double binarized_mae = 0.0;
    for (int i = 0; i < 3; ++i) {
        const std::string id = "img" + std::to_string(i);
        const auto q = load_probability((dir.path() / "pred" / (id + ".png")).string());
        const auto gt = load_mask((dir.path() / "gt" / (id + ".png")).string());
        const auto hard = binarize(q, 0.5);
        std::vector<float> hard_prob(hard.data().begin(), hard.data().end());
        binarized_mae += cgm::mae(ProbabilityMap(64, 64, std::move(hard_prob)), gt);
    }
    binarized_mae /= 3.0;
    // Row 8 of the band-only block is the degenerate pair; field 4 is MAE.
    std::istringstream row8(eps_lines[8]);
    std::string f;
    for (int i = 0; i < 4; ++i) std::getline(row8, f, ',');
    CHECK(std::stod(f) == doctest::Approx(binarized_mae).epsilon(1e-9));
}

TEST_CASE("csv quoting follows the doubled-quote convention") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("with,comma") == "\"with,comma\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_row({"a", "b,c"}) == "a,\"b,c\"\n");
}

TEST_CASE("cmd_refine: stage maps, sidecar, policy selection") {
    TempDir dir("cli_refine");
    write_fixture(dir, 2);

    RefineOptions opt;
    opt.pred_dir = (dir.path() / "pred").string();
    opt.im_dir = (dir.path() / "im").string();
    opt.out_dir = (dir.path() / "out").string();
    cmd_refine(opt);

    for (const std::string stem : {"img0", "img1"}) {
        for (const std::string suffix : {"_base.png", "_trimap.png", "_refined.png", "_final.png"}) {
            CHECK(std::filesystem::exists(dir.path() / "out" / (stem + suffix)));
        }
        const std::string sidecar = read_file((dir.path() / "out" / (stem + ".json")).string());
        CHECK(sidecar.find("band-only") != std::string::npos);
    }

    // Band-only: final map is hard 0/1 outside the unknown band.
    const auto trimap = load_trimap((dir.path() / "out" / "img0_trimap.png").string());
    const auto final_map = load_probability((dir.path() / "out" / "img0_final.png").string());
    for (std::size_t i = 0; i < trimap.data().size(); ++i) {
        if (trimap.data()[i] == 255) CHECK(final_map.data()[i] == 1.0f);
        if (trimap.data()[i] == 0) CHECK(final_map.data()[i] == 0.0f);
    }

    RefineOptions bad = opt;
    bad.policy = "sideways";
    CHECK_THROWS_AS(cmd_refine(bad), std::invalid_argument);

    // 16-bit output keeps finer confidence resolution losslessly readable.
    RefineOptions fine = opt;
    fine.out_dir = (dir.path() / "out16").string();
    fine.sixteen_bit = true;
    cmd_refine(fine);
    const auto q8 = load_probability((dir.path() / "out" / "img0_refined.png").string());
    const auto q16 = load_probability((dir.path() / "out16" / "img0_refined.png").string());
    for (std::size_t i = 0; i < q8.data().size(); ++i) {
        CHECK(std::abs(q8.data()[i] - q16.data()[i]) < 0.5 / 255.0 + 1e-6);
    }
}

#ifdef CGM_BIN
namespace {

int run_cli(const std::string& args) {
    const int status = std::system((std::string(CGM_BIN) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("binary: exit codes distinguish config, I/O and success") {
    TempDir dir("cli_bin");
    write_fixture(dir, 2);
    const std::string pred = (dir.path() / "pred").string();

    CHECK(run_cli("trimap --pred " + pred + " --out " + dir.file("out")) == kOk);
    CHECK(run_cli("trimap --pred " + (dir.path() / "missing").string() + " --out " +
                  dir.file("out2")) == kIoError);
    CHECK(run_cli("trimap --pred " + pred + " --out " + dir.file("out3") +
                  " --t-low 0.9 --t-high 0.1") == kConfigError);
    CHECK(run_cli("trimap --pred " + pred) == kConfigError); // missing --out
    CHECK(run_cli("no-such-command") == kConfigError);
    CHECK(run_cli("--help") == kOk);
}

TEST_CASE("binary: config file values apply and flags override them") {
    TempDir dir("cli_cfg");
    write_fixture(dir, 1);
    const std::string pred = (dir.path() / "pred").string();

    std::ofstream cfg(dir.file("run.cfg"));
    cfg << "t-low=0.2\n"
        << "t-high=0.8\n"
        << "out=" << dir.file("from_file") << "\n";
    cfg.close();

    CHECK(run_cli("trimap --pred " + pred + " --config " + dir.file("run.cfg")) == kOk);
    const std::string stats = read_file(dir.file("from_file") + "/band_stats.csv");
    CHECK(stats.find("# t-low=0.2") != std::string::npos);
    CHECK(stats.find("# t-high=0.8") != std::string::npos);

    // Flag overrides the file value.
    CHECK(run_cli("trimap --pred " + pred + " --config " + dir.file("run.cfg") + " --out " +
                  dir.file("flag_out") + " --t-low 0.3") == kOk);
    const std::string stats2 = read_file(dir.file("flag_out") + "/band_stats.csv");
    CHECK(stats2.find("# t-low=0.3") != std::string::npos);
    CHECK(stats2.find("# t-high=0.8") != std::string::npos);
}
#endif
