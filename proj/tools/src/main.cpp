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
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "cgm/errors.hpp"
#include "cgmcli/commands.hpp"

namespace {

std::string config_path_placeholder;

void add_config_flag(CLI::App* cmd) {
    cmd->add_option("--config", config_path_placeholder,
                    "Flat key=value config file; flags override file values");
}

// Expands "--config <file>" into trailing "--key=value" arguments for every
// file entry whose flag was not given on the command line, so explicit flags
// always win. Lines starting with '#' and blank lines are skipped.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) return args;

    std::ifstream file(config_path);
    if (!file) {
        throw cgm::IoError("cannot open config file: " + config_path);
    }
    std::string line;
    while (std::getline(file, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=', first);
        if (eq == std::string::npos) {
            throw std::invalid_argument("config file line is not key=value: " + line);
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(first, eq - first));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config file line has an empty key: " + line);
        }
        const std::string flag = "--" + key;
        bool given = false;
        for (const std::string& arg : args) {
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
                given = true;
                break;
            }
        }
        if (!given) args.push_back(flag + "=" + value);
    }
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Confidence-guided matting toolkit: trimap generation, refinement, "
                 "evaluation and toy training"};
    app.require_subcommand(1);

    cgmcli::EvalOptions eval_opt;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate prediction PNGs against GT masks");
    eval->add_option("--pred", eval_opt.pred_dir, "Directory of prediction PNGs")->required();
    eval->add_option("--gt", eval_opt.gt_dir, "Directory of GT mask PNGs")->required();
    eval->add_option("--out", eval_opt.out_dir, "Output directory")->required();
    eval->add_option("--threshold", eval_opt.threshold, "Binarization threshold for Dice/IoU/BER/Acc");
    eval->add_option("--jobs", eval_opt.jobs, "Worker threads");
    add_config_flag(eval);

    cgmcli::TrimapOptions trimap_opt;
    CLI::App* trimap = app.add_subcommand("trimap", "Generate confidence trimaps from predictions");
    trimap->add_option("--pred", trimap_opt.pred_dir, "Directory of prediction PNGs")->required();
    trimap->add_option("--out", trimap_opt.out_dir, "Output directory")->required();
    trimap->add_option("--t-low", trimap_opt.t_low, "Background threshold");
    trimap->add_option("--t-high", trimap_opt.t_high, "Foreground threshold");
    trimap->add_flag("--logits", trimap_opt.logits_input,
                     "Interpret inputs as logits (inverse sigmoid of the stored values)");
    add_config_flag(trimap);

    cgmcli::RefineOptions refine_opt;
    CLI::App* refine = app.add_subcommand("refine", "Trimap + heuristic refinement over predictions");
    refine->add_option("--pred", refine_opt.pred_dir, "Directory of base prediction PNGs")->required();
    refine->add_option("--im", refine_opt.im_dir, "Directory of guidance images (optional)");
    refine->add_option("--out", refine_opt.out_dir, "Output directory")->required();
    refine->add_option("--t-low", refine_opt.t_low, "Background threshold");
    refine->add_option("--t-high", refine_opt.t_high, "Foreground threshold");
    refine->add_option("--policy", refine_opt.policy, "Composite policy: refiner-full|band-only");
    refine->add_flag("--bit16", refine_opt.sixteen_bit, "Write 16-bit probability PNGs");
    add_config_flag(refine);

    cgmcli::TrainToyOptions train_opt;
    CLI::App* train = app.add_subcommand("train-toy", "Train toy base+refiner on synthetic shapes");
    train->add_option("--out", train_opt.out_dir, "Output directory")->required();
    train->add_option("--seed", train_opt.seed, "Seed for data and init");
    train->add_option("--size", train_opt.size, "Working resolution");
    train->add_option("--steps", train_opt.steps, "Training steps per network");
    train->add_option("--count", train_opt.count, "Synthetic training images");
    train->add_option("--family", train_opt.family, "Shape family: disks|polygons|rings|stars");
    train->add_option("--channels", train_opt.channels, "First-stage channels");
    train->add_option("--depth", train_opt.depth, "Encoder depth");
    train->add_option("--lr", train_opt.lr, "Adam learning rate");
    train->add_option("--noise", train_opt.noise, "Synthetic texture noise amplitude");
    train->add_flag("--resume", train_opt.resume, "Continue from checkpoints in --out");
    add_config_flag(train);

    cgmcli::AblateOptions ablate_opt;
    CLI::App* ablate = app.add_subcommand("ablate", "Threshold-band ablation of the pipeline");
    ablate->add_option("--pred", ablate_opt.pred_dir, "Directory of base prediction PNGs")->required();
    ablate->add_option("--gt", ablate_opt.gt_dir, "Directory of GT mask PNGs")->required();
    ablate->add_option("--im", ablate_opt.im_dir, "Directory of guidance images (optional)");
    ablate->add_option("--out", ablate_opt.out_dir, "Output directory")->required();
    ablate->add_option("--threshold", ablate_opt.threshold, "Binarization threshold");
    ablate->add_option("--degenerate-eps", ablate_opt.degenerate_eps,
                       "Append a (0.5-eps, 0.5+eps) row when > 0");
    ablate->add_option("--jobs", ablate_opt.jobs, "Worker threads");
    add_config_flag(ablate);

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11 consumes from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cgmcli::kOk : cgmcli::kConfigError;
    } catch (const cgm::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return cgmcli::kIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cgmcli::kConfigError;
    }

    try {
        if (eval->parsed()) cgmcli::cmd_eval(eval_opt);
        if (trimap->parsed()) cgmcli::cmd_trimap(trimap_opt);
        if (refine->parsed()) cgmcli::cmd_refine(refine_opt);
        if (train->parsed()) cgmcli::cmd_train_toy(train_opt);
        if (ablate->parsed()) cgmcli::cmd_ablate(ablate_opt);
    } catch (const cgm::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return cgmcli::kIoError;
    } catch (const cgm::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return cgmcli::kNumericError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cgmcli::kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cgmcli::kUnexpected;
    }
    return cgmcli::kOk;
}
