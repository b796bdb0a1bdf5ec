// Copyright 2026 The qbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qbias: command-line runner for the bias experiments.
//
//   qbias encode-bench --synthetic --out bench.csv
//   qbias readout-bias --config readout.json --out readout.csv
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 capacity error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qbias/errors.hpp"
#include "qbias/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitCapacity = 4;

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string data_dir;
    bool synthetic = false;
    bool dump_config = false;
};

void add_common(CLI::App *sub, CommonFlags &flags) {
    sub->add_option("--config", flags.config_path, "JSON config file");
    sub->add_option("--out", flags.out, "output CSV path (metadata goes to <out>.meta.json)");
    sub->add_option("--seed", flags.seed, "master seed; overrides the config file");
    sub->add_option("--data-dir", flags.data_dir, "directory holding the MNIST IDX files (default: $QBIAS_DATA_DIR)");
    sub->add_flag("--synthetic", flags.synthetic, "use generated data instead of MNIST");
    sub->add_flag("--dump-config", flags.dump_config, "print the effective config as JSON and exit");
}

qbias::experiments::ExperimentConfig resolve(qbias::experiments::ExperimentKind kind, const CommonFlags &flags) {
    using namespace qbias::experiments;
    ExperimentConfig config = flags.config_path.empty() ? ExperimentConfig{} : load_config(flags.config_path);
    config.experiment = kind;
    if (!flags.out.empty()) config.out = flags.out;
    if (flags.seed) config.seed = *flags.seed;
    if (!flags.data_dir.empty()) config.data_dir = flags.data_dir;
    if (flags.synthetic) config.synthetic = true;
    if (config.data_dir.empty()) {
        if (const char *env = std::getenv("QBIAS_DATA_DIR")) config.data_dir = env;
    }
    if (config.out.empty()) config.out = std::string(to_string(kind)) + ".csv";
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char **argv) {
    using namespace qbias::experiments;

    CLI::App app{"Quantum machine learning bias experiments"};
    app.require_subcommand(1);

    CommonFlags flags;
    const ExperimentKind kinds[] = {ExperimentKind::EncodeBench, ExperimentKind::ReadoutBias, ExperimentKind::Sampling,
                                    ExperimentKind::KernelConcentration};
    const char *descriptions[] = {
        "train one classifier per encoding and record accuracy curves",
        "state-dependent readout fidelity with and without Invert-And-Measure",
        "spread of the <Z> estimator against the shot budget",
        "mean kernel value and dominant Gram eigenvalue against qubit count",
    };
    std::vector<CLI::App *> subs;
    for (std::size_t i = 0; i < std::size(kinds); ++i) {
        auto *sub = app.add_subcommand(std::string(to_string(kinds[i])), descriptions[i]);
        add_common(sub, flags);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        ExperimentKind kind = ExperimentKind::EncodeBench;
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (subs[i]->parsed()) kind = kinds[i];
        }
        const auto config = resolve(kind, flags);
        if (flags.dump_config) {
            std::cout << config_to_json(config);
            return 0;
        }
        run_experiment(config);
        std::cout << "wrote " << config.out << " and " << metadata_path(config.out).string() << "\n";
    } catch (const qbias::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qbias::CapacityError &e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const qbias::DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const qbias::FormatError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const qbias::LengthError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const qbias::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
