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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qbias/biaslab.hpp"
#include "qbias/kernellab.hpp"
#include "qbias/vqc.hpp"

namespace qbias::experiments {

enum class ExperimentKind { EncodeBench, ReadoutBias, Sampling, KernelConcentration };

/// "encode-bench", "readout-bias", "sampling", "kernel-concentration".
std::string_view to_string(ExperimentKind kind);
ExperimentKind kind_from_string(std::string_view name);

/// Everything needed to reproduce one experiment run. Serialized as a flat
/// JSON object whose keys match the member names.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::EncodeBench;
    std::uint64_t seed = 1234;
    std::string out;

    // Dataset (encode-bench)
    std::string data_dir;
    bool synthetic = false;
    std::string synthetic_source = "digits";  // "digits" or "gaussians"
    int class_a = 0;
    int class_b = 1;
    int train_per_class = 100;
    int test_per_class = 50;
    int pool_block = 0;  // 0: 7 for MNIST, 14 for synthetic digits
    int gaussian_dim = 4;
    double gaussian_separation = 2.0;

    // Classifier (encode-bench)
    std::vector<std::string> encodings{"basis", "angle", "hybrid-rx", "hybrid-ry", "hybrid-rz"};
    bool hadamard_pre = false;
    int bench_seeds = 1;
    int epochs = 20;
    int batch_size = 16;
    double learning_rate = 0.01;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int layers = 2;

    // Readout bias
    double f_zero = 0.84;
    double f_one = 0.62;
    int readout_qubits = 5;
    std::uint64_t shots = 10000;

    // Sampling
    std::vector<std::uint64_t> shot_list{100, 400, 1600};
    int repeats = 200;
    int sampling_qubits = 1;

    // Kernel concentration
    std::vector<int> n_list{2, 4, 8, 12};
    int kernel_m = 50;
    int kernel_seeds = 5;

    /// ConfigError on any invalid field.
    void validate() const;

    /// Pool block after resolving the automatic default.
    int effective_pool_block() const;

    vqc::TrainConfig train_config(std::uint64_t run_seed) const;

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

/// Pretty-printed JSON, keys sorted.
std::string config_to_json(const ExperimentConfig &config);

/// Missing keys keep their defaults. Unknown keys, wrong types and values
/// that fail validate() raise ConfigError.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path &path);

struct BenchRow {
    std::string encoding;
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    std::uint64_t seed = 0;
};

struct BenchData {
    data::Dataset train;
    data::Dataset test;
};

/// Train/test split for encode-bench: MNIST from config.data_dir, or the
/// configured synthetic source when config.synthetic is set.
BenchData load_bench_data(const ExperimentConfig &config);

/// Seed of the i-th repeated training run.
std::uint64_t bench_run_seed(const ExperimentConfig &config, int run);

std::vector<BenchRow> encode_bench(const ExperimentConfig &config, const BenchData &data);

struct ReadoutRow {
    std::string state;     // "all-zero" / "all-one"
    std::string strategy;  // "none" / "invert-all" / "dual-run-average"
    std::uint64_t shots = 0;
    double fidelity = 0.0;
};

std::vector<ReadoutRow> readout_experiment(const ExperimentConfig &config);
std::vector<bias::ShotScalingRow> sampling_experiment(const ExperimentConfig &config);
std::vector<kernel::ConcentrationRow> kernel_experiment(const ExperimentConfig &config);

std::string bench_csv(const std::vector<BenchRow> &rows);
std::string readout_csv(const std::vector<ReadoutRow> &rows);
std::string sampling_csv(const std::vector<bias::ShotScalingRow> &rows);
std::string kernel_csv(const std::vector<kernel::ConcentrationRow> &rows);

/// Sibling file holding the config echo and run metadata.
std::filesystem::path metadata_path(const std::filesystem::path &out);

/// Writes `contents` to a temporary file next to `path`, then renames it.
void write_atomic(const std::filesystem::path &path, std::string_view contents);

/// Runs config.experiment and writes the CSV at config.out plus its
/// metadata file.
void run_experiment(const ExperimentConfig &config);

}  // namespace qbias::experiments
