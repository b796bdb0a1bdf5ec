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

#include "qbias/experiments.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "qbias/errors.hpp"

using namespace qbias;
using namespace qbias::experiments;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "qbias_test_experiments";
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

int run_cli(const std::string &args) {
    const std::string cmd = "env -u QBIAS_DATA_DIR '" + std::string(QBIAS_CLI_PATH) + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_bench() {
    ExperimentConfig c;
    c.experiment = ExperimentKind::EncodeBench;
    c.synthetic = true;
    c.train_per_class = 10;
    c.test_per_class = 5;
    c.encodings = {"angle"};
    c.epochs = 2;
    return c;
}

}  // namespace

TEST(Config, json_round_trip) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::KernelConcentration;
    c.seed = 0xFFFFFFFFFFFFFFFFULL;
    c.out = "x/y.csv";
    c.encodings = {"hybrid-rz", "basis"};
    c.hadamard_pre = true;
    c.learning_rate = 0.1 + 0.2;
    c.f_one = 0.6199999999999999;
    c.shot_list = {1, 2, 3};
    c.n_list = {5};
    EXPECT_EQ(config_from_json(config_to_json(c)), c);
    EXPECT_EQ(config_from_json(config_to_json(ExperimentConfig{})), ExperimentConfig{});
}

TEST(Config, partial_documents_keep_defaults) {
    const auto c = config_from_json(R"({"experiment": "sampling", "repeats": 50})");
    EXPECT_EQ(c.experiment, ExperimentKind::Sampling);
    EXPECT_EQ(c.repeats, 50);
    EXPECT_EQ(c.shots, ExperimentConfig{}.shots);
}

TEST(Config, rejects_bad_documents) {
    EXPECT_THROW(config_from_json(R"({"no_such_key": 1})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"epochs": "many"})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"encodings": ["amplitude"]})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"experiment": "tomography"})"), ConfigError);
    EXPECT_THROW(config_from_json("not json"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"f_zero": 0})"), ConfigError);
    EXPECT_THROW(load_config(scratch_dir() / "missing.json"), ConfigError);
}

TEST(Config, automatic_pool_block) {
    ExperimentConfig c;
    EXPECT_EQ(c.effective_pool_block(), 7);
    c.synthetic = true;
    EXPECT_EQ(c.effective_pool_block(), 14);
    c.pool_block = 4;
    EXPECT_EQ(c.effective_pool_block(), 4);
}

TEST(EncodeBench, row_counts) {
    auto c = small_bench();
    const auto data = load_bench_data(c);
    EXPECT_EQ(data.train.size(), 20);
    EXPECT_EQ(data.test.size(), 10);
    const auto csv = bench_csv(encode_bench(c, data));
    const auto ls = lines(csv);
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(ls[0], "encoding,epoch,train_loss,train_acc,test_acc,seed");
    EXPECT_EQ(split(ls[1])[0], "angle");
    EXPECT_EQ(split(ls[2])[1], "2");

    c.encodings = {"basis", "angle", "hybrid-rx", "hybrid-ry", "hybrid-rz"};
    c.epochs = 20;
    c.train_per_class = 4;
    c.test_per_class = 2;
    EXPECT_EQ(lines(bench_csv(encode_bench(c, load_bench_data(c)))).size(), 101u);
}

TEST(EncodeBench, mnist_requires_data) {
    ExperimentConfig c;
    EXPECT_THROW(load_bench_data(c), DataError);
    c.data_dir = (scratch_dir() / "nothing_here").string();
    EXPECT_THROW(load_bench_data(c), DataError);
}

TEST(EncodeBench, mnist_files_are_read_from_disk) {
    // Synthetic digits written in IDX form stand in for the real files.
    const auto dir = scratch_dir() / "fake_mnist";
    fs::create_directories(dir);
    const auto train = data::synthetic_digits(12, 1);
    const auto test = data::synthetic_digits(6, 2);
    data::save_idx(dir / "train-images-idx3-ubyte", train.images);
    data::save_idx(dir / "train-labels-idx1-ubyte", train.labels);
    data::save_idx(dir / "t10k-images-idx3-ubyte", test.images);
    data::save_idx(dir / "t10k-labels-idx1-ubyte", test.labels);
    ExperimentConfig c;
    c.data_dir = dir.string();
    c.train_per_class = 12;
    c.test_per_class = 6;
    const auto data = load_bench_data(c);
    EXPECT_EQ(data.train.size(), 24);
    EXPECT_EQ(data.train.dim(), 16);
    EXPECT_EQ(data.test.size(), 12);
    c.train_per_class = 13;
    EXPECT_THROW(load_bench_data(c), DataError);
}

TEST(ReadoutExperiment, rows_and_null_noise) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::ReadoutBias;
    const auto rows = readout_experiment(c);
    ASSERT_EQ(rows.size(), 6u);
    for (const auto &r : rows) {
        if (r.state == "all-one" && r.strategy == "none") EXPECT_NEAR(r.fidelity, 0.62, 0.02);
        if (r.state == "all-one" && r.strategy == "invert-all") EXPECT_NEAR(r.fidelity, 0.84, 0.02);
        if (r.strategy == "dual-run-average") EXPECT_NEAR(r.fidelity, 0.73, 0.02);
    }
    EXPECT_EQ(lines(readout_csv(rows))[0], "state,strategy,shots,fidelity");

    c.f_zero = 1.0;
    c.f_one = 1.0;
    for (const auto &r : readout_experiment(c)) EXPECT_EQ(r.fidelity, 1.0) << r.state << " " << r.strategy;
}

TEST(SamplingExperiment, rows) {
    ExperimentConfig c;
    c.shot_list = {100, 400};
    const auto rows = sampling_experiment(c);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0].std_estimate, 0.1, 0.02);
    EXPECT_NEAR(rows[0].std_estimate / rows[1].std_estimate, 2.0, 0.4);
    for (const auto &r : rows) EXPECT_NEAR(r.exact, 0.0, 1e-15);
    const auto ls = lines(sampling_csv(rows));
    EXPECT_EQ(ls[0], "shots,mean_estimate,std_estimate,exact");
    EXPECT_EQ(split(ls[1])[0], "100");
}

TEST(KernelExperiment, rows) {
    ExperimentConfig c;
    c.n_list = {2, 4, 8};
    const auto rows = kernel_experiment(c);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GT(rows[0].mean_offdiag, rows[1].mean_offdiag);
    EXPECT_GT(rows[1].mean_offdiag, rows[2].mean_offdiag);
    EXPECT_NEAR(rows[0].mean_offdiag, 0.4937062963, 0.3 * 0.4937062963);
    const auto ls = lines(kernel_csv(rows));
    EXPECT_EQ(ls[0], "n_qubits,m,mean_offdiag,lambda_max");
    EXPECT_EQ(ls.size(), 4u);
}

TEST(RunExperiment, writes_csv_and_metadata_deterministically) {
    auto c = small_bench();
    const auto out = scratch_dir() / "bench.csv";
    c.out = out.string();
    run_experiment(c);
    const auto csv = read_file(out);
    const auto meta = read_file(metadata_path(out));
    ASSERT_FALSE(csv.empty());
    EXPECT_EQ(csv.back(), '\n');
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    const auto j = nlohmann::json::parse(meta);
    EXPECT_EQ(config_from_json(j.at("config").dump()), c);
    run_experiment(c);
    EXPECT_EQ(read_file(out), csv);
    EXPECT_EQ(read_file(metadata_path(out)), meta);
    EXPECT_EQ(metadata_path("a/b.csv"), fs::path("a/b.csv.meta.json"));
}

TEST(Cli, exit_codes) {
    const auto dir = scratch_dir();
    const auto out = (dir / "cli.csv").string();
    EXPECT_EQ(run_cli("sampling --out '" + out + "'"), 0);
    EXPECT_TRUE(fs::exists(out));
    EXPECT_TRUE(fs::exists(out + ".meta.json"));

    EXPECT_EQ(run_cli("no-such-command"), 2);
    EXPECT_EQ(run_cli("sampling --config '" + (dir / "absent.json").string() + "'"), 2);
    {
        std::ofstream(dir / "bad.json") << R"({"repeats": 1})";
    }
    EXPECT_EQ(run_cli("sampling --config '" + (dir / "bad.json").string() + "' --out '" + out + "'"), 2);

    EXPECT_EQ(run_cli("encode-bench --out '" + out + "'"), 3);
    EXPECT_EQ(run_cli("encode-bench --data-dir '" + (dir / "nowhere").string() + "' --out '" + out + "'"), 3);

    {
        std::ofstream(dir / "huge.json") << R"({"n_list": [21]})";
    }
    EXPECT_EQ(run_cli("kernel-concentration --config '" + (dir / "huge.json").string() + "' --out '" + out + "'"), 4);
}

TEST(Cli, flags_override_config_file) {
    const auto dir = scratch_dir();
    {
        std::ofstream(dir / "seeded.json") << R"({"seed": 5, "shot_list": [10], "repeats": 3})";
    }
    const auto a = (dir / "a.csv").string();
    const auto b = (dir / "b.csv").string();
    ASSERT_EQ(run_cli("sampling --config '" + (dir / "seeded.json").string() + "' --out '" + a + "'"), 0);
    ASSERT_EQ(run_cli("sampling --config '" + (dir / "seeded.json").string() + "' --seed 6 --out '" + b + "'"), 0);
    const auto ja = nlohmann::json::parse(read_file(a + ".meta.json"));
    const auto jb = nlohmann::json::parse(read_file(b + ".meta.json"));
    EXPECT_EQ(ja["config"]["seed"], 5);
    EXPECT_EQ(jb["config"]["seed"], 6);
    EXPECT_EQ(jb["config"]["repeats"], 3);
    EXPECT_NE(read_file(a), read_file(b));
}
