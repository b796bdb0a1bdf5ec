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

#include <charconv>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "json.hpp"
#include "qbias/errors.hpp"

namespace qbias::experiments {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTrainSubsetStream = 100;
constexpr std::uint64_t kTestSubsetStream = 101;
constexpr std::uint64_t kTrainSynthStream = 200;
constexpr std::uint64_t kTestSynthStream = 201;
constexpr std::uint64_t kRunSeedSpacing = 1000;

template <typename Config, typename F>
void visit_fields(Config &c, F &&f) {
    f("seed", c.seed);
    f("out", c.out);
    f("data_dir", c.data_dir);
    f("synthetic", c.synthetic);
    f("synthetic_source", c.synthetic_source);
    f("class_a", c.class_a);
    f("class_b", c.class_b);
    f("train_per_class", c.train_per_class);
    f("test_per_class", c.test_per_class);
    f("pool_block", c.pool_block);
    f("gaussian_dim", c.gaussian_dim);
    f("gaussian_separation", c.gaussian_separation);
    f("encodings", c.encodings);
    f("hadamard_pre", c.hadamard_pre);
    f("bench_seeds", c.bench_seeds);
    f("epochs", c.epochs);
    f("batch_size", c.batch_size);
    f("learning_rate", c.learning_rate);
    f("adam_beta1", c.adam_beta1);
    f("adam_beta2", c.adam_beta2);
    f("adam_eps", c.adam_eps);
    f("layers", c.layers);
    f("f_zero", c.f_zero);
    f("f_one", c.f_one);
    f("readout_qubits", c.readout_qubits);
    f("shots", c.shots);
    f("shot_list", c.shot_list);
    f("repeats", c.repeats);
    f("sampling_qubits", c.sampling_qubits);
    f("n_list", c.n_list);
    f("kernel_m", c.kernel_m);
    f("kernel_seeds", c.kernel_seeds);
}

template <typename T>
struct is_vector : std::false_type {};
template <typename T>
struct is_vector<std::vector<T>> : std::true_type {};

template <typename T>
void read_value(const json &v, T &out, const std::string &key) {
    auto fail = [&](const char *want) { throw ConfigError("config key '" + key + "' must be " + want); };
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) fail("a boolean");
        out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) fail("an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_unsigned()) fail("a non-negative integer");
        }
        out = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) fail("a number");
        out = v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) fail("a string");
        out = v.get<std::string>();
    } else if constexpr (is_vector<T>::value) {
        if (!v.is_array()) fail("an array");
        out.clear();
        for (const auto &e : v) {
            typename T::value_type item{};
            read_value(e, item, key);
            out.push_back(item);
        }
    }
}

std::string number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void require(bool ok, const std::string &message) {
    if (!ok) throw ConfigError(message);
}

std::string register_state_name(int q) { return q == 0 ? "all-zero" : "all-one"; }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::EncodeBench: return "encode-bench";
    case ExperimentKind::ReadoutBias: return "readout-bias";
    case ExperimentKind::Sampling: return "sampling";
    case ExperimentKind::KernelConcentration: return "kernel-concentration";
    }
    return "?";
}

ExperimentKind kind_from_string(std::string_view name) {
    for (const auto k : {ExperimentKind::EncodeBench, ExperimentKind::ReadoutBias, ExperimentKind::Sampling,
                         ExperimentKind::KernelConcentration}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    require(synthetic_source == "digits" || synthetic_source == "gaussians",
            "synthetic_source must be \"digits\" or \"gaussians\"");
    require(class_a >= 0 && class_a <= 9 && class_b >= 0 && class_b <= 9 && class_a != class_b,
            "class_a and class_b must be distinct digits");
    require(train_per_class >= 1 && test_per_class >= 1, "per-class sample counts must be positive");
    require(pool_block >= 0, "pool_block must be 0 (automatic) or a positive divisor of 28");
    require(pool_block == 0 || 28 % pool_block == 0, "pool_block must divide 28");
    require(gaussian_dim >= 1, "gaussian_dim must be positive");
    require(!encodings.empty(), "encodings must not be empty");
    for (const auto &e : encodings) {
        require(e == "basis" || e == "angle" || e == "hybrid-rx" || e == "hybrid-ry" || e == "hybrid-rz",
                "unknown encoding '" + e + "'");
    }
    require(bench_seeds >= 1, "bench_seeds must be positive");
    require(epochs >= 1, "epochs must be positive");
    require(batch_size >= 1, "batch_size must be positive");
    require(learning_rate >= 0.0, "learning_rate must be non-negative");
    require(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0,
            "Adam betas must lie in [0, 1)");
    require(adam_eps > 0.0, "adam_eps must be positive");
    require(layers >= 0, "layers must be non-negative");
    require(f_zero > 0.0 && f_zero <= 1.0 && f_one > 0.0 && f_one <= 1.0, "f_zero and f_one must lie in (0, 1]");
    require(readout_qubits >= 1, "readout_qubits must be positive");
    require(shots >= 1, "shots must be positive");
    require(!shot_list.empty(), "shot_list must not be empty");
    for (const auto s : shot_list) require(s >= 1, "shot_list entries must be positive");
    require(repeats >= 2, "repeats must be at least 2");
    require(sampling_qubits >= 1, "sampling_qubits must be positive");
    require(!n_list.empty(), "n_list must not be empty");
    for (const auto n : n_list) require(n >= 1, "n_list entries must be positive");
    require(kernel_m >= 2, "kernel_m must be at least 2");
    require(kernel_seeds >= 1, "kernel_seeds must be positive");
}

int ExperimentConfig::effective_pool_block() const {
    if (pool_block != 0) return pool_block;
    return synthetic ? 14 : 7;
}

vqc::TrainConfig ExperimentConfig::train_config(std::uint64_t run_seed) const {
    return {epochs, batch_size, learning_rate, adam_beta1, adam_beta2, adam_eps, run_seed, layers};
}

std::string config_to_json(const ExperimentConfig &config) {
    json j;
    j["experiment"] = std::string(to_string(config.experiment));
    visit_fields(config, [&](const char *key, const auto &value) { j[key] = value; });
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig config;
    std::size_t known = 0;
    if (j.contains("experiment")) {
        std::string name;
        read_value(j.at("experiment"), name, "experiment");
        config.experiment = kind_from_string(name);
        ++known;
    }
    visit_fields(config, [&](const char *key, auto &value) {
        if (j.contains(key)) {
            read_value(j.at(key), value, key);
            ++known;
        }
    });
    if (known != j.size()) {
        ExperimentConfig probe;
        for (const auto &item : j.items()) {
            bool found = item.key() == "experiment";
            visit_fields(probe, [&](const char *key, auto &) { found = found || item.key() == key; });
            if (!found) throw ConfigError("unknown config key '" + item.key() + "'");
        }
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

BenchData load_bench_data(const ExperimentConfig &config) {
    const int block = config.effective_pool_block();
    const std::uint64_t seed = config.seed;
    if (config.synthetic) {
        if (config.synthetic_source == "gaussians") {
            return {data::synthetic_gaussians(config.train_per_class, config.gaussian_dim, config.gaussian_separation,
                                              seed + kTrainSynthStream),
                    data::synthetic_gaussians(config.test_per_class, config.gaussian_dim, config.gaussian_separation,
                                              seed + kTestSynthStream)};
        }
        // Synthetic digits only contain 0s and 1s, drawn as classes a and b.
        const auto train = data::synthetic_digits(config.train_per_class, seed + kTrainSynthStream);
        const auto test = data::synthetic_digits(config.test_per_class, seed + kTestSynthStream);
        auto ds_train =
            data::make_binary_subset(train.images, train.labels, 0, 1, config.train_per_class, seed + kTrainSubsetStream, block);
        auto ds_test =
            data::make_binary_subset(test.images, test.labels, 0, 1, config.test_per_class, seed + kTestSubsetStream, block);
        ds_train.provenance = "synthetic digits; " + ds_train.provenance;
        ds_test.provenance = "synthetic digits; " + ds_test.provenance;
        return {std::move(ds_train), std::move(ds_test)};
    }
    if (config.data_dir.empty()) {
        throw DataError("no MNIST directory: pass --data-dir, set QBIAS_DATA_DIR, or use --synthetic");
    }
    const auto files = data::find_mnist(config.data_dir);
    const auto train_images = data::load_idx(files.train_images);
    const auto train_labels = data::load_idx(files.train_labels);
    const auto test_images = data::load_idx(files.test_images);
    const auto test_labels = data::load_idx(files.test_labels);
    auto ds_train = data::make_binary_subset(train_images, train_labels, config.class_a, config.class_b,
                                             config.train_per_class, seed + kTrainSubsetStream, block);
    auto ds_test = data::make_binary_subset(test_images, test_labels, config.class_a, config.class_b,
                                            config.test_per_class, seed + kTestSubsetStream, block);
    ds_train.provenance = "MNIST " + files.train_images.string() + "; " + ds_train.provenance;
    ds_test.provenance = "MNIST " + files.test_images.string() + "; " + ds_test.provenance;
    return {std::move(ds_train), std::move(ds_test)};
}

std::uint64_t bench_run_seed(const ExperimentConfig &config, int run) {
    return config.seed + kRunSeedSpacing * static_cast<std::uint64_t>(run);
}

std::vector<BenchRow> encode_bench(const ExperimentConfig &config, const BenchData &data) {
    config.validate();
    const int features = static_cast<int>(data.train.dim());
    std::vector<BenchRow> rows;
    for (int run = 0; run < config.bench_seeds; ++run) {
        const auto run_seed = bench_run_seed(config, run);
        for (const auto &name : config.encodings) {
            const auto spec = encode::from_name(name, features, config.hadamard_pre);
            auto model = vqc::make_model(spec, config.layers, run_seed);
            const auto report = vqc::train(data.train, data.test, model, config.train_config(run_seed));
            for (const auto &r : report.rows) {
                rows.push_back({name, r.epoch, r.train_loss, r.train_acc, r.test_acc, run_seed});
            }
        }
    }
    return rows;
}

std::vector<ReadoutRow> readout_experiment(const ExperimentConfig &config) {
    config.validate();
    const int n = config.readout_qubits;
    const auto rates = bias::calibrate_per_qubit_rates(config.f_zero, config.f_one, n);
    const auto noise = bias::ReadoutNoiseModel::uniform(n, rates.eps01, rates.eps10);
    const bias::MitigationStrategy strategies[] = {bias::MitigationStrategy::none(),
                                                   bias::MitigationStrategy::invert_all(),
                                                   bias::MitigationStrategy::dual_run_average()};
    std::vector<ReadoutRow> rows;
    for (int which = 0; which < 2; ++which) {
        auto state = sim::Statevector::zero(n);
        if (which == 1) {
            for (int q = 0; q < n; ++q) sim::apply_gate_inplace(state, sim::Gate::x(q), 0.0);
        }
        const std::string target(static_cast<std::size_t>(n), which == 0 ? '0' : '1');
        for (std::size_t s = 0; s < std::size(strategies); ++s) {
            const auto stream = static_cast<std::uint64_t>(which) * 16 + s * 4;
            const auto counts = bias::invert_and_measure(state, noise, config.shots, strategies[s], config.seed + stream);
            rows.push_back({register_state_name(which), std::string(bias::to_string(strategies[s].kind)), config.shots,
                            bias::fidelity(counts, target)});
        }
    }
    return rows;
}

std::vector<bias::ShotScalingRow> sampling_experiment(const ExperimentConfig &config) {
    config.validate();
    auto state = sim::Statevector::zero(config.sampling_qubits);
    for (int q = 0; q < config.sampling_qubits; ++q) sim::apply_gate_inplace(state, sim::Gate::h(q), 0.0);
    return bias::shot_scaling_experiment(state, 0, config.shot_list, config.repeats, config.seed);
}

std::vector<kernel::ConcentrationRow> kernel_experiment(const ExperimentConfig &config) {
    config.validate();
    return kernel::concentration_experiment(config.n_list, config.kernel_m, config.kernel_seeds, config.seed);
}

std::string bench_csv(const std::vector<BenchRow> &rows) {
    std::string out = "encoding,epoch,train_loss,train_acc,test_acc,seed\n";
    for (const auto &r : rows) {
        out += r.encoding + ',' + std::to_string(r.epoch) + ',' + number(r.train_loss) + ',' + number(r.train_acc) +
               ',' + number(r.test_acc) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

std::string readout_csv(const std::vector<ReadoutRow> &rows) {
    std::string out = "state,strategy,shots,fidelity\n";
    for (const auto &r : rows) {
        out += r.state + ',' + r.strategy + ',' + std::to_string(r.shots) + ',' + number(r.fidelity) + '\n';
    }
    return out;
}

std::string sampling_csv(const std::vector<bias::ShotScalingRow> &rows) {
    std::string out = "shots,mean_estimate,std_estimate,exact\n";
    for (const auto &r : rows) {
        out += std::to_string(r.shots) + ',' + number(r.mean_estimate) + ',' + number(r.std_estimate) + ',' +
               number(r.exact) + '\n';
    }
    return out;
}

std::string kernel_csv(const std::vector<kernel::ConcentrationRow> &rows) {
    std::string out = "n_qubits,m,mean_offdiag,lambda_max\n";
    for (const auto &r : rows) {
        out += std::to_string(r.n_qubits) + ',' + std::to_string(r.m) + ',' + number(r.mean_offdiag) + ',' +
               number(r.lambda_max) + '\n';
    }
    return out;
}

std::filesystem::path metadata_path(const std::filesystem::path &out) {
    auto p = out;
    p += ".meta.json";
    return p;
}

void write_atomic(const std::filesystem::path &path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError("cannot write " + tmp.string());
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) throw DataError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw DataError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void run_experiment(const ExperimentConfig &config) {
    config.validate();
    if (config.out.empty()) throw ConfigError("no output path configured");

    json derived;
    std::string csv;
    switch (config.experiment) {
    case ExperimentKind::EncodeBench: {
        const auto data = load_bench_data(config);
        csv = bench_csv(encode_bench(config, data));
        derived["num_qubits"] = data.train.dim();
        derived["pool_block"] = config.effective_pool_block();
        derived["train_provenance"] = data.train.provenance;
        derived["test_provenance"] = data.test.provenance;
        std::vector<std::uint64_t> seeds;
        for (int run = 0; run < config.bench_seeds; ++run) seeds.push_back(bench_run_seed(config, run));
        derived["run_seeds"] = seeds;
        derived["readout_qubit"] = 0;
        derived["ansatz"] = "per layer: RY on every qubit, then CNOT(i, i+1 mod n) ring";
        break;
    }
    case ExperimentKind::ReadoutBias: {
        csv = readout_csv(readout_experiment(config));
        const auto rates = bias::calibrate_per_qubit_rates(config.f_zero, config.f_one, config.readout_qubits);
        derived["eps01"] = rates.eps01;
        derived["eps10"] = rates.eps10;
        break;
    }
    case ExperimentKind::Sampling:
        csv = sampling_csv(sampling_experiment(config));
        derived["state"] = "H on every qubit of |0...0>";
        derived["readout_qubit"] = 0;
        break;
    case ExperimentKind::KernelConcentration:
        csv = kernel_csv(kernel_experiment(config));
        derived["encoding"] = "angle";
        derived["data"] = "uniform [0,1]^n";
        derived["seeds_averaged"] = config.kernel_seeds;
        break;
    }

    json meta;
    meta["config"] = json::parse(config_to_json(config));
    meta["derived"] = derived;
    meta["conventions"] = {
        {"bit_order", "qubit 0 is the least significant index bit; bitstrings list qubit 0 first"},
        {"rng", "mt19937_64; task substream = seed + stream id"},
    };
    meta["csv"] = std::filesystem::path(config.out).filename().string();

    write_atomic(config.out, csv);
    write_atomic(metadata_path(config.out), meta.dump(2) + "\n");
}

}  // namespace qbias::experiments
