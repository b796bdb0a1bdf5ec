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

#include "qbias/vqc.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qbias/errors.hpp"
#include "qbias/rng.hpp"

namespace qbias::vqc {

using Eigen::Index;

void TrainConfig::validate() const {
    if (epochs < 1) throw InputError("epochs must be at least 1");
    if (batch_size < 1) throw InputError("batch_size must be at least 1");
    if (!(learning_rate >= 0.0)) throw InputError("learning_rate must be non-negative");
    if (layers < 0) throw InputError("layers must be non-negative");
}

sim::Circuit build_ansatz(int num_qubits, int layers) {
    if (layers < 0) throw InputError("layers must be non-negative");
    sim::Circuit c(num_qubits, static_cast<std::size_t>(layers) * static_cast<std::size_t>(num_qubits));
    std::size_t slot = 0;
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < num_qubits; ++q) c.rotation(sim::GateKind::RY, q, {slot++, 1.0});
        if (num_qubits > 1) {
            for (int q = 0; q < num_qubits; ++q) c.cnot(q, (q + 1) % num_qubits);
        }
    }
    return c;
}

Model make_model(const encode::EncodingSpec &encoding, int layers, std::uint64_t seed) {
    encoding.validate();
    Model m{encoding, build_ansatz(encoding.num_features, layers), {}, 0};
    const auto n_ansatz = static_cast<Index>(m.ansatz.num_params());
    m.params.resize(n_ansatz + static_cast<Index>(encoding.num_trainable()));
    Rng rng = substream(seed, 0);
    for (Index k = 0; k < n_ansatz; ++k) m.params[k] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    if (encoding.num_trainable() > 0) m.params.tail(encoding.num_features) = encoding.weights;
    return m;
}

sim::Circuit forward_circuit(const Model &model, const Eigen::Ref<const Eigen::VectorXd> &features) {
    sim::Circuit c(model.num_qubits());
    c.append(encode::encode(model.encoding, features), model.num_ansatz_params());
    c.append(model.ansatz, 0);
    return c;
}

namespace {

void check_params(const Model &model, const Eigen::Ref<const Eigen::VectorXd> &params) {
    const auto expected = model.num_ansatz_params() + model.encoding.num_trainable();
    if (static_cast<std::size_t>(params.size()) != expected) {
        throw ArityError("model expects " + std::to_string(expected) + " parameters, got " +
                         std::to_string(params.size()));
    }
}

void check_batch(const Eigen::Ref<const Eigen::MatrixXd> &features, const Eigen::Ref<const Eigen::VectorXd> &labels) {
    if (features.rows() != labels.size()) throw ArityError("feature rows and labels differ in length");
    if (features.rows() == 0) throw InputError("empty batch");
}

}  // namespace

double predict(const Model &model, const Eigen::Ref<const Eigen::VectorXd> &features,
               const Eigen::Ref<const Eigen::VectorXd> &params) {
    check_params(model, params);
    const auto circuit = forward_circuit(model, features);
    const auto state = sim::apply_circuit(sim::Statevector::zero(model.num_qubits()), circuit, params);
    return sim::expectation_z(state, model.readout_qubit);
}

double predict(const Model &model, const Eigen::Ref<const Eigen::VectorXd> &features) {
    return predict(model, features, model.params);
}

Eigen::VectorXd predict_batch(const Model &model, const Eigen::Ref<const Eigen::MatrixXd> &features) {
    Eigen::VectorXd out(features.rows());
    for (Index i = 0; i < features.rows(); ++i) out[i] = predict(model, features.row(i).transpose());
    return out;
}

double mse_loss(const Eigen::Ref<const Eigen::VectorXd> &predictions, const Eigen::Ref<const Eigen::VectorXd> &labels) {
    if (predictions.size() != labels.size()) throw ArityError("predictions and labels differ in length");
    if (predictions.size() == 0) throw InputError("empty prediction vector");
    return (predictions - labels).squaredNorm() / static_cast<double>(predictions.size());
}

LossGradient loss_and_gradient(const Model &model, const Eigen::Ref<const Eigen::MatrixXd> &features,
                               const Eigen::Ref<const Eigen::VectorXd> &labels) {
    check_params(model, model.params);
    check_batch(features, labels);
    const auto batch = static_cast<double>(features.rows());
    const int n = model.num_qubits();
    const Eigen::VectorXd &params = model.params;

    LossGradient out{0.0, Eigen::VectorXd::Zero(params.size())};
    for (Index s = 0; s < features.rows(); ++s) {
        const auto circuit = forward_circuit(model, features.row(s).transpose());
        circuit.check_slots();

        // Forward pass, keeping the state in front of every parameterized gate.
        std::vector<std::size_t> positions;
        std::vector<sim::Statevector> before;
        auto state = sim::Statevector::zero(n);
        for (std::size_t g = 0; g < circuit.size(); ++g) {
            if (circuit[g].param) {
                if (!sim::is_rotation(circuit[g].kind)) {
                    throw UnsupportedGateError("parameter shift requires single-parameter rotations");
                }
                positions.push_back(g);
                before.push_back(state);
            }
            sim::apply_gate_inplace(state, circuit[g], circuit.bound_angle(g, params));
        }
        const double pred = sim::expectation_z(state, model.readout_qubit);
        const double residual = pred - labels[s];
        out.loss += residual * residual / batch;
        const double dloss = 2.0 * residual / batch;

        for (std::size_t k = 0; k < positions.size(); ++k) {
            const std::size_t g = positions[k];
            const auto &ref = *circuit[g].param;
            if (ref.scale == 0.0) continue;
            const double angle = circuit.bound_angle(g, params);
            double shifted[2];
            for (int side = 0; side < 2; ++side) {
                auto st = before[k];
                const double shift = side == 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2;
                sim::apply_gate_inplace(st, circuit[g], angle + shift);
                sim::apply_range_inplace(st, circuit, params, g + 1, circuit.size());
                shifted[side] = sim::expectation_z(st, model.readout_qubit);
            }
            out.gradient[static_cast<Index>(ref.slot)] += dloss * ref.scale * (shifted[0] - shifted[1]) / 2.0;
        }
    }
    return out;
}

Eigen::VectorXd parameter_shift_gradient(const Model &model, const Eigen::Ref<const Eigen::MatrixXd> &features,
                                         const Eigen::Ref<const Eigen::VectorXd> &labels) {
    return loss_and_gradient(model, features, labels).gradient;
}

Adam::Adam(Index num_params, double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps), m_(Eigen::VectorXd::Zero(num_params)),
      v_(Eigen::VectorXd::Zero(num_params)) {}

void Adam::step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd> &gradient) {
    if (params.size() != m_.size() || gradient.size() != m_.size()) throw ArityError("Adam parameter size mismatch");
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * gradient;
    v_ = beta2_ * v_ + (1.0 - beta2_) * gradient.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

double evaluate(const Model &model, const data::Dataset &dataset) {
    if (dataset.size() == 0) throw InputError("cannot evaluate on an empty dataset");
    if (dataset.labels.size() != dataset.size()) throw ArityError("dataset label count differs from row count");
    Index correct = 0;
    for (Index i = 0; i < dataset.size(); ++i) {
        const double sign = predict(model, dataset.features.row(i).transpose()) >= 0.0 ? 1.0 : -1.0;
        if (sign == dataset.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

bool TrainReport::same_result(const TrainReport &other) const {
    return rows == other.rows && final_params.size() == other.final_params.size() &&
           final_params == other.final_params && config == other.config;
}

TrainReport train(const data::Dataset &train_set, const data::Dataset &test_set, Model &model,
                  const TrainConfig &config) {
    config.validate();
    if (train_set.size() == 0) throw InputError("training set is empty");
    if (test_set.size() == 0) throw InputError("test set is empty");
    train_set.validate();
    test_set.validate();
    check_params(model, model.params);

    const auto start = std::chrono::steady_clock::now();
    TrainReport report;
    report.config = config;

    Adam adam(model.params.size(), config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_eps);
    Rng shuffle_rng = substream(config.seed, 1);
    std::vector<Index> order(static_cast<std::size_t>(train_set.size()));
    std::iota(order.begin(), order.end(), Index{0});

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        for (std::size_t first = 0; first < order.size(); first += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t last = std::min(order.size(), first + static_cast<std::size_t>(config.batch_size));
            const auto batch = train_set.subset(std::span(order).subspan(first, last - first));
            const auto lg = loss_and_gradient(model, batch.features, batch.labels);
            loss_sum += lg.loss * static_cast<double>(last - first);
            adam.step(model.params, lg.gradient);
        }
        report.rows.push_back({epoch, loss_sum / static_cast<double>(order.size()), evaluate(model, train_set),
                               evaluate(model, test_set)});
    }
    report.final_params = model.params;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace qbias::vqc
