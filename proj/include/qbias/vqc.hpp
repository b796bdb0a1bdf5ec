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

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbias/dataio.hpp"
#include "qbias/encode.hpp"
#include "qbias/simcore.hpp"

namespace qbias::vqc {

struct TrainConfig {
    int epochs = 20;
    int batch_size = 16;
    double learning_rate = 0.01;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    int layers = 2;

    /// Throws InputError on epochs < 1, batch_size < 1, learning_rate < 0 or
    /// layers < 0. A zero learning rate is accepted as a null update.
    void validate() const;

    friend bool operator==(const TrainConfig &, const TrainConfig &) = default;
};

/// Encoding followed by a fixed hardware-efficient ansatz, read out as <Z>
/// on one qubit. params = [ansatz angles..., hybrid encoding weights...].
struct Model {
    encode::EncodingSpec encoding;
    sim::Circuit ansatz{1};
    Eigen::VectorXd params;
    int readout_qubit = 0;

    std::size_t num_ansatz_params() const { return ansatz.num_params(); }
    int num_qubits() const { return encoding.num_features; }
};

/// Per layer: RY(slot) on every qubit, then CNOT(i, i+1 mod n) for all i
/// (ring omitted for n = 1). Slots are numbered layer-major.
sim::Circuit build_ansatz(int num_qubits, int layers);

/// Model with ansatz angles drawn uniformly from [-pi, pi) on substream 0 of
/// `seed` and hybrid weights copied from the encoding (1.0 by default).
Model make_model(const encode::EncodingSpec &encoding, int layers, std::uint64_t seed);

/// Encoding gates then ansatz gates for one sample, with the model's
/// parameter layout.
sim::Circuit forward_circuit(const Model &model, const Eigen::Ref<const Eigen::VectorXd> &features);

/// <Z_readout> after encoding `features` and applying the ansatz.
double predict(const Model &model, const Eigen::Ref<const Eigen::VectorXd> &features);
double predict(const Model &model, const Eigen::Ref<const Eigen::VectorXd> &features,
               const Eigen::Ref<const Eigen::VectorXd> &params);

Eigen::VectorXd predict_batch(const Model &model, const Eigen::Ref<const Eigen::MatrixXd> &features);

double mse_loss(const Eigen::Ref<const Eigen::VectorXd> &predictions, const Eigen::Ref<const Eigen::VectorXd> &labels);

struct LossGradient {
    double loss = 0.0;
    Eigen::VectorXd gradient;
};

/// Batch MSE and its exact gradient. Each parameterized gate occurrence with
/// scale s contributes s * (f(+pi/2) - f(-pi/2)) / 2, chained with
/// dL/dpred = 2 (pred - label) / batch.
LossGradient loss_and_gradient(const Model &model, const Eigen::Ref<const Eigen::MatrixXd> &features,
                               const Eigen::Ref<const Eigen::VectorXd> &labels);

Eigen::VectorXd parameter_shift_gradient(const Model &model, const Eigen::Ref<const Eigen::MatrixXd> &features,
                                         const Eigen::Ref<const Eigen::VectorXd> &labels);

class Adam {
  public:
    Adam(Eigen::Index num_params, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
         double eps = 1e-8);

    void step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd> &gradient);

    long steps() const { return t_; }

  private:
    double lr_, beta1_, beta2_, eps_;
    Eigen::VectorXd m_, v_;
    long t_ = 0;
};

/// Fraction of samples with sign(predict) == label, sign(0) taken as +1.
double evaluate(const Model &model, const data::Dataset &dataset);

struct EpochRow {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;

    friend bool operator==(const EpochRow &, const EpochRow &) = default;
};

struct TrainReport {
    std::vector<EpochRow> rows;
    Eigen::VectorXd final_params;
    TrainConfig config;
    double wall_seconds = 0.0;

    /// Equality of everything except wall-clock time.
    bool same_result(const TrainReport &other) const;
};

/// Adam over mini-batches reshuffled every epoch from substream 1 of
/// config.seed. `model.params` is updated in place. train_loss is the mean
/// squared error over the epoch's batches before each update.
TrainReport train(const data::Dataset &train_set, const data::Dataset &test_set, Model &model,
                  const TrainConfig &config);

}  // namespace qbias::vqc
