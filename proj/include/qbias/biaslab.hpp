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
#include <string>
#include <string_view>
#include <vector>

#include "qbias/simcore.hpp"

namespace qbias::bias {

/// Misread probabilities of one qubit: eps01 = P(read 1 | true 0),
/// eps10 = P(read 0 | true 1). Relaxation favours eps10 > eps01.
struct QubitReadout {
    double eps01 = 0.0;
    double eps10 = 0.0;

    friend bool operator==(const QubitReadout &, const QubitReadout &) = default;
};

/// Independent per-qubit, per-shot readout flips.
struct ReadoutNoiseModel {
    std::vector<QubitReadout> qubits;

    static ReadoutNoiseModel uniform(int num_qubits, double eps01, double eps10);
    static ReadoutNoiseModel noiseless(int num_qubits) { return uniform(num_qubits, 0.0, 0.0); }

    int num_qubits() const { return static_cast<int>(qubits.size()); }

    /// DomainError if any probability leaves [0, 1].
    void validate() const;
};

enum class MitigationKind { None, InvertAll, InvertMask, DualRunAverage };

/// "none", "invert-all", "invert-mask", "dual-run-average".
std::string_view to_string(MitigationKind kind);

struct MitigationStrategy {
    MitigationKind kind = MitigationKind::None;
    std::vector<bool> mask;  // InvertMask only; entry q inverts qubit q

    static MitigationStrategy none() { return {}; }
    static MitigationStrategy invert_all() { return {MitigationKind::InvertAll, {}}; }
    static MitigationStrategy invert_mask(std::vector<bool> mask) { return {MitigationKind::InvertMask, std::move(mask)}; }
    static MitigationStrategy dual_run_average() { return {MitigationKind::DualRunAverage, {}}; }
};

/// Ideal measurement drawn exactly as sim::sample_counts(state, shots, seed),
/// then every bit flipped independently per the noise model using a
/// separate substream of `seed`.
sim::ShotCounts sample_with_noise(const sim::Statevector &state, std::uint64_t shots,
                                  const ReadoutNoiseModel &noise, std::uint64_t seed);

/// count(target) / shots.
double fidelity(const sim::ShotCounts &counts, const std::string &target);

struct CalibratedRates {
    double eps01 = 0.0;
    double eps10 = 0.0;
};

/// Per-qubit rates whose n-fold products reproduce the all-zero and all-one
/// fidelities: eps01 = 1 - f_zero^(1/n), eps10 = 1 - f_one^(1/n).
CalibratedRates calibrate_per_qubit_rates(double f_zero, double f_one, int num_qubits);

/// Measures `state` under `noise`, inverting the selected qubits with X
/// before readout and flipping those classical bits back afterwards. Counts
/// are always in the original frame. DualRunAverage pools shots/2 plain
/// shots with the remaining shots under InvertAll.
sim::ShotCounts invert_and_measure(const sim::Statevector &state, const ReadoutNoiseModel &noise,
                                   std::uint64_t shots, const MitigationStrategy &strategy, std::uint64_t seed);

struct ShotScalingRow {
    std::uint64_t shots = 0;
    double mean_estimate = 0.0;
    double std_estimate = 0.0;
    double exact = 0.0;
};

/// For each budget S, `repeats` independent <Z_qubit> estimates from S
/// shots; reports their mean and sample standard deviation next to the
/// exact expectation.
std::vector<ShotScalingRow> shot_scaling_experiment(const sim::Statevector &state, int qubit,
                                                    const std::vector<std::uint64_t> &shot_list, int repeats,
                                                    std::uint64_t seed);

}  // namespace qbias::bias
