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

#include "qbias/biaslab.hpp"

#include <cmath>

#include "qbias/errors.hpp"
#include "qbias/rng.hpp"

namespace qbias::bias {

namespace {

// Stream id for readout flips, kept far away from small task ids.
constexpr std::uint64_t kFlipStream = 0x9E3779B97F4A7C15ULL;

std::vector<std::uint64_t> noisy_indices(const sim::Statevector &state, std::uint64_t shots,
                                         const ReadoutNoiseModel &noise, std::uint64_t seed) {
    if (noise.num_qubits() != state.num_qubits()) throw ArityError("noise model and state qubit counts differ");
    noise.validate();
    Rng ideal(seed);
    auto outcomes = sim::sample_indices(state, shots, ideal);
    Rng flips = substream(seed, kFlipStream);
    for (auto &idx : outcomes) {
        for (int q = 0; q < noise.num_qubits(); ++q) {
            const std::uint64_t bit = std::uint64_t{1} << q;
            const auto &r = noise.qubits[static_cast<std::size_t>(q)];
            const double u = flips.uniform();
            if ((idx & bit) == 0 ? u < r.eps01 : u < r.eps10) idx ^= bit;
        }
    }
    return outcomes;
}

std::vector<std::uint64_t> inverted_indices(const sim::Statevector &state, std::uint64_t shots,
                                            const ReadoutNoiseModel &noise, std::uint64_t mask,
                                            std::uint64_t seed) {
    auto flipped = state;
    for (int q = 0; q < state.num_qubits(); ++q) {
        if ((mask >> q) & 1U) sim::apply_gate_inplace(flipped, sim::Gate::x(q), 0.0);
    }
    auto outcomes = noisy_indices(flipped, shots, noise, seed);
    for (auto &idx : outcomes) idx ^= mask;
    return outcomes;
}

}  // namespace

ReadoutNoiseModel ReadoutNoiseModel::uniform(int num_qubits, double eps01, double eps10) {
    if (num_qubits < 1) throw InputError("noise model needs at least one qubit");
    ReadoutNoiseModel m{std::vector<QubitReadout>(static_cast<std::size_t>(num_qubits), {eps01, eps10})};
    m.validate();
    return m;
}

void ReadoutNoiseModel::validate() const {
    for (const auto &q : qubits) {
        if (!(q.eps01 >= 0.0 && q.eps01 <= 1.0 && q.eps10 >= 0.0 && q.eps10 <= 1.0)) {
            throw DomainError("readout error probabilities must lie in [0, 1]");
        }
    }
}

std::string_view to_string(MitigationKind kind) {
    switch (kind) {
    case MitigationKind::None: return "none";
    case MitigationKind::InvertAll: return "invert-all";
    case MitigationKind::InvertMask: return "invert-mask";
    case MitigationKind::DualRunAverage: return "dual-run-average";
    }
    return "?";
}

sim::ShotCounts sample_with_noise(const sim::Statevector &state, std::uint64_t shots,
                                  const ReadoutNoiseModel &noise, std::uint64_t seed) {
    return sim::tally(noisy_indices(state, shots, noise, seed), state.num_qubits());
}

double fidelity(const sim::ShotCounts &counts, const std::string &target) {
    if (target.size() != static_cast<std::size_t>(counts.num_qubits)) {
        throw ArityError("target bitstring length differs from the register size");
    }
    if (counts.shots == 0) throw InputError("no shots recorded");
    return static_cast<double>(counts.count(target)) / static_cast<double>(counts.shots);
}

CalibratedRates calibrate_per_qubit_rates(double f_zero, double f_one, int num_qubits) {
    if (!(f_zero > 0.0 && f_zero <= 1.0) || !(f_one > 0.0 && f_one <= 1.0)) {
        throw DomainError("fidelities must lie in (0, 1]");
    }
    if (num_qubits < 1) throw DomainError("qubit count must be positive");
    const double root = 1.0 / num_qubits;
    return {1.0 - std::pow(f_zero, root), 1.0 - std::pow(f_one, root)};
}

sim::ShotCounts invert_and_measure(const sim::Statevector &state, const ReadoutNoiseModel &noise,
                                   std::uint64_t shots, const MitigationStrategy &strategy, std::uint64_t seed) {
    const int n = state.num_qubits();
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    switch (strategy.kind) {
    case MitigationKind::None:
        return sample_with_noise(state, shots, noise, seed);
    case MitigationKind::InvertAll:
        return sim::tally(inverted_indices(state, shots, noise, all, seed), n);
    case MitigationKind::InvertMask: {
        if (strategy.mask.size() != static_cast<std::size_t>(n)) throw ArityError("inversion mask length mismatch");
        std::uint64_t mask = 0;
        for (int q = 0; q < n; ++q) {
            if (strategy.mask[static_cast<std::size_t>(q)]) mask |= std::uint64_t{1} << q;
        }
        return sim::tally(inverted_indices(state, shots, noise, mask, seed), n);
    }
    case MitigationKind::DualRunAverage: {
        if (shots == 0) throw InputError("shot count must be positive");
        const std::uint64_t plain_shots = shots / 2;
        std::vector<std::uint64_t> pooled;
        if (plain_shots > 0) pooled = noisy_indices(state, plain_shots, noise, seed);
        const auto inverted = inverted_indices(state, shots - plain_shots, noise, all, seed + 1);
        pooled.insert(pooled.end(), inverted.begin(), inverted.end());
        return sim::tally(pooled, n);
    }
    }
    throw InputError("unknown mitigation strategy");
}

std::vector<ShotScalingRow> shot_scaling_experiment(const sim::Statevector &state, int qubit,
                                                    const std::vector<std::uint64_t> &shot_list, int repeats,
                                                    std::uint64_t seed) {
    if (repeats < 2) throw InputError("shot scaling needs at least two repeats");
    const double exact = sim::expectation_z(state, qubit);
    std::vector<ShotScalingRow> rows;
    for (std::size_t si = 0; si < shot_list.size(); ++si) {
        const std::uint64_t shots = shot_list[si];
        std::vector<double> estimates;
        estimates.reserve(static_cast<std::size_t>(repeats));
        for (int r = 0; r < repeats; ++r) {
            const auto stream = si * static_cast<std::uint64_t>(repeats) + static_cast<std::uint64_t>(r);
            const auto counts = sim::sample_counts(state, shots, seed + stream);
            double acc = 0.0;
            for (const auto &[bits, c] : counts.counts) {
                acc += bits[static_cast<std::size_t>(qubit)] == '0' ? static_cast<double>(c) : -static_cast<double>(c);
            }
            estimates.push_back(acc / static_cast<double>(shots));
        }
        double mean = 0.0;
        for (const double e : estimates) mean += e;
        mean /= repeats;
        double var = 0.0;
        for (const double e : estimates) var += (e - mean) * (e - mean);
        var /= repeats - 1;
        rows.push_back({shots, mean, std::sqrt(var), exact});
    }
    return rows;
}

}  // namespace qbias::bias
