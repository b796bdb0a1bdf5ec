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

// Exact statevector simulation. Qubit i is bit i of the basis index (qubit 0
// least significant); rendered bitstrings list qubit 0 first.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbias/errors.hpp"
#include "qbias/rng.hpp"

namespace qbias::sim {

inline constexpr int kMaxQubits = 24;

enum class GateKind { X, H, RX, RY, RZ, CNOT };

constexpr bool is_rotation(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

inline std::string_view to_string(GateKind kind) {
    switch (kind) {
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

/// A gate angle bound to parameter `slot`: angle = scale * params[slot].
struct ParamRef {
    std::size_t slot = 0;
    double scale = 1.0;

    friend bool operator==(const ParamRef &, const ParamRef &) = default;
};

struct Gate {
    GateKind kind = GateKind::X;
    int target = 0;
    int control = -1;  // CNOT only
    double angle = 0.0;
    std::optional<ParamRef> param;

    static Gate x(int q) { return {GateKind::X, q, -1, 0.0, std::nullopt}; }
    static Gate h(int q) { return {GateKind::H, q, -1, 0.0, std::nullopt}; }
    static Gate rx(int q, double theta) { return {GateKind::RX, q, -1, theta, std::nullopt}; }
    static Gate ry(int q, double theta) { return {GateKind::RY, q, -1, theta, std::nullopt}; }
    static Gate rz(int q, double theta) { return {GateKind::RZ, q, -1, theta, std::nullopt}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, 0.0, std::nullopt}; }
    static Gate rotation(GateKind kind, int q, double theta) { return {kind, q, -1, theta, std::nullopt}; }
    static Gate rotation(GateKind kind, int q, ParamRef ref) { return {kind, q, -1, 0.0, ref}; }

    friend bool operator==(const Gate &, const Gate &) = default;
};

/// Throws IndexError unless `gate` is well formed on an n-qubit register.
inline void check_gate(const Gate &gate, int num_qubits) {
    if (gate.target < 0 || gate.target >= num_qubits) {
        throw IndexError("gate target " + std::to_string(gate.target) + " out of range for " +
                         std::to_string(num_qubits) + " qubits");
    }
    if (gate.kind == GateKind::CNOT) {
        if (gate.control < 0 || gate.control >= num_qubits) {
            throw IndexError("CNOT control " + std::to_string(gate.control) + " out of range");
        }
        if (gate.control == gate.target) throw IndexError("CNOT control equals target");
    }
    if (gate.param && !is_rotation(gate.kind)) {
        throw UnsupportedGateError("only rotation gates can reference a parameter slot");
    }
}

/// Single-qubit unitary of `kind` at `theta`; CNOT is rejected.
template <typename Real>
Eigen::Matrix<std::complex<Real>, 2, 2> gate_matrix(GateKind kind, double theta = 0.0) {
    using C = std::complex<Real>;
    const Real c = static_cast<Real>(std::cos(theta / 2));
    const Real s = static_cast<Real>(std::sin(theta / 2));
    const Real r = static_cast<Real>(1.0 / std::sqrt(2.0));
    Eigen::Matrix<C, 2, 2> m;
    switch (kind) {
    case GateKind::X:
        m << C(0), C(1), C(1), C(0);
        break;
    case GateKind::H:
        m << C(r), C(r), C(r), C(-r);
        break;
    case GateKind::RX:
        m << C(c), C(0, -s), C(0, -s), C(c);
        break;
    case GateKind::RY:
        m << C(c), C(-s), C(s), C(c);
        break;
    case GateKind::RZ:
        m << C(c, -s), C(0), C(0), C(c, s);
        break;
    case GateKind::CNOT:
        throw UnsupportedGateError("CNOT has no single-qubit matrix");
    }
    return m;
}

template <typename Real>
class BasicStatevector {
  public:
    using RealScalar = Real;
    using Scalar = std::complex<Real>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    /// |0...0> on n qubits. Throws CapacityError outside [1, kMaxQubits].
    static BasicStatevector zero(int num_qubits) {
        check_capacity(num_qubits);
        Vector amps = Vector::Zero(Eigen::Index{1} << num_qubits);
        amps[0] = Scalar(1);
        return BasicStatevector(num_qubits, std::move(amps));
    }

    /// Wraps an amplitude vector whose length is a power of two. The caller
    /// is responsible for normalization.
    static BasicStatevector from_amplitudes(Vector amps) {
        const auto dim = static_cast<std::uint64_t>(amps.size());
        if (dim < 2 || (dim & (dim - 1)) != 0) {
            throw ArityError("amplitude count must be a power of two >= 2");
        }
        int n = 0;
        while ((std::uint64_t{1} << n) < dim) ++n;
        check_capacity(n);
        return BasicStatevector(n, std::move(amps));
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector &amplitudes() const { return amps_; }
    Scalar operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
    Real norm_squared() const { return amps_.squaredNorm(); }

    Scalar *data() { return amps_.data(); }
    const Scalar *data() const { return amps_.data(); }

    friend bool operator==(const BasicStatevector &a, const BasicStatevector &b) {
        return a.num_qubits_ == b.num_qubits_ && a.amps_ == b.amps_;
    }

  private:
    BasicStatevector(int n, Vector amps) : num_qubits_(n), amps_(std::move(amps)) {}

    static void check_capacity(int n) {
        if (n < 1 || n > kMaxQubits) {
            throw CapacityError("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
        }
    }

    int num_qubits_;
    Vector amps_;
};

using Statevector = BasicStatevector<double>;

inline Statevector new_zero_state(int num_qubits) { return Statevector::zero(num_qubits); }

namespace detail {

template <typename Real, typename F>
void for_each_pair(std::complex<Real> *v, std::size_t dim, int q, F &&f) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) f(v[i], v[i + stride]);
    }
}

}  // namespace detail

/// Applies `gate` at rotation angle `theta` in place (strided amplitude pairs;
/// no matrix is materialized). The gate's own `angle` field is ignored.
template <typename Real>
void apply_gate_inplace(BasicStatevector<Real> &state, const Gate &gate, double theta) {
    using C = std::complex<Real>;
    check_gate(gate, state.num_qubits());
    C *v = state.data();
    const std::size_t dim = state.dim();
    const int q = gate.target;
    const Real c = static_cast<Real>(std::cos(theta / 2));
    const Real s = static_cast<Real>(std::sin(theta / 2));

    switch (gate.kind) {
    case GateKind::X:
        detail::for_each_pair(v, dim, q, [](C &a, C &b) { std::swap(a, b); });
        break;
    case GateKind::H: {
        const Real r = static_cast<Real>(1.0 / std::sqrt(2.0));
        detail::for_each_pair(v, dim, q, [r](C &a, C &b) {
            const C a0 = a;
            a = C((a0.real() + b.real()) * r, (a0.imag() + b.imag()) * r);
            b = C((a0.real() - b.real()) * r, (a0.imag() - b.imag()) * r);
        });
        break;
    }
    case GateKind::RX:
        // [[c, -is], [-is, c]]
        detail::for_each_pair(v, dim, q, [c, s](C &a, C &b) {
            const C a0 = a;
            a = C(c * a0.real() + s * b.imag(), c * a0.imag() - s * b.real());
            b = C(s * a0.imag() + c * b.real(), -s * a0.real() + c * b.imag());
        });
        break;
    case GateKind::RY:
        detail::for_each_pair(v, dim, q, [c, s](C &a, C &b) {
            const C a0 = a;
            a = C(c * a0.real() - s * b.real(), c * a0.imag() - s * b.imag());
            b = C(s * a0.real() + c * b.real(), s * a0.imag() + c * b.imag());
        });
        break;
    case GateKind::RZ:
        // diag(c - is, c + is)
        detail::for_each_pair(v, dim, q, [c, s](C &a, C &b) {
            a = C(c * a.real() + s * a.imag(), c * a.imag() - s * a.real());
            b = C(c * b.real() - s * b.imag(), c * b.imag() + s * b.real());
        });
        break;
    case GateKind::CNOT: {
        const std::size_t cbit = std::size_t{1} << gate.control;
        detail::for_each_pair(v, dim, q, [&](C &a, C &b) {
            if ((static_cast<std::size_t>(&a - v) & cbit) != 0) std::swap(a, b);
        });
        break;
    }
    }
}

/// Returns the state transformed by `gate` at its literal angle.
template <typename Real>
BasicStatevector<Real> apply_gate(BasicStatevector<Real> state, const Gate &gate) {
    apply_gate_inplace(state, gate, gate.angle);
    return state;
}

/// Ordered gate list over a fixed register with free parameter slots.
/// A gate carrying a ParamRef takes angle scale * params[slot]; other gates
/// use their literal angle.
class Circuit {
  public:
    explicit Circuit(int num_qubits, std::size_t num_params = 0)
        : num_qubits_(num_qubits), num_params_(num_params) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw CapacityError("circuit qubit count " + std::to_string(num_qubits) +
                                " outside [1, " + std::to_string(kMaxQubits) + "]");
        }
    }

    /// Appends a gate. A ParamRef slot beyond the current count grows it.
    Circuit &add(const Gate &gate) {
        check_gate(gate, num_qubits_);
        if (gate.param) num_params_ = std::max(num_params_, gate.param->slot + 1);
        gates_.push_back(gate);
        return *this;
    }

    Circuit &x(int q) { return add(Gate::x(q)); }
    Circuit &h(int q) { return add(Gate::h(q)); }
    Circuit &rx(int q, double theta) { return add(Gate::rx(q, theta)); }
    Circuit &ry(int q, double theta) { return add(Gate::ry(q, theta)); }
    Circuit &rz(int q, double theta) { return add(Gate::rz(q, theta)); }
    Circuit &cnot(int control, int target) { return add(Gate::cnot(control, target)); }
    Circuit &rotation(GateKind kind, int q, ParamRef ref) { return add(Gate::rotation(kind, q, ref)); }

    /// Appends `other`'s gates, shifting its parameter slots by `slot_offset`.
    Circuit &append(const Circuit &other, std::size_t slot_offset = 0) {
        if (other.num_qubits_ != num_qubits_) throw ArityError("circuit register sizes differ");
        gates_.reserve(gates_.size() + other.gates_.size());
        for (Gate g : other.gates_) {
            if (g.param) g.param->slot += slot_offset;
            add(g);
        }
        num_params_ = std::max(num_params_, slot_offset + other.num_params_);
        return *this;
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t num_params() const { return num_params_; }
    std::size_t size() const { return gates_.size(); }
    const std::vector<Gate> &gates() const { return gates_; }
    const Gate &operator[](std::size_t i) const { return gates_[i]; }

    /// Angle of gate `i` under `params`.
    double bound_angle(std::size_t i, const Eigen::Ref<const Eigen::VectorXd> &params) const {
        const Gate &g = gates_[i];
        if (!g.param) return g.angle;
        return g.param->scale * params[static_cast<Eigen::Index>(g.param->slot)];
    }

    /// (gate position, scale) for every gate referencing `slot`.
    std::vector<std::pair<std::size_t, double>> bindings(std::size_t slot) const {
        std::vector<std::pair<std::size_t, double>> out;
        for (std::size_t i = 0; i < gates_.size(); ++i) {
            if (gates_[i].param && gates_[i].param->slot == slot) out.emplace_back(i, gates_[i].param->scale);
        }
        return out;
    }

    /// Throws ArityError if some slot is referenced by no gate.
    void check_slots() const {
        std::vector<bool> used(num_params_, false);
        for (const Gate &g : gates_) {
            if (g.param) used[g.param->slot] = true;
        }
        for (std::size_t k = 0; k < num_params_; ++k) {
            if (!used[k]) throw ArityError("parameter slot " + std::to_string(k) + " is unreferenced");
        }
    }

  private:
    int num_qubits_;
    std::size_t num_params_;
    std::vector<Gate> gates_;
};

/// Applies gates [first, last) of `circuit` in place.
template <typename Real>
void apply_range_inplace(BasicStatevector<Real> &state, const Circuit &circuit,
                         const Eigen::Ref<const Eigen::VectorXd> &params, std::size_t first,
                         std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
        apply_gate_inplace(state, circuit[i], circuit.bound_angle(i, params));
    }
}

template <typename Real>
BasicStatevector<Real> apply_circuit(BasicStatevector<Real> state, const Circuit &circuit,
                                     const Eigen::Ref<const Eigen::VectorXd> &params) {
    if (static_cast<std::size_t>(params.size()) != circuit.num_params()) {
        throw ArityError("circuit expects " + std::to_string(circuit.num_params()) +
                         " parameters, got " + std::to_string(params.size()));
    }
    if (circuit.num_qubits() != state.num_qubits()) {
        throw ArityError("circuit and state register sizes differ");
    }
    circuit.check_slots();
    apply_range_inplace(state, circuit, params, 0, circuit.size());
    return state;
}

/// Parameter-free convenience overload.
template <typename Real>
BasicStatevector<Real> apply_circuit(BasicStatevector<Real> state, const Circuit &circuit) {
    return apply_circuit(std::move(state), circuit, Eigen::VectorXd(0));
}

/// Born-rule probabilities |a_j|^2.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> probabilities(const BasicStatevector<Real> &state) {
    return state.amplitudes().cwiseAbs2();
}

/// <Z> on `qubit`: sum_j p_j * (+1 if bit clear else -1).
template <typename Real>
Real expectation_z(const BasicStatevector<Real> &state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw IndexError("qubit " + std::to_string(qubit) + " out of range");
    }
    const std::size_t bit = std::size_t{1} << qubit;
    const auto *v = state.data();
    Real acc = 0;
    for (std::size_t j = 0; j < state.dim(); ++j) {
        const Real p = std::norm(v[j]);
        acc += (j & bit) ? -p : p;
    }
    return acc;
}

/// Qubit-0-first rendering of basis index `index`.
inline std::string bitstring(std::uint64_t index, int num_qubits) {
    std::string s(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 0; q < num_qubits; ++q) {
        if ((index >> q) & 1U) s[static_cast<std::size_t>(q)] = '1';
    }
    return s;
}

/// Inverse of bitstring(); throws ArityError/FormatError on bad input.
inline std::uint64_t parse_bitstring(std::string_view bits, int num_qubits) {
    if (bits.size() != static_cast<std::size_t>(num_qubits)) throw ArityError("bitstring length mismatch");
    std::uint64_t index = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') {
            index |= std::uint64_t{1} << q;
        } else if (bits[q] != '0') {
            throw FormatError("bitstring may only contain '0' and '1'");
        }
    }
    return index;
}

struct ShotCounts {
    int num_qubits = 0;
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> counts;

    std::uint64_t count(const std::string &bits) const {
        const auto it = counts.find(bits);
        return it == counts.end() ? 0 : it->second;
    }

    friend bool operator==(const ShotCounts &, const ShotCounts &) = default;
};

inline ShotCounts tally(const std::vector<std::uint64_t> &outcomes, int num_qubits) {
    ShotCounts out{num_qubits, outcomes.size(), {}};
    for (const auto idx : outcomes) ++out.counts[bitstring(idx, num_qubits)];
    return out;
}

/// `shots` basis-index draws by inverse CDF over probabilities(state).
template <typename Real>
std::vector<std::uint64_t> sample_indices(const BasicStatevector<Real> &state, std::uint64_t shots, Rng &rng) {
    if (shots == 0) throw InputError("shot count must be positive");
    const auto p = probabilities(state);
    std::vector<double> cdf(state.dim());
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t j = 0; j < cdf.size(); ++j) {
        const double pj = static_cast<double>(p[static_cast<Eigen::Index>(j)]);
        acc += pj;
        cdf[j] = acc;
        if (pj > 0.0) last_nonzero = j;
    }
    std::vector<std::uint64_t> out;
    out.reserve(shots);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        out.push_back(std::min(idx, last_nonzero));
    }
    return out;
}

/// Seeded, reproducible measurement of every qubit `shots` times.
template <typename Real>
ShotCounts sample_counts(const BasicStatevector<Real> &state, std::uint64_t shots, std::uint64_t seed) {
    Rng rng(seed);
    return tally(sample_indices(state, shots, rng), state.num_qubits());
}

}  // namespace qbias::sim
