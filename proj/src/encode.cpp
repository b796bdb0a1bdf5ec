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

#include "qbias/encode.hpp"

#include <algorithm>
#include <numbers>

#include "qbias/errors.hpp"

namespace qbias::encode {

namespace {

sim::GateKind rotation_for(Axis axis) {
    switch (axis) {
    case Axis::X: return sim::GateKind::RX;
    case Axis::Y: return sim::GateKind::RY;
    case Axis::Z: return sim::GateKind::RZ;
    }
    return sim::GateKind::RY;
}

int width(const Eigen::Ref<const Eigen::VectorXd> &features) {
    if (features.size() < 1) throw ArityError("feature vector is empty");
    return static_cast<int>(features.size());
}

}  // namespace

EncodingSpec EncodingSpec::basis(int num_features, double threshold) {
    EncodingSpec s;
    s.kind = EncodingKind::Basis;
    s.num_features = num_features;
    s.threshold = threshold;
    s.validate();
    return s;
}

EncodingSpec EncodingSpec::angle(int num_features) {
    EncodingSpec s;
    s.kind = EncodingKind::Angle;
    s.num_features = num_features;
    s.validate();
    return s;
}

EncodingSpec EncodingSpec::hybrid(int num_features, Axis axis, bool hadamard_pre) {
    EncodingSpec s;
    s.kind = EncodingKind::Hybrid;
    s.num_features = num_features;
    s.axis = axis;
    s.hadamard_pre = hadamard_pre;
    s.weights = Eigen::VectorXd::Ones(std::max(num_features, 0));
    s.validate();
    return s;
}

void EncodingSpec::validate() const {
    if (num_features < 1 || num_features > sim::kMaxQubits) {
        throw CapacityError("feature count " + std::to_string(num_features) + " outside [1, " +
                            std::to_string(sim::kMaxQubits) + "]");
    }
    if (kind == EncodingKind::Basis && !(threshold > 0.0 && threshold < 1.0)) {
        throw RangeError("basis threshold must lie in (0, 1)");
    }
    if (kind == EncodingKind::Hybrid && weights.size() != num_features) {
        throw ArityError("hybrid weights length must equal the feature count");
    }
}

std::size_t EncodingSpec::num_trainable() const {
    return kind == EncodingKind::Hybrid ? static_cast<std::size_t>(num_features) : 0;
}

std::string name(const EncodingSpec &spec) {
    switch (spec.kind) {
    case EncodingKind::Basis: return "basis";
    case EncodingKind::Angle: return "angle";
    case EncodingKind::Hybrid:
        switch (spec.axis) {
        case Axis::X: return "hybrid-rx";
        case Axis::Y: return "hybrid-ry";
        case Axis::Z: return "hybrid-rz";
        }
    }
    return "?";
}

EncodingSpec from_name(std::string_view name, int num_features, bool hadamard_pre) {
    if (name == "basis") return EncodingSpec::basis(num_features);
    if (name == "angle") return EncodingSpec::angle(num_features);
    if (name == "hybrid-rx") return EncodingSpec::hybrid(num_features, Axis::X, hadamard_pre);
    if (name == "hybrid-ry") return EncodingSpec::hybrid(num_features, Axis::Y, hadamard_pre);
    if (name == "hybrid-rz") return EncodingSpec::hybrid(num_features, Axis::Z, hadamard_pre);
    throw ConfigError("unknown encoding '" + std::string(name) + "'");
}

Eigen::VectorXd normalize_features(const Eigen::Ref<const Eigen::VectorXd> &raw, double lo, double hi) {
    if (!(hi > lo)) throw RangeError("normalize_features requires hi > lo");
    return ((raw.array() - lo) / (hi - lo)).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

sim::Circuit encode_basis(const Eigen::Ref<const Eigen::VectorXd> &features, double threshold) {
    sim::Circuit c(width(features));
    for (Eigen::Index i = 0; i < features.size(); ++i) {
        if (features[i] >= threshold) c.x(static_cast<int>(i));
    }
    return c;
}

sim::Circuit encode_angle(const Eigen::Ref<const Eigen::VectorXd> &features) {
    sim::Circuit c(width(features));
    for (Eigen::Index i = 0; i < features.size(); ++i) {
        c.ry(static_cast<int>(i), std::numbers::pi * features[i]);
    }
    return c;
}

sim::Circuit encode_hybrid(const Eigen::Ref<const Eigen::VectorXd> &features,
                           const Eigen::Ref<const Eigen::VectorXd> &weights, Axis axis, bool hadamard_pre) {
    const int n = width(features);
    if (weights.size() != features.size()) throw ArityError("hybrid weights length must equal the feature count");
    sim::Circuit c(n, static_cast<std::size_t>(n));
    if (hadamard_pre) {
        for (int q = 0; q < n; ++q) c.h(q);
    }
    const auto kind = rotation_for(axis);
    for (int q = 0; q < n; ++q) {
        c.rotation(kind, q, {static_cast<std::size_t>(q), std::numbers::pi * features[q]});
    }
    return c;
}

sim::Circuit encode(const EncodingSpec &spec, const Eigen::Ref<const Eigen::VectorXd> &features) {
    if (features.size() != spec.num_features) {
        throw ArityError("expected " + std::to_string(spec.num_features) + " features, got " +
                         std::to_string(features.size()));
    }
    switch (spec.kind) {
    case EncodingKind::Basis: return encode_basis(features, spec.threshold);
    case EncodingKind::Angle: return encode_angle(features);
    case EncodingKind::Hybrid: return encode_hybrid(features, spec.weights, spec.axis, spec.hadamard_pre);
    }
    throw InputError("unknown encoding kind");
}

sim::Statevector encoded_state(const EncodingSpec &spec, const Eigen::Ref<const Eigen::VectorXd> &features) {
    const auto circuit = encode(spec, features);
    const Eigen::VectorXd params = spec.kind == EncodingKind::Hybrid ? spec.weights : Eigen::VectorXd(0);
    return sim::apply_circuit(sim::Statevector::zero(spec.num_features), circuit, params);
}

}  // namespace qbias::encode
