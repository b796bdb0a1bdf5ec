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
#include <string>
#include <string_view>

#include "qbias/simcore.hpp"

namespace qbias::encode {

enum class EncodingKind { Basis, Angle, Hybrid };
enum class Axis { X, Y, Z };

/// Which feature map turns a classical vector into a circuit. One qubit per
/// feature for every kind.
struct EncodingSpec {
    EncodingKind kind = EncodingKind::Angle;
    int num_features = 1;
    double threshold = 0.5;    // Basis: feature >= threshold sets the qubit
    Axis axis = Axis::Y;       // Hybrid rotation axis
    Eigen::VectorXd weights;   // Hybrid: per-feature trainable scale
    bool hadamard_pre = false; // Hybrid: H on every qubit before rotating

    static EncodingSpec basis(int num_features, double threshold = 0.5);
    static EncodingSpec angle(int num_features);
    /// Hybrid spec with weights initialized to 1.
    static EncodingSpec hybrid(int num_features, Axis axis, bool hadamard_pre = false);

    /// Throws RangeError/ArityError when the invariants do not hold.
    void validate() const;

    /// Number of trainable encoding parameters (weights for hybrid, else 0).
    std::size_t num_trainable() const;
};

/// "basis", "angle", "hybrid-rx", "hybrid-ry" or "hybrid-rz".
std::string name(const EncodingSpec &spec);

/// Inverse of name(); throws ConfigError on an unknown name.
EncodingSpec from_name(std::string_view name, int num_features, bool hadamard_pre = false);

/// Maps each entry to (x - lo) / (hi - lo) clamped to [0, 1].
Eigen::VectorXd normalize_features(const Eigen::Ref<const Eigen::VectorXd> &raw, double lo, double hi);

/// X on qubit i iff features[i] >= threshold.
sim::Circuit encode_basis(const Eigen::Ref<const Eigen::VectorXd> &features, double threshold = 0.5);

/// RY(pi * x_i) on qubit i.
sim::Circuit encode_angle(const Eigen::Ref<const Eigen::VectorXd> &features);

/// Optional H layer, then R_axis(pi * w_i * x_i) on qubit i. The weights are
/// parameter slots 0..n-1 with scale pi * x_i, so the result must be applied
/// with the weight vector as its parameters.
sim::Circuit encode_hybrid(const Eigen::Ref<const Eigen::VectorXd> &features,
                           const Eigen::Ref<const Eigen::VectorXd> &weights, Axis axis, bool hadamard_pre);

/// Encoding circuit for `spec`; hybrid circuits carry num_features slots.
sim::Circuit encode(const EncodingSpec &spec, const Eigen::Ref<const Eigen::VectorXd> &features);

/// |phi(x)> under `spec`, using spec.weights for hybrid encodings.
sim::Statevector encoded_state(const EncodingSpec &spec, const Eigen::Ref<const Eigen::VectorXd> &features);

}  // namespace qbias::encode
