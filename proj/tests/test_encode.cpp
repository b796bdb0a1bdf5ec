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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qbias/rng.hpp"

using namespace qbias;
using namespace qbias::encode;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const double x : xs) v[i++] = x;
    return v;
}

Eigen::VectorXd random_features(int n, Rng &rng) {
    Eigen::VectorXd v(n);
    for (auto &x : v) x = rng.uniform();
    return v;
}

}  // namespace

TEST(NormalizeFeatures, endpoints_midpoint_clamp) {
    EXPECT_EQ(normalize_features(vec({0, 255}), 0, 255), vec({0, 1}));
    EXPECT_EQ(normalize_features(vec({127.5}), 0, 255), vec({0.5}));
    EXPECT_EQ(normalize_features(vec({-10}), 0, 255), vec({0}));
    EXPECT_EQ(normalize_features(vec({300}), 0, 255), vec({1}));
    EXPECT_THROW(normalize_features(vec({1}), 1, 1), RangeError);
    EXPECT_THROW(normalize_features(vec({1}), 2, 1), RangeError);
}

TEST(EncodeBasis, worked_examples) {
    auto s = sim::apply_circuit(sim::Statevector::zero(2), encode_basis(vec({0.9, 0.1}), 0.5));
    EXPECT_EQ(s[1], std::complex<double>(1.0));
    EXPECT_EQ(encode_basis(vec({0.2, 0.3}), 0.5).size(), 0u);
    const auto boundary = encode_basis(vec({0.5}), 0.5);
    ASSERT_EQ(boundary.size(), 1u);
    EXPECT_EQ(boundary[0].kind, sim::GateKind::X);
}

TEST(EncodeBasis, property_single_unit_amplitude) {
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        const auto spec = EncodingSpec::basis(5, rng.uniform(0.05, 0.95));
        const auto s = encoded_state(spec, random_features(5, rng));
        int nonzero = 0;
        for (std::size_t j = 0; j < s.dim(); ++j) {
            if (std::abs(s[j]) > 0) {
                ++nonzero;
                EXPECT_DOUBLE_EQ(std::abs(s[j]), 1.0);
            }
        }
        EXPECT_EQ(nonzero, 1);
    }
}

TEST(EncodeAngle, worked_examples) {
    auto p1 = [](double x) {
        const auto s = sim::apply_circuit(sim::Statevector::zero(1), encode_angle(vec({x})));
        return sim::probabilities(s)[1];
    };
    EXPECT_NEAR(p1(1.0), 1.0, 1e-15);
    EXPECT_NEAR(p1(0.5), 0.5, 1e-15);
    EXPECT_NEAR(p1(0.25), 0.14644660940672624, 1e-12);
}

TEST(EncodeAngle, property_real_nonnegative_amplitudes) {
    Rng rng(6);
    for (int t = 0; t < 30; ++t) {
        const auto s = encoded_state(EncodingSpec::angle(4), random_features(4, rng));
        for (std::size_t j = 0; j < s.dim(); ++j) {
            EXPECT_EQ(s[j].imag(), 0.0);
            EXPECT_GE(s[j].real(), -1e-17);
        }
    }
}

TEST(EncodeHybrid, unit_weight_y_axis_equals_angle) {
    Rng rng(12);
    for (int t = 0; t < 30; ++t) {
        const auto x = random_features(3, rng);
        const auto hybrid = encoded_state(EncodingSpec::hybrid(3, Axis::Y), x);
        const auto angle = encoded_state(EncodingSpec::angle(3), x);
        EXPECT_LT((hybrid.amplitudes() - angle.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(EncodeHybrid, z_axis_without_hadamard_is_data_independent) {
    Rng rng(13);
    const auto zero = sim::probabilities(sim::Statevector::zero(4));
    for (int t = 0; t < 30; ++t) {
        auto spec = EncodingSpec::hybrid(4, Axis::Z);
        for (auto &w : spec.weights) w = rng.uniform(-3, 3);
        const auto p = sim::probabilities(encoded_state(spec, random_features(4, rng)));
        EXPECT_LT((p - zero).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(EncodeHybrid, z_axis_with_hadamard_closed_form) {
    // H RZ(pi w x) H |0>: P(1) = sin^2(pi w x / 2); w x = 0.5 gives 0.5.
    auto spec = EncodingSpec::hybrid(1, Axis::Z, true);
    spec.weights << 2.0;
    auto s = encoded_state(spec, vec({0.25}));
    s = sim::apply_gate(s, sim::Gate::h(0));
    EXPECT_NEAR(sim::probabilities(s)[1], 0.5, 1e-12);

    spec.weights << 0.6;
    s = sim::apply_gate(encoded_state(spec, vec({0.5})), sim::Gate::h(0));
    EXPECT_NEAR(sim::probabilities(s)[1], std::pow(std::sin(kPi * 0.3 / 2), 2), 1e-12);
}

TEST(EncodeHybrid, weights_are_parameter_slots) {
    const auto c = encode_hybrid(vec({0.2, 0.7}), Eigen::VectorXd::Ones(2), Axis::X, true);
    EXPECT_EQ(c.num_params(), 2u);
    EXPECT_EQ(c.size(), 4u);
    ASSERT_TRUE(c[3].param.has_value());
    EXPECT_EQ(c[3].param->slot, 1u);
    EXPECT_NEAR(c[3].param->scale, kPi * 0.7, 1e-15);
    EXPECT_THROW(encode_hybrid(vec({0.2, 0.7}), Eigen::VectorXd::Ones(3), Axis::X, false), ArityError);
}

TEST(EncodingSpec, names_round_trip) {
    for (const char *n : {"basis", "angle", "hybrid-rx", "hybrid-ry", "hybrid-rz"}) {
        EXPECT_EQ(name(from_name(n, 3)), n);
    }
    EXPECT_THROW(from_name("amplitude", 3), ConfigError);
    EXPECT_TRUE(from_name("hybrid-rz", 2, true).hadamard_pre);
    EXPECT_EQ(from_name("hybrid-rx", 2).weights, Eigen::VectorXd::Ones(2));
}

TEST(EncodingSpec, validation) {
    EXPECT_THROW(EncodingSpec::basis(2, 0.0), RangeError);
    EXPECT_THROW(EncodingSpec::basis(2, 1.0), RangeError);
    auto h = EncodingSpec::hybrid(3, Axis::Y);
    h.weights.resize(2);
    EXPECT_THROW(h.validate(), ArityError);
    EXPECT_THROW(encode::encode(EncodingSpec::angle(3), vec({0.1, 0.2})), ArityError);
}

TEST(EncodingSpec, circuits_act_on_num_features_qubits) {
    Rng rng(1);
    for (const char *n : {"basis", "angle", "hybrid-rx", "hybrid-ry", "hybrid-rz"}) {
        const auto spec = from_name(n, 5, true);
        EXPECT_EQ(encode::encode(spec, random_features(5, rng)).num_qubits(), 5) << n;
    }
}
