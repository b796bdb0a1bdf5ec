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

#include "qbias/kernellab.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "qbias/errors.hpp"
#include "qbias/rng.hpp"

using namespace qbias;
using namespace qbias::kernel;
using encode::EncodingSpec;

namespace {

constexpr double kPi = std::numbers::pi;
// E[cos^2(pi (x - y) / 2)] for x, y independent and uniform on [0, 1].
constexpr double kSingleQubitMean = 0.5 + 2.0 / (kPi * kPi);

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Eigen::MatrixXd random_samples(Eigen::Index m, Eigen::Index n, Rng &rng) {
    Eigen::MatrixXd x(m, n);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform();
    return x;
}

// Closed-form angle-encoding kernel: a product of per-feature overlaps.
double product_kernel(const Eigen::VectorXd &x, const Eigen::VectorXd &y) {
    double k = 1.0;
    for (Eigen::Index d = 0; d < x.size(); ++d) k *= std::pow(std::cos(kPi * (x[d] - y[d]) / 2), 2);
    return k;
}

// Independent Monte Carlo estimate of the mean kernel over uniform pairs.
double monte_carlo_mean(int n, int pairs, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sum = 0.0;
    for (int p = 0; p < pairs; ++p) {
        double k = 1.0;
        for (int d = 0; d < n; ++d) k *= std::pow(std::cos(kPi * (u(gen) - u(gen)) / 2), 2);
        sum += k;
    }
    return sum / pairs;
}

void expect_valid_gram(const GramMatrix &g) {
    const auto &e = g.entries;
    EXPECT_LT((e - e.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((e.diagonal().array() - 1.0).abs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
    EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-9);
}

}  // namespace

TEST(KernelValue, worked_examples) {
    const auto one = EncodingSpec::angle(1);
    EXPECT_NEAR(kernel_value(vec({0.3}), vec({0.3}), one), 1.0, 1e-15);
    EXPECT_NEAR(kernel_value(vec({0.0}), vec({1.0}), one), 0.0, 1e-15);
    EXPECT_NEAR(kernel_value(vec({0.5}), vec({0.0}), one), 0.5, 1e-15);
    EXPECT_THROW(kernel_value(vec({0.5}), vec({0.0, 0.1}), one), ArityError);
}

TEST(KernelValue, property_self_overlap_and_closed_form) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const Eigen::VectorXd x = random_samples(1, n, rng).row(0).transpose();
        const Eigen::VectorXd y = random_samples(1, n, rng).row(0).transpose();
        const auto spec = EncodingSpec::angle(n);
        EXPECT_NEAR(kernel_value(x, x, spec), 1.0, 1e-12);
        const double k = kernel_value(x, y, spec);
        EXPECT_NEAR(k, product_kernel(x, y), 1e-12);
        EXPECT_NEAR(k, kernel_value(y, x, spec), 1e-15);
        for (const char *name : {"basis", "hybrid-rx", "hybrid-rz"}) {
            const double kh = kernel_value(x, y, encode::from_name(name, n, true));
            EXPECT_GE(kh, -1e-15);
            EXPECT_LE(kh, 1.0 + 1e-12);
        }
    }
}

TEST(GramMatrix, worked_examples) {
    const auto spec = EncodingSpec::angle(2);
    Eigen::MatrixXd same(2, 2);
    same << 0.2, 0.9, 0.2, 0.9;
    EXPECT_LT((gram_matrix(same, spec).entries - Eigen::MatrixXd::Ones(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::MatrixXd ortho(2, 2);
    ortho << 0.0, 1.0, 1.0, 0.0;
    EXPECT_LT((gram_matrix(ortho, spec).entries - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(gram_matrix(Eigen::MatrixXd::Zero(1, 2), spec), InputError);
}

TEST(GramMatrix, random_entries_match_direct_inner_products) {
    Rng rng(5);
    const auto x = random_samples(5, 3, rng);
    const auto spec = EncodingSpec::angle(3);
    const auto g = gram_matrix(x, spec);
    ASSERT_EQ(g.size(), 5);
    expect_valid_gram(g);
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) {
            const auto a = encode::encoded_state(spec, x.row(i).transpose());
            const auto b = encode::encoded_state(spec, x.row(j).transpose());
            std::complex<double> ip = 0.0;
            for (std::size_t k = 0; k < a.dim(); ++k) ip += std::conj(a[k]) * b[k];
            EXPECT_NEAR(g.entries(i, j), std::norm(ip), 1e-12);
        }
    }
}

TEST(GramMatrix, property_valid_for_every_encoding) {
    Rng rng(6);
    for (const char *name : {"basis", "angle", "hybrid-rx", "hybrid-ry", "hybrid-rz"}) {
        for (int trial = 0; trial < 4; ++trial) {
            const int n = 1 + static_cast<int>(rng.below(5));
            const auto g = gram_matrix(random_samples(8, n, rng), encode::from_name(name, n, trial % 2 == 1));
            expect_valid_gram(g);
            EXPECT_GE(g.mean_offdiagonal(), 0.0);
            EXPECT_LE(g.mean_offdiagonal(), 1.0 + 1e-12);
        }
    }
}

TEST(DominantEigenvalue, worked_examples) {
    EXPECT_NEAR(dominant_eigenvalue(Eigen::MatrixXd::Identity(4, 4)), 1.0, 1e-12);
    EXPECT_NEAR(dominant_eigenvalue(Eigen::MatrixXd::Ones(3, 3)), 3.0, 1e-12);
    EXPECT_THROW(dominant_eigenvalue(Eigen::MatrixXd::Zero(2, 3)), ArityError);
}

TEST(DominantEigenvalue, property_matches_dense_solver) {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd a(6, 6);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
        const Eigen::MatrixXd psd = a * a.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(psd);
        const double want = solver.eigenvalues().maxCoeff();
        EXPECT_NEAR(dominant_eigenvalue(psd), want, 1e-8 * std::max(1.0, want));
    }
}

TEST(DominantEigenvalue, non_convergence_is_reported) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.0, 0.0, 0.999;
    EXPECT_THROW(dominant_eigenvalue(m, 1e-15, 3), ConvergenceError);
}

TEST(Concentration, single_qubit_mean_matches_closed_form) {
    EXPECT_DOUBLE_EQ(kSingleQubitMean, 0.7026423672846756);
    EXPECT_NEAR(monte_carlo_mean(1, 400000, 1), kSingleQubitMean, 2e-3);
    const auto rows = concentration_experiment({1}, 200, 10, 3);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].mean_offdiag, kSingleQubitMean, 0.01);
    EXPECT_EQ(rows[0].n_qubits, 1);
    EXPECT_EQ(rows[0].m, 200);
    EXPECT_EQ(rows[0].num_seeds, 10);
}

TEST(Concentration, eight_qubit_mean_matches_product_law) {
    const double law = std::pow(kSingleQubitMean, 8);
    EXPECT_NEAR(law, 0.0595, 1e-4);
    EXPECT_NEAR(monte_carlo_mean(8, 400000, 2), law, 0.002);
    const auto rows = concentration_experiment({8}, 200, 10, 4);
    EXPECT_NEAR(rows[0].mean_offdiag, law, 0.1 * law);
}

TEST(Concentration, duplicated_sample_has_eigenvalue_two) {
    for (const int n : {1, 3, 6}) {
        Eigen::MatrixXd x(2, n);
        x.row(0).setConstant(0.37);
        x.row(1).setConstant(0.37);
        EXPECT_NEAR(dominant_eigenvalue(gram_matrix(x, EncodingSpec::angle(n)).entries), 2.0, 1e-9);
    }
}

TEST(Concentration, property_monotone_decay_within_band) {
    const auto rows = concentration_experiment({2, 4, 8, 12}, 50, 5, 1234);
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i].mean_offdiag, rows[i - 1].mean_offdiag);
        EXPECT_LT(rows[i].lambda_max, rows[i - 1].lambda_max);
    }
    for (const auto &r : rows) {
        EXPECT_GE(r.mean_offdiag, 0.0);
        EXPECT_LE(r.mean_offdiag, 1.0);
        EXPECT_GE(r.lambda_max, 1.0 - 1e-9);
        EXPECT_LE(r.lambda_max, r.m + 1e-9);
        if (r.n_qubits <= 8) {
            const double law = std::pow(0.7026, r.n_qubits);
            EXPECT_NEAR(r.mean_offdiag, law, 0.3 * law) << "n=" << r.n_qubits;
        }
    }
}

TEST(Concentration, rows_depend_only_on_n_and_seed) {
    const auto a = concentration_experiment({2, 4}, 20, 3, 9);
    const auto b = concentration_experiment({4}, 20, 3, 9);
    EXPECT_EQ(a[1].mean_offdiag, b[0].mean_offdiag);
    EXPECT_EQ(a[1].lambda_max, b[0].lambda_max);
}

TEST(Concentration, capacity_limits) {
    EXPECT_THROW(concentration_experiment({21}, 10, 1, 0), CapacityError);
    EXPECT_THROW(concentration_experiment({2}, 201, 1, 0), CapacityError);
    EXPECT_THROW(concentration_experiment({2}, 1, 1, 0), InputError);
}
