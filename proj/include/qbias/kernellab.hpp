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

#include <cstdint>
#include <vector>

#include "qbias/encode.hpp"

namespace qbias::kernel {

/// Fidelity-kernel Gram matrix K_ij = |<phi(x_i)|phi(x_j)>|^2.
struct GramMatrix {
    Eigen::MatrixXd entries;

    Eigen::Index size() const { return entries.rows(); }

    /// Mean over i != j.
    double mean_offdiagonal() const;
};

double kernel_value(const Eigen::Ref<const Eigen::VectorXd> &x, const Eigen::Ref<const Eigen::VectorXd> &y,
                    const encode::EncodingSpec &encoding);

/// Rows of `samples` are feature vectors; needs at least two rows.
GramMatrix gram_matrix(const Eigen::Ref<const Eigen::MatrixXd> &samples, const encode::EncodingSpec &encoding);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration from the
/// normalized all-ones vector. Stops when successive Rayleigh quotients
/// differ by less than `tol`; ConvergenceError after `max_iter` iterations.
double dominant_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd> &matrix, double tol = 1e-9,
                           long max_iter = 100000);

struct ConcentrationRow {
    int n_qubits = 0;
    int m = 0;
    double mean_offdiag = 0.0;
    double lambda_max = 0.0;
    int num_seeds = 0;
    std::uint64_t seed = 0;
};

inline constexpr int kMaxConcentrationQubits = 20;
inline constexpr int kMaxConcentrationSamples = 200;

/// For each n: draw m uniform points in [0,1]^n per seed substream,
/// angle-encode them, and average the Gram statistics over the seeds.
std::vector<ConcentrationRow> concentration_experiment(const std::vector<int> &n_list, int m, int num_seeds,
                                                       std::uint64_t seed);

}  // namespace qbias::kernel
