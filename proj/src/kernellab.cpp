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

#include <cmath>
#include <complex>

#include "qbias/errors.hpp"
#include "qbias/rng.hpp"

namespace qbias::kernel {

using Eigen::Index;

namespace {

// States beyond this many bytes are recomputed per row instead of cached.
constexpr double kStateCacheBytes = 1024.0 * 1024.0 * 1024.0;

double fidelity(const sim::Statevector &a, const sim::Statevector &b) {
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace

double GramMatrix::mean_offdiagonal() const {
    const Index m = size();
    if (m < 2) throw InputError("mean off-diagonal needs at least a 2x2 matrix");
    return (entries.sum() - entries.trace()) / static_cast<double>(m * (m - 1));
}

double kernel_value(const Eigen::Ref<const Eigen::VectorXd> &x, const Eigen::Ref<const Eigen::VectorXd> &y,
                    const encode::EncodingSpec &encoding) {
    if (x.size() != y.size()) throw ArityError("kernel arguments differ in length");
    return fidelity(encode::encoded_state(encoding, x), encode::encoded_state(encoding, y));
}

GramMatrix gram_matrix(const Eigen::Ref<const Eigen::MatrixXd> &samples, const encode::EncodingSpec &encoding) {
    const Index m = samples.rows();
    if (m < 2) throw InputError("Gram matrix needs at least two samples");
    GramMatrix g{Eigen::MatrixXd::Identity(m, m)};
    auto state = [&](Index i) { return encode::encoded_state(encoding, samples.row(i).transpose()); };

    const double bytes = static_cast<double>(m) * std::ldexp(16.0, encoding.num_features);
    if (bytes <= kStateCacheBytes) {
        std::vector<sim::Statevector> states;
        states.reserve(static_cast<std::size_t>(m));
        for (Index i = 0; i < m; ++i) states.push_back(state(i));
        for (Index i = 0; i < m; ++i) {
            for (Index j = i + 1; j < m; ++j) {
                g.entries(i, j) = g.entries(j, i) =
                    fidelity(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)]);
            }
        }
    } else {
        for (Index i = 0; i < m; ++i) {
            const auto si = state(i);
            for (Index j = i + 1; j < m; ++j) g.entries(i, j) = g.entries(j, i) = fidelity(si, state(j));
        }
    }
    return g;
}

double dominant_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd> &matrix, double tol, long max_iter) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) throw ArityError("matrix must be square and non-empty");
    Eigen::VectorXd v = Eigen::VectorXd::Ones(matrix.rows()).normalized();
    Eigen::VectorXd w = matrix * v;
    double rayleigh = v.dot(w);
    for (long it = 0; it < max_iter; ++it) {
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        v = w / norm;
        w.noalias() = matrix * v;
        const double next = v.dot(w);
        if (std::abs(next - rayleigh) < tol) return next;
        rayleigh = next;
    }
    throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iter) + " iterations");
}

std::vector<ConcentrationRow> concentration_experiment(const std::vector<int> &n_list, int m, int num_seeds,
                                                       std::uint64_t seed) {
    if (m < 2) throw InputError("concentration experiment needs m >= 2");
    if (m > kMaxConcentrationSamples) {
        throw CapacityError("m = " + std::to_string(m) + " exceeds " + std::to_string(kMaxConcentrationSamples));
    }
    if (num_seeds < 1) throw InputError("num_seeds must be positive");
    for (const int n : n_list) {
        if (n < 1 || n > kMaxConcentrationQubits) {
            throw CapacityError("n = " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxConcentrationQubits) + "]");
        }
    }

    std::vector<ConcentrationRow> rows;
    for (const int n : n_list) {
        const auto spec = encode::EncodingSpec::angle(n);
        double mean_sum = 0.0;
        double lambda_sum = 0.0;
        for (int s = 0; s < num_seeds; ++s) {
            // Stream depends on (n, s) only, not on the position of n in the list.
            Rng rng = substream(seed, (static_cast<std::uint64_t>(n) << 32) + static_cast<std::uint64_t>(s));
            Eigen::MatrixXd x(m, n);
            for (Index i = 0; i < m; ++i) {
                for (Index d = 0; d < n; ++d) x(i, d) = rng.uniform();
            }
            const auto g = gram_matrix(x, spec);
            mean_sum += g.mean_offdiagonal();
            lambda_sum += dominant_eigenvalue(g.entries);
        }
        rows.push_back({n, m, mean_sum / num_seeds, lambda_sum / num_seeds, num_seeds, seed});
    }
    return rows;
}

}  // namespace qbias::kernel
