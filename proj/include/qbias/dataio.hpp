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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qbias::data {

inline constexpr std::uint32_t kIdxMagicLabels = 0x00000801;
inline constexpr std::uint32_t kIdxMagicImages = 0x00000803;

/// Raw unsigned-byte tensor from an IDX file, row-major.
struct IdxTensor {
    std::vector<std::uint32_t> shape;
    std::vector<std::uint8_t> data;

    std::size_t element_count() const;

    friend bool operator==(const IdxTensor &, const IdxTensor &) = default;
};

/// Parses an in-memory IDX buffer. Only the 1-D label (0x801) and 3-D image
/// (0x803) unsigned-byte layouts are accepted.
///   FormatError: unknown magic.
///   LengthError: header or payload shorter/longer than the shape requires.
IdxTensor parse_idx(std::span<const std::uint8_t> bytes);

/// Reads and parses `path`; DataError if the file cannot be read.
IdxTensor load_idx(const std::filesystem::path &path);

std::vector<std::uint8_t> serialize_idx(const IdxTensor &tensor);
void save_idx(const std::filesystem::path &path, const IdxTensor &tensor);

/// Block-mean pooling of a side x side byte image into (side/block)^2
/// features scaled to [0, 1], tiles in row-major order.
Eigen::VectorXd avg_pool(std::span<const std::uint8_t> image, int side, int block);

/// Binary-labelled feature matrix (one sample per row).
struct Dataset {
    Eigen::MatrixXd features;
    Eigen::VectorXd labels;  // +1 / -1
    std::string provenance;

    Eigen::Index size() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }

    /// Throws InputError when features leave [0, 1], labels are not +-1 or
    /// the row counts disagree.
    void validate() const;

    Dataset subset(std::span<const Eigen::Index> rows) const;
};

/// Picks n_per_class images of each digit (indices shuffled per class from
/// seeded substreams), pools them with `block`, and labels class_a +1 and
/// class_b -1. Rows are class_a samples followed by class_b samples.
Dataset make_binary_subset(const IdxTensor &images, const IdxTensor &labels, int class_a, int class_b,
                           int n_per_class, std::uint64_t seed, int block = 7);

/// Two isotropic Gaussian blobs (sigma 0.1) centred at 0.5 +- separation/4
/// per coordinate, clamped to [0, 1]. Class +1 rows come first.
Dataset synthetic_gaussians(int n_per_class, int dim, double separation, std::uint64_t seed);

/// Procedurally drawn 28x28 handwritten-style digits 0 (ellipse ring) and
/// 1 (slanted stroke), n_per_class of each, as an IDX image/label pair.
struct DigitImages {
    IdxTensor images;
    IdxTensor labels;
};
DigitImages synthetic_digits(int n_per_class, std::uint64_t seed);

/// Conventional MNIST file locations inside a directory.
struct MnistFiles {
    std::filesystem::path train_images;
    std::filesystem::path train_labels;
    std::filesystem::path test_images;
    std::filesystem::path test_labels;
};

/// Looks for train-images-idx3-ubyte, train-labels-idx1-ubyte and the t10k
/// pair in `dir`; DataError if any is missing.
MnistFiles find_mnist(const std::filesystem::path &dir);

}  // namespace qbias::data
