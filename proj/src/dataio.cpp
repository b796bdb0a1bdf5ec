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

#include "qbias/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>

#include "qbias/errors.hpp"
#include "qbias/rng.hpp"

namespace qbias::data {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::size_t rank_for_magic(std::uint32_t magic) {
    switch (magic) {
    case kIdxMagicLabels: return 1;
    case kIdxMagicImages: return 3;
    default: return 0;
    }
}

std::string hex(std::uint32_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s = "0x";
    for (int shift = 28; shift >= 0; shift -= 4) s += digits[(v >> shift) & 0xF];
    return s;
}

}  // namespace

std::size_t IdxTensor::element_count() const {
    std::size_t n = 1;
    for (const auto d : shape) n *= d;
    return n;
}

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw LengthError("IDX buffer shorter than its magic number");
    const std::uint32_t magic = read_be32(bytes, 0);
    const std::size_t rank = rank_for_magic(magic);
    if (rank == 0) throw FormatError("unsupported IDX magic " + hex(magic));

    const std::size_t header = 4 + 4 * rank;
    if (bytes.size() < header) throw LengthError("IDX header truncated");
    IdxTensor t;
    for (std::size_t d = 0; d < rank; ++d) t.shape.push_back(read_be32(bytes, 4 + 4 * d));

    const std::size_t expected = t.element_count();
    const std::size_t actual = bytes.size() - header;
    if (actual != expected) {
        throw LengthError("IDX payload has " + std::to_string(actual) + " bytes, shape requires " +
                          std::to_string(expected));
    }
    t.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
    return t;
}

IdxTensor load_idx(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open IDX file " + path.string());
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_idx(bytes);
}

std::vector<std::uint8_t> serialize_idx(const IdxTensor &tensor) {
    std::uint32_t magic = 0;
    if (tensor.shape.size() == 1) {
        magic = kIdxMagicLabels;
    } else if (tensor.shape.size() == 3) {
        magic = kIdxMagicImages;
    } else {
        throw FormatError("only rank-1 and rank-3 IDX tensors are supported");
    }
    if (tensor.data.size() != tensor.element_count()) throw LengthError("tensor data does not match its shape");
    std::vector<std::uint8_t> out;
    out.reserve(4 + 4 * tensor.shape.size() + tensor.data.size());
    write_be32(out, magic);
    for (const auto d : tensor.shape) write_be32(out, d);
    out.insert(out.end(), tensor.data.begin(), tensor.data.end());
    return out;
}

void save_idx(const std::filesystem::path &path, const IdxTensor &tensor) {
    const auto bytes = serialize_idx(tensor);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write IDX file " + path.string());
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Eigen::VectorXd avg_pool(std::span<const std::uint8_t> image, int side, int block) {
    if (side < 1 || image.size() != static_cast<std::size_t>(side) * static_cast<std::size_t>(side)) {
        throw ArityError("image must hold side*side bytes");
    }
    if (block < 1 || side % block != 0) {
        throw RangeError("pool block " + std::to_string(block) + " does not divide image side " +
                         std::to_string(side));
    }
    const int tiles = side / block;
    const double count = static_cast<double>(block) * block;
    Eigen::VectorXd out(tiles * tiles);
    for (int tr = 0; tr < tiles; ++tr) {
        for (int tc = 0; tc < tiles; ++tc) {
            unsigned sum = 0;
            for (int r = tr * block; r < (tr + 1) * block; ++r) {
                for (int c = tc * block; c < (tc + 1) * block; ++c) {
                    sum += image[static_cast<std::size_t>(r * side + c)];
                }
            }
            out[tr * tiles + tc] = sum / count / 255.0;
        }
    }
    return out;
}

void Dataset::validate() const {
    if (labels.size() != features.rows()) throw InputError("dataset label count differs from row count");
    if (features.size() > 0 && (features.minCoeff() < 0.0 || features.maxCoeff() > 1.0)) {
        throw InputError("dataset features must lie in [0, 1]");
    }
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1.0 && labels[i] != -1.0) throw InputError("dataset labels must be +1 or -1");
    }
}

Dataset Dataset::subset(std::span<const Eigen::Index> rows) const {
    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
        out.labels[static_cast<Eigen::Index>(i)] = labels[rows[i]];
    }
    out.provenance = provenance;
    return out;
}

Dataset make_binary_subset(const IdxTensor &images, const IdxTensor &labels, int class_a, int class_b,
                           int n_per_class, std::uint64_t seed, int block) {
    if (images.shape.size() != 3 || labels.shape.size() != 1) {
        throw DataError("expected a rank-3 image tensor and a rank-1 label tensor");
    }
    if (images.shape[0] != labels.shape[0]) throw DataError("image and label counts differ");
    if (images.shape[1] != images.shape[2]) throw DataError("images must be square");
    if (class_a == class_b) throw InputError("the two classes must differ");
    if (n_per_class < 1) throw InputError("n_per_class must be positive");

    const int side = static_cast<int>(images.shape[1]);
    const std::size_t pixels = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);

    auto pick = [&](int digit, std::uint64_t stream) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.data.size(); ++i) {
            if (labels.data[i] == digit) idx.push_back(i);
        }
        if (idx.size() < static_cast<std::size_t>(n_per_class)) {
            throw DataError("class " + std::to_string(digit) + " has " + std::to_string(idx.size()) +
                            " samples, need " + std::to_string(n_per_class));
        }
        Rng rng = substream(seed, stream);
        shuffle(idx.begin(), idx.end(), rng);
        idx.resize(static_cast<std::size_t>(n_per_class));
        return idx;
    };
    const auto take_a = pick(class_a, 0);
    const auto take_b = pick(class_b, 1);

    const int tiles = side / std::max(block, 1);
    Dataset ds;
    ds.features.resize(2 * n_per_class, tiles * tiles);
    ds.labels.resize(2 * n_per_class);
    Eigen::Index row = 0;
    for (const auto *take : {&take_a, &take_b}) {
        const double label = take == &take_a ? 1.0 : -1.0;
        for (const auto i : *take) {
            const std::span<const std::uint8_t> image(images.data.data() + i * pixels, pixels);
            ds.features.row(row) = avg_pool(image, side, block).transpose();
            ds.labels[row] = label;
            ++row;
        }
    }
    ds.provenance = "binary subset " + std::to_string(class_a) + "(+1) vs " + std::to_string(class_b) +
                    "(-1), " + std::to_string(n_per_class) + " per class, pool block " + std::to_string(block) +
                    ", seed " + std::to_string(seed);
    return ds;
}

Dataset synthetic_gaussians(int n_per_class, int dim, double separation, std::uint64_t seed) {
    if (dim < 1) throw InputError("dim must be at least 1");
    if (n_per_class < 1) throw InputError("n_per_class must be positive");
    Rng rng(seed);
    Dataset ds;
    ds.features.resize(2 * n_per_class, dim);
    ds.labels.resize(2 * n_per_class);
    for (Eigen::Index i = 0; i < 2 * n_per_class; ++i) {
        const bool positive = i < n_per_class;
        const double mean = positive ? 0.5 + separation / 4 : 0.5 - separation / 4;
        for (Eigen::Index d = 0; d < dim; ++d) {
            ds.features(i, d) = std::clamp(rng.normal(mean, 0.1), 0.0, 1.0);
        }
        ds.labels[i] = positive ? 1.0 : -1.0;
    }
    ds.provenance = "synthetic gaussians dim " + std::to_string(dim) + ", separation " +
                    std::to_string(separation) + ", " + std::to_string(n_per_class) + " per class, seed " +
                    std::to_string(seed);
    return ds;
}

namespace {

constexpr int kDigitSide = 28;

// Anti-aliased stroke: full ink within half the thickness, linear falloff
// over one pixel.
std::uint8_t ink(double distance, double thickness) {
    const double v = std::clamp(1.0 - (distance - thickness / 2), 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * v));
}

void draw_zero(std::span<std::uint8_t> img, Rng &rng) {
    const double cx = 13.5 + rng.normal(0.0, 1.0);
    const double cy = 13.5 + rng.normal(0.0, 1.0);
    const double rx = rng.uniform(4.5, 6.5);
    const double ry = rng.uniform(7.0, 9.0);
    const double thickness = rng.uniform(1.6, 3.0);
    const double mean_r = (rx + ry) / 2;
    for (int r = 0; r < kDigitSide; ++r) {
        for (int c = 0; c < kDigitSide; ++c) {
            const double dx = (c - cx) / rx;
            const double dy = (r - cy) / ry;
            const double dist = std::abs(std::sqrt(dx * dx + dy * dy) - 1.0) * mean_r;
            img[static_cast<std::size_t>(r * kDigitSide + c)] = ink(dist, thickness);
        }
    }
}

void draw_one(std::span<std::uint8_t> img, Rng &rng) {
    const double cx = 13.5 + rng.normal(0.0, 1.5);
    const double slant = rng.uniform(-3.0, 3.0);
    const double top = rng.uniform(3.5, 6.0);
    const double bottom = rng.uniform(21.5, 24.0);
    const double thickness = rng.uniform(1.4, 2.8);
    const double x0 = cx + slant / 2, y0 = top;
    const double x1 = cx - slant / 2, y1 = bottom;
    const double len2 = (x1 - x0) * (x1 - x0) + (y1 - y0) * (y1 - y0);
    for (int r = 0; r < kDigitSide; ++r) {
        for (int c = 0; c < kDigitSide; ++c) {
            const double t = std::clamp(((c - x0) * (x1 - x0) + (r - y0) * (y1 - y0)) / len2, 0.0, 1.0);
            const double px = x0 + t * (x1 - x0) - c;
            const double py = y0 + t * (y1 - y0) - r;
            img[static_cast<std::size_t>(r * kDigitSide + c)] = ink(std::sqrt(px * px + py * py), thickness);
        }
    }
}

}  // namespace

DigitImages synthetic_digits(int n_per_class, std::uint64_t seed) {
    if (n_per_class < 1) throw InputError("n_per_class must be positive");
    const auto count = static_cast<std::uint32_t>(2 * n_per_class);
    constexpr std::size_t pixels = kDigitSide * kDigitSide;
    DigitImages out;
    out.images.shape = {count, kDigitSide, kDigitSide};
    out.images.data.assign(count * pixels, 0);
    out.labels.shape = {count};
    out.labels.data.resize(count);
    Rng rng(seed);
    // Alternate 0, 1, 0, 1, ... so every prefix is balanced.
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::span<std::uint8_t> img(out.images.data.data() + i * pixels, pixels);
        const bool zero = i % 2 == 0;
        if (zero) {
            draw_zero(img, rng);
        } else {
            draw_one(img, rng);
        }
        out.labels.data[i] = zero ? 0 : 1;
    }
    return out;
}

MnistFiles find_mnist(const std::filesystem::path &dir) {
    MnistFiles f{dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte", dir / "t10k-images-idx3-ubyte",
                 dir / "t10k-labels-idx1-ubyte"};
    for (const auto *p : {&f.train_images, &f.train_labels, &f.test_images, &f.test_labels}) {
        if (!std::filesystem::is_regular_file(*p)) throw DataError("missing MNIST file " + p->string());
    }
    return f;
}

}  // namespace qbias::data
