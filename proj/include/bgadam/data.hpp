#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bgadam/common.hpp"
#include "bgadam/nnet.hpp"
#include "bgadam/rng.hpp"

namespace bgadam {

struct Dataset {
    Matrix features;          // n x d, image data normalized to [0, 1]
    std::vector<int> labels;  // class indices in [0, n_classes)
    int n_classes = 0;

    std::size_t size() const { return features.rows; }
    std::size_t dim() const { return features.cols; }
    void validate() const;
};

struct Split {
    Dataset train, val, test;
};

// Big-endian IDX pair (magics 0x00000803 / 0x00000801); pixels divided by 255.
Dataset load_idx_pair(const std::string& images_path, const std::string& labels_path);
void write_idx_pair(const Dataset& d, const std::string& images_path,
                    const std::string& labels_path, std::size_t img_rows, std::size_t img_cols);

// One sample per line, comma-separated features, last column integer label,
// optional header line auto-detected.
Dataset load_delimited(const std::string& path);

// Gaussian clusters at fixed centers on a circle of radius 2.5.
Dataset make_blobs(std::size_t n_per_class, int classes, double noise_std, std::uint64_t seed);

// Interleaved 2-D spirals with Gaussian noise; non-linearly separable but
// learnable by a small MLP.
Dataset make_spirals(std::size_t n_per_class, int classes, double noise_std, std::uint64_t seed);

// Deterministic shuffled partition of the training pool into train/val;
// the test set is passed through untouched.
Split make_split(const Dataset& train_pool, Dataset test, double val_fraction,
                 std::uint64_t seed);

// Disjoint stratified subsets of sizes n_a and n_b (per-class counts
// proportional to the pool's class distribution, largest remainder).
std::pair<Dataset, Dataset> stratified_split(const Dataset& pool, std::size_t n_a,
                                             std::size_t n_b, std::uint64_t seed);

Dataset take(const Dataset& d, const std::vector<std::size_t>& indices);
Batch as_batch(const Dataset& d);

// Mini-batch iteration over (a subset of) a dataset: random shuffle per
// epoch, contiguous chunks, last short chunk included.
class BatchSampler {
public:
    BatchSampler(const Dataset& base, std::vector<std::size_t> indices,
                 std::size_t batch_size, std::uint64_t seed);

    Batch next();
    std::size_t epoch_batches() const;

private:
    const Dataset* base_;
    std::vector<std::size_t> indices_;
    std::size_t batch_size_;
    std::size_t cursor_ = 0;
    Rng rng_;
};

// FNV-1a over the raw feature/label bytes; used for manifest fingerprints.
std::string dataset_fingerprint(const Dataset& d);

}  // namespace bgadam
