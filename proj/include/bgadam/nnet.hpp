#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgadam/common.hpp"
#include "bgadam/rng.hpp"

namespace bgadam {

enum class Activation { relu, tanh };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

// Feed-forward network shape: input dim first, class count last. Dropout is
// applied to hidden activations only, at training time, with the inverted
// convention (scaled at train time) so eval mode needs no rescaling.
struct Architecture {
    std::vector<std::size_t> layer_sizes;
    Activation activation = Activation::relu;
    double dropout_rate = 0.0;

    void validate() const;
    std::size_t param_count() const;
    std::size_t input_dim() const { return layer_sizes.front(); }
    std::size_t n_classes() const { return layer_sizes.back(); }
    std::size_t n_layers() const { return layer_sizes.size(); }
};

struct Batch {
    Matrix features;          // n_samples x input_dim
    std::vector<int> labels;  // class indices in [0, n_classes)

    std::size_t size() const { return features.rows; }
};

struct Mlp {
    Architecture arch;
    ParamVector params;
};

struct LossGrad {
    double loss = 0.0;  // mean cross-entropy over the batch
    ParamVector grad;
};

// All entries i.i.d. Normal(0, std 0.01); biases use the same distribution.
ParamVector init_params(const Architecture& arch, Rng& rng);

// Row-wise class probabilities (softmax over logits).
Matrix forward(const Mlp& model, const Batch& batch, bool train_mode, Rng& rng);
Matrix forward(const Mlp& model, const Batch& batch);  // eval mode

// Mean cross-entropy and its exact gradient w.r.t. params, for the dropout
// mask drawn this call when train_mode is set.
LossGrad loss_and_grad(const Mlp& model, const Batch& batch, bool train_mode, Rng& rng);
LossGrad loss_and_grad(const Mlp& model, const Batch& batch);  // eval mode

// Summed / mean cross-entropy in eval mode, without allocating a gradient.
double loss_sum(const Mlp& model, const Batch& batch);
double mean_loss(const Mlp& model, const Batch& batch);

// Argmax per row; ties broken toward the lowest class index.
std::vector<int> predict(const Mlp& model, const Batch& batch);
double accuracy(const Mlp& model, const Batch& batch);

// Checkpoint file: "bgadam-params v1 <sizes joined by 'x'> <count>" header,
// then one value per line at full round-trip precision.
struct Checkpoint {
    std::vector<std::size_t> layer_sizes;
    ParamVector params;
};
void save_params(const Mlp& model, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace bgadam
