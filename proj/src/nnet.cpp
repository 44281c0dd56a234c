#include "bgadam/nnet.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bgadam {

namespace {

using Emat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<Emat>;
using MapConstMat = Eigen::Map<const Emat>;

struct LayerView {
    const double* W;
    const double* b;
    std::size_t in, out;
};

LayerView layer_view(const Architecture& arch, const double* params, std::size_t k) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < k; ++i)
        off += arch.layer_sizes[i] * arch.layer_sizes[i + 1] + arch.layer_sizes[i + 1];
    std::size_t in = arch.layer_sizes[k], out = arch.layer_sizes[k + 1];
    return {params + off, params + off + in * out, in, out};
}

void check_inputs(const Mlp& model, const Batch& batch) {
    model.arch.validate();
    if (model.params.size() != model.arch.param_count())
        throw std::invalid_argument("param vector length " + std::to_string(model.params.size()) +
                                    " does not match architecture count " +
                                    std::to_string(model.arch.param_count()));
    if (batch.size() == 0) throw std::invalid_argument("empty batch");
    if (batch.features.cols != model.arch.input_dim())
        throw std::invalid_argument("input_dim mismatch: expected " +
                                    std::to_string(model.arch.input_dim()) + ", got " +
                                    std::to_string(batch.features.cols));
    if (batch.labels.size() != batch.size())
        throw std::invalid_argument("feature row count != label count");
    for (int y : batch.labels)
        if (y < 0 || static_cast<std::size_t>(y) >= model.arch.n_classes())
            throw std::invalid_argument("label out of range [0, n_classes)");
}

struct ForwardPass {
    std::vector<Matrix> act;    // per hidden layer: activation before dropout
    std::vector<Matrix> out;    // per hidden layer: after dropout (train) or == act
    std::vector<Matrix> mask;   // dropout multipliers, empty unless applied
    Matrix probs;               // softmax rows
    double loss_total = 0.0;    // summed cross-entropy
};

void apply_activation(Matrix& m, Activation a) {
    if (a == Activation::relu) {
        for (double& v : m.data) v = v > 0.0 ? v : 0.0;
    } else {
        for (double& v : m.data) v = std::tanh(v);
    }
}

ForwardPass run_forward(const Mlp& model, const Batch& batch, bool train_mode, Rng* rng) {
    check_inputs(model, batch);
    const Architecture& arch = model.arch;
    const std::size_t n = batch.size();
    const std::size_t n_layers = arch.n_layers();
    const bool dropout = train_mode && arch.dropout_rate > 0.0;

    ForwardPass fp;
    const Matrix* cur = &batch.features;
    for (std::size_t k = 0; k + 1 < n_layers; ++k) {
        LayerView lv = layer_view(arch, model.params.data(), k);
        Matrix z(n, lv.out);
        MapConstMat A(cur->data.data(), n, lv.in);
        MapConstMat W(lv.W, lv.in, lv.out);
        MapMat Z(z.data.data(), n, lv.out);
        Z.noalias() = A * W;
        Z.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(lv.b, lv.out);

        if (k + 2 < n_layers) {  // hidden layer
            apply_activation(z, arch.activation);
            fp.act.push_back(z);
            if (dropout) {
                const double rate = arch.dropout_rate;
                const double scale = 1.0 / (1.0 - rate);
                Matrix m(n, lv.out);
                for (std::size_t i = 0; i < m.data.size(); ++i)
                    m.data[i] = rng->uniform() < rate ? 0.0 : scale;
                for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] *= m.data[i];
                fp.mask.push_back(std::move(m));
            }
            fp.out.push_back(std::move(z));
            cur = &fp.out.back();
        } else {  // output layer: softmax + summed cross-entropy from the logits
            fp.probs = std::move(z);
            for (std::size_t i = 0; i < n; ++i) {
                double* row = fp.probs.row(i);
                const std::size_t c = fp.probs.cols;
                double mx = *std::max_element(row, row + c);
                double true_logit = row[batch.labels[i]];
                double sum = 0.0;
                for (std::size_t j = 0; j < c; ++j) {
                    row[j] = std::exp(row[j] - mx);
                    sum += row[j];
                }
                // log-sum-exp form keeps the per-sample loss finite and >= 0
                fp.loss_total += std::log(sum) - (true_logit - mx);
                for (std::size_t j = 0; j < c; ++j) row[j] /= sum;
            }
        }
    }
    return fp;
}

}  // namespace

Activation activation_from_string(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    throw ConfigError("unknown activation '" + name + "' (expected relu or tanh)");
}

std::string to_string(Activation a) {
    return a == Activation::relu ? "relu" : "tanh";
}

void Architecture::validate() const {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("architecture needs at least input and output layers");
    for (std::size_t s : layer_sizes)
        if (s < 1) throw std::invalid_argument("layer sizes must be >= 1");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
        throw std::invalid_argument("dropout_rate must be in [0, 1)");
}

std::size_t Architecture::param_count() const {
    std::size_t total = 0;
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k)
        total += layer_sizes[k] * layer_sizes[k + 1] + layer_sizes[k + 1];
    return total;
}

ParamVector init_params(const Architecture& arch, Rng& rng) {
    arch.validate();
    ParamVector p(arch.param_count());
    for (double& v : p) v = rng.normal(0.0, 0.01);
    return p;
}

Matrix forward(const Mlp& model, const Batch& batch, bool train_mode, Rng& rng) {
    return run_forward(model, batch, train_mode, &rng).probs;
}

Matrix forward(const Mlp& model, const Batch& batch) {
    return run_forward(model, batch, false, nullptr).probs;
}

LossGrad loss_and_grad(const Mlp& model, const Batch& batch, bool train_mode, Rng& rng) {
    ForwardPass fp = run_forward(model, batch, train_mode, &rng);
    const Architecture& arch = model.arch;
    const std::size_t n = batch.size();
    const std::size_t n_layers = arch.n_layers();

    LossGrad result;
    result.loss = fp.loss_total / static_cast<double>(n);
    result.grad.assign(model.params.size(), 0.0);

    // dL/dlogits for mean cross-entropy
    Matrix g = std::move(fp.probs);
    for (std::size_t i = 0; i < n; ++i) g(i, batch.labels[i]) -= 1.0;
    for (double& v : g.data) v /= static_cast<double>(n);

    for (std::size_t k = n_layers - 1; k-- > 0;) {
        LayerView lv = layer_view(arch, model.params.data(), k);
        std::size_t w_off = static_cast<std::size_t>(lv.W - model.params.data());
        std::size_t b_off = static_cast<std::size_t>(lv.b - model.params.data());

        const Matrix& below = (k == 0) ? batch.features : fp.out[k - 1];
        MapConstMat A(below.data.data(), n, lv.in);
        MapConstMat G(g.data.data(), n, lv.out);
        MapMat dW(result.grad.data() + w_off, lv.in, lv.out);
        dW.noalias() = A.transpose() * G;
        Eigen::Map<Eigen::RowVectorXd> db(result.grad.data() + b_off, lv.out);
        db = G.colwise().sum();

        if (k == 0) break;
        Matrix da(n, lv.in);
        MapMat dA(da.data.data(), n, lv.in);
        MapConstMat W(lv.W, lv.in, lv.out);
        dA.noalias() = G * W.transpose();
        if (!fp.mask.empty())
            for (std::size_t i = 0; i < da.data.size(); ++i)
                da.data[i] *= fp.mask[k - 1].data[i];
        const Matrix& h = fp.act[k - 1];
        if (arch.activation == Activation::relu) {
            for (std::size_t i = 0; i < da.data.size(); ++i)
                if (h.data[i] <= 0.0) da.data[i] = 0.0;
        } else {
            for (std::size_t i = 0; i < da.data.size(); ++i)
                da.data[i] *= 1.0 - h.data[i] * h.data[i];
        }
        g = std::move(da);
    }
    return result;
}

LossGrad loss_and_grad(const Mlp& model, const Batch& batch) {
    Rng dummy(0);
    return loss_and_grad(model, batch, false, dummy);
}

double loss_sum(const Mlp& model, const Batch& batch) {
    return run_forward(model, batch, false, nullptr).loss_total;
}

double mean_loss(const Mlp& model, const Batch& batch) {
    return loss_sum(model, batch) / static_cast<double>(batch.size());
}

std::vector<int> predict(const Mlp& model, const Batch& batch) {
    Matrix p = forward(model, batch);
    std::vector<int> out(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) {
        const double* row = p.row(i);
        std::size_t best = 0;
        for (std::size_t j = 1; j < p.cols; ++j)
            if (row[j] > row[best]) best = j;
        out[i] = static_cast<int>(best);
    }
    return out;
}

double accuracy(const Mlp& model, const Batch& batch) {
    std::vector<int> pred = predict(model, batch);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == batch.labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

void save_params(const Mlp& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open checkpoint file for writing: " + path);
    out << "bgadam-params v1 ";
    for (std::size_t i = 0; i < model.arch.layer_sizes.size(); ++i) {
        if (i) out << 'x';
        out << model.arch.layer_sizes[i];
    }
    out << ' ' << model.params.size() << '\n';
    for (double v : model.params) out << format_double(v) << '\n';
    if (!out) throw DataError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open checkpoint file: " + path);
    std::string tag, version, sizes_str;
    std::size_t count = 0;
    if (!(in >> tag >> version >> sizes_str >> count) || tag != "bgadam-params" || version != "v1")
        throw DataError("bad checkpoint header in " + path);

    Checkpoint ck;
    std::stringstream ss(sizes_str);
    std::string item;
    while (std::getline(ss, item, 'x')) {
        if (item.empty()) throw DataError("bad layer sizes in checkpoint header: " + sizes_str);
        ck.layer_sizes.push_back(std::stoull(item));
    }
    if (ck.layer_sizes.size() < 2)
        throw DataError("checkpoint header has fewer than 2 layers: " + sizes_str);

    std::size_t expected = 0;
    for (std::size_t k = 0; k + 1 < ck.layer_sizes.size(); ++k)
        expected += ck.layer_sizes[k] * ck.layer_sizes[k + 1] + ck.layer_sizes[k + 1];
    if (count != expected)
        throw DataError("checkpoint count " + std::to_string(count) +
                        " does not match layer sizes (expected " + std::to_string(expected) + ")");

    ck.params.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        if (!(in >> ck.params[i]))
            throw DataError("truncated checkpoint: expected " + std::to_string(count) +
                            " values in " + path);
    return ck;
}

}  // namespace bgadam
