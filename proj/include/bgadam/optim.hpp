#pragma once

#include <cstdint>
#include <string>

#include "bgadam/common.hpp"

namespace bgadam {

// First/second moment accumulators with bias correction.
struct AdamState {
    ParamVector m, v;
    std::uint64_t t = 0;
    double eta = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct MomentumState {
    ParamVector velocity;
    double gamma = 0.9;
    double eta = 0.01;
};

// Shared by AdaGrad (rho unused) and RMSProp.
struct AccumState {
    ParamVector acc;
    double eta = 0.01;
    double rho = 0.9;
    double eps = 1e-8;
};

void sgd_step(ParamVector& params, const ParamVector& grad, double eta);
void momentum_step(ParamVector& params, const ParamVector& grad, MomentumState& state);
void adagrad_step(ParamVector& params, const ParamVector& grad, AccumState& state);
void rmsprop_step(ParamVector& params, const ParamVector& grad, AccumState& state);
void adam_step(ParamVector& params, const ParamVector& grad, AdamState& state);

enum class OptimizerKind { sgd, momentum, adagrad, rmsprop, adam };

OptimizerKind optimizer_from_string(const std::string& name);
std::string to_string(OptimizerKind k);

// Resolved hyper-parameters; eta < 0 means "use the method's default"
// (0.001 for ADAM, 0.01 otherwise).
struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double eta = -1.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double gamma = 0.9;
    double rho = 0.9;

    double resolved_eta() const;
    void validate() const;
};

// One stepper instance per training loop; state is never shared.
class Optimizer {
public:
    Optimizer(const OptimizerConfig& cfg, std::size_t dim);
    void step(ParamVector& params, const ParamVector& grad);

private:
    OptimizerConfig cfg_;
    AdamState adam_;
    MomentumState momentum_;
    AccumState accum_;
};

}  // namespace bgadam
