#include "bgadam/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace bgadam {

namespace {

void check_lengths(const ParamVector& params, const ParamVector& grad) {
    if (params.size() != grad.size())
        throw std::invalid_argument("gradient length " + std::to_string(grad.size()) +
                                    " != parameter length " + std::to_string(params.size()));
}

void check_state(const ParamVector& params, const ParamVector& state_vec, const char* name) {
    if (state_vec.size() != params.size())
        throw std::invalid_argument(std::string(name) + " state length does not match parameters");
}

}  // namespace

void sgd_step(ParamVector& params, const ParamVector& grad, double eta) {
    check_lengths(params, grad);
    if (!(eta >= 0.0)) throw std::invalid_argument("sgd_step: eta must be nonnegative");
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= eta * grad[i];
}

void momentum_step(ParamVector& params, const ParamVector& grad, MomentumState& state) {
    check_lengths(params, grad);
    check_state(params, state.velocity, "momentum");
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.velocity[i] = state.gamma * state.velocity[i] + state.eta * grad[i];
        params[i] -= state.velocity[i];
    }
}

void adagrad_step(ParamVector& params, const ParamVector& grad, AccumState& state) {
    check_lengths(params, grad);
    check_state(params, state.acc, "adagrad");
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.acc[i] += grad[i] * grad[i];
        params[i] -= state.eta * grad[i] / (std::sqrt(state.acc[i]) + state.eps);
    }
}

void rmsprop_step(ParamVector& params, const ParamVector& grad, AccumState& state) {
    check_lengths(params, grad);
    check_state(params, state.acc, "rmsprop");
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.acc[i] = state.rho * state.acc[i] + (1.0 - state.rho) * grad[i] * grad[i];
        params[i] -= state.eta * grad[i] / (std::sqrt(state.acc[i]) + state.eps);
    }
}

void adam_step(ParamVector& params, const ParamVector& grad, AdamState& state) {
    check_lengths(params, grad);
    check_state(params, state.m, "adam m");
    check_state(params, state.v, "adam v");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= state.eta * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

OptimizerKind optimizer_from_string(const std::string& name) {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "momentum") return OptimizerKind::momentum;
    if (name == "adagrad") return OptimizerKind::adagrad;
    if (name == "rmsprop") return OptimizerKind::rmsprop;
    if (name == "adam") return OptimizerKind::adam;
    throw ConfigError("unknown optimizer '" + name + "'");
}

std::string to_string(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::momentum: return "momentum";
        case OptimizerKind::adagrad: return "adagrad";
        case OptimizerKind::rmsprop: return "rmsprop";
        case OptimizerKind::adam: return "adam";
    }
    return "?";
}

double OptimizerConfig::resolved_eta() const {
    if (eta > 0.0) return eta;
    return kind == OptimizerKind::adam ? 0.001 : 0.01;
}

void OptimizerConfig::validate() const {
    if (eta != -1.0 && !(eta > 0.0)) throw ConfigError("eta must be > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must be in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must be in [0, 1)");
    if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in [0, 1)");
    if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("rho must be in [0, 1)");
}

Optimizer::Optimizer(const OptimizerConfig& cfg, std::size_t dim) : cfg_(cfg) {
    cfg_.validate();
    const double eta = cfg_.resolved_eta();
    switch (cfg_.kind) {
        case OptimizerKind::sgd:
            break;
        case OptimizerKind::momentum:
            momentum_ = {ParamVector(dim, 0.0), cfg_.gamma, eta};
            break;
        case OptimizerKind::adagrad:
        case OptimizerKind::rmsprop:
            accum_ = {ParamVector(dim, 0.0), eta, cfg_.rho, cfg_.eps};
            break;
        case OptimizerKind::adam:
            adam_ = {ParamVector(dim, 0.0), ParamVector(dim, 0.0), 0,
                     eta, cfg_.beta1, cfg_.beta2, cfg_.eps};
            break;
    }
}

void Optimizer::step(ParamVector& params, const ParamVector& grad) {
    switch (cfg_.kind) {
        case OptimizerKind::sgd: sgd_step(params, grad, cfg_.resolved_eta()); break;
        case OptimizerKind::momentum: momentum_step(params, grad, momentum_); break;
        case OptimizerKind::adagrad: adagrad_step(params, grad, accum_); break;
        case OptimizerKind::rmsprop: rmsprop_step(params, grad, accum_); break;
        case OptimizerKind::adam: adam_step(params, grad, adam_); break;
    }
}

}  // namespace bgadam
