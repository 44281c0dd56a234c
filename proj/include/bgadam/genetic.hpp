#pragma once

#include <cstddef>
#include <vector>

#include "bgadam/common.hpp"
#include "bgadam/rng.hpp"

namespace bgadam {

// Per-population-member validation losses, their min-max normalization and
// the resulting selection probabilities p[i] = exp(-l_hat[i]) / sum.
struct FitnessReport {
    std::vector<double> losses;
    std::vector<double> normalized;
    std::vector<double> probs;
};

// Population indices sampled with replacement; i == j is permitted and
// yields a clone-then-mutate child.
struct ParentPair {
    std::size_t i = 0, j = 0;
};

struct GeneticConfig {
    double p_base = 0.01;      // pre-defined mutation base rate
    double mutation_std = 0.1; // std of replacement noise (variance 0.01)

    void validate() const;
};

FitnessReport fitness_probabilities(const std::vector<double>& losses);

// 2g categorical draws from p, paired in order.
std::vector<ParentPair> sample_parent_pairs(const std::vector<double>& probs,
                                            std::size_t g, Rng& rng);

// Per coordinate: inherit from parent i when u <= p_i / (p_i + p_j),
// else from parent j.
ParamVector crossover(const ParamVector& w_i, const ParamVector& w_j,
                      double p_i, double p_j, Rng& rng);

// Per coordinate: with probability p_base * (1 - p_i - p_j), replace the
// coordinate with a fresh draw from Normal(0, mutation_std^2).
ParamVector mutate(const ParamVector& w, double p_i, double p_j,
                   const GeneticConfig& cfg, Rng& rng);

// Indices of the g smallest losses, ascending by loss; ties broken toward
// the lower candidate index.
std::vector<std::size_t> select_survivors(const std::vector<double>& losses, std::size_t g);

// True when ||child - o||_2 <= sqrt(||w_i - o||^2 + ||w_j - o||^2); always
// holds for genuine crossover output since each child coordinate equals one
// parent's coordinate.
bool crossover_ball_check(const ParamVector& w_i, const ParamVector& w_j,
                          const ParamVector& child, const ParamVector& o);

}  // namespace bgadam
