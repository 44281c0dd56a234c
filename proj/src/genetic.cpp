#include "bgadam/genetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bgadam {

void GeneticConfig::validate() const {
    if (!(p_base >= 0.0 && p_base <= 1.0)) throw ConfigError("p_base must be in [0, 1]");
    if (!(mutation_std > 0.0)) throw ConfigError("mutation_std must be > 0");
}

FitnessReport fitness_probabilities(const std::vector<double>& losses) {
    if (losses.empty()) throw std::invalid_argument("fitness_probabilities: empty loss vector");
    for (double l : losses)
        if (!std::isfinite(l)) throw std::invalid_argument("fitness_probabilities: non-finite loss");

    const std::size_t g = losses.size();
    FitnessReport rep;
    rep.losses = losses;
    rep.normalized.resize(g);
    rep.probs.resize(g);

    const auto [mn_it, mx_it] = std::minmax_element(losses.begin(), losses.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx == mn) {
        // degenerate min-max normalization: uniform selection
        std::fill(rep.normalized.begin(), rep.normalized.end(), 0.0);
        std::fill(rep.probs.begin(), rep.probs.end(), 1.0 / static_cast<double>(g));
        return rep;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        rep.normalized[i] = (losses[i] - mn) / (mx - mn);
        rep.probs[i] = std::exp(-rep.normalized[i]);
        total += rep.probs[i];
    }
    for (double& p : rep.probs) p /= total;
    return rep;
}

std::vector<ParentPair> sample_parent_pairs(const std::vector<double>& probs,
                                            std::size_t g, Rng& rng) {
    Categorical dist(probs);
    std::vector<ParentPair> pairs(g);
    for (ParentPair& pp : pairs) {
        pp.i = dist.draw(rng);
        pp.j = dist.draw(rng);
    }
    return pairs;
}

ParamVector crossover(const ParamVector& w_i, const ParamVector& w_j,
                      double p_i, double p_j, Rng& rng) {
    if (w_i.size() != w_j.size())
        throw std::invalid_argument("crossover: parent length mismatch");
    if (!(p_i + p_j > 0.0))
        throw std::invalid_argument("crossover: p_i + p_j must be > 0");

    const double threshold = p_i / (p_i + p_j);
    ParamVector child(w_i.size());
    for (std::size_t h = 0; h < child.size(); ++h)
        child[h] = rng.uniform() <= threshold ? w_i[h] : w_j[h];
    return child;
}

ParamVector mutate(const ParamVector& w, double p_i, double p_j,
                   const GeneticConfig& cfg, Rng& rng) {
    cfg.validate();
    if (p_i + p_j > 1.0)
        throw std::invalid_argument("mutate: p_i + p_j exceeds 1");

    const double p_m = cfg.p_base * (1.0 - p_i - p_j);
    ParamVector out = w;
    if (p_m <= 0.0) return out;
    for (double& v : out)
        if (rng.uniform() <= p_m) v = rng.normal(0.0, cfg.mutation_std);
    return out;
}

std::vector<std::size_t> select_survivors(const std::vector<double>& losses, std::size_t g) {
    if (losses.size() < g)
        throw std::invalid_argument("select_survivors: fewer than g candidates");
    for (double l : losses)
        if (!std::isfinite(l)) throw std::invalid_argument("select_survivors: non-finite loss");

    std::vector<std::size_t> order(losses.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
    order.resize(g);
    return order;
}

bool crossover_ball_check(const ParamVector& w_i, const ParamVector& w_j,
                          const ParamVector& child, const ParamVector& o) {
    const std::size_t n = w_i.size();
    if (w_j.size() != n || child.size() != n || o.size() != n)
        throw std::invalid_argument("crossover_ball_check: length mismatch");

    double lhs = 0.0, ri = 0.0, rj = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
        lhs += (child[h] - o[h]) * (child[h] - o[h]);
        ri += (w_i[h] - o[h]) * (w_i[h] - o[h]);
        rj += (w_j[h] - o[h]) * (w_j[h] - o[h]);
    }
    // tiny slack absorbs summation-order roundoff
    return lhs <= (ri + rj) * (1.0 + 1e-12);
}

}  // namespace bgadam
