#include "bgadam/run.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bgadam {

namespace {

double checked_val_loss(const Mlp& model, const Batch& val, const char* where) {
    double l = loss_sum(model, val);
    if (!std::isfinite(l))
        throw NumericError(std::string("non-finite validation loss during ") + where);
    return l;
}

double mean_pairwise(const std::vector<const ParamVector*>& ps) {
    const std::size_t n = ps.size();
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double sq = 0.0;
            for (std::size_t h = 0; h < ps[a]->size(); ++h) {
                double d = (*ps[a])[h] - (*ps[b])[h];
                sq += d * d;
            }
            total += std::sqrt(sq);
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

double model_diversity(const std::vector<Mlp>& models, const std::vector<std::size_t>* ids) {
    std::vector<const ParamVector*> ps;
    if (ids) {
        for (std::size_t id : *ids) ps.push_back(&models[id].params);
    } else {
        for (const Mlp& m : models) ps.push_back(&m.params);
    }
    if (ps.size() < 2) return 0.0;
    return mean_pairwise(ps);
}

void check_data(const RunConfig& cfg, const Dataset& d, const char* name) {
    d.validate();
    if (d.dim() != cfg.arch.input_dim())
        throw ConfigError(std::string(name) + " feature dim " + std::to_string(d.dim()) +
                          " does not match architecture input dim " +
                          std::to_string(cfg.arch.input_dim()));
    if (static_cast<std::size_t>(d.n_classes) > cfg.arch.n_classes())
        throw ConfigError(std::string(name) + " has " + std::to_string(d.n_classes) +
                          " classes but the architecture outputs " +
                          std::to_string(cfg.arch.n_classes()));
}

}  // namespace

RunMode run_mode_from_string(const std::string& name) {
    if (name == "bgadam") return RunMode::bgadam;
    if (name == "gadam") return RunMode::gadam;
    if (name == "single") return RunMode::single;
    throw ConfigError("unknown run mode '" + name + "'");
}

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::bgadam: return "bgadam";
        case RunMode::gadam: return "gadam";
        case RunMode::single: return "single";
    }
    return "?";
}

void RunConfig::validate() const {
    if (g < 1) throw ConfigError("g must be >= 1");
    if (K < 1) throw ConfigError("K must be >= 1");
    if (iterations_total < K)
        throw ConfigError("iters must be >= K so each generation gets at least one step");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    optimizer.validate();
    genetic.validate();
    try {
        arch.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Mlp train_member(Mlp model, const Dataset& base, const std::vector<std::size_t>& train_indices,
                 std::size_t iterations, const OptimizerConfig& ocfg, std::size_t batch_size,
                 std::uint64_t seed) {
    if (iterations < 1) throw std::invalid_argument("train_member: iterations must be >= 1");
    if (train_indices.empty()) throw std::invalid_argument("train_member: empty sub-training set");

    Optimizer opt(ocfg, model.params.size());
    BatchSampler sampler(base, train_indices, batch_size, derive_seed(seed, "batches"));
    Rng fwd_rng(derive_seed(seed, "dropout"));
    for (std::size_t step = 0; step < iterations; ++step) {
        Batch b = sampler.next();
        LossGrad lg = loss_and_grad(model, b, true, fwd_rng);
        if (!std::isfinite(lg.loss))
            throw NumericError("non-finite training loss at step " + std::to_string(step));
        opt.step(model.params, lg.grad);
    }
    return model;
}

BoostedTraining train_population_boosted(std::vector<Mlp> models, const Dataset& train,
                                         const Batch& val, const RunConfig& cfg,
                                         std::size_t generation) {
    const std::size_t g = models.size();
    if (g < 1) throw std::invalid_argument("population must have at least one member");
    const std::size_t m = train.size();
    const bool boosted = cfg.mode == RunMode::bgadam;

    BoostedTraining bt;
    bt.models = std::move(models);
    bt.sub_indices.resize(g);

    std::vector<std::size_t> full(m);
    std::iota(full.begin(), full.end(), 0);
    Batch full_batch = as_batch(train);

    SampleWeights z = uniform_weights(m);
    std::vector<double> losses(g);
    for (std::size_t j = 0; j < g; ++j) {
        if (j == 0 || !boosted) {
            bt.sub_indices[j] = full;  // D_1 is the full training set, unsampled
        } else {
            Rng rng(derive_seed(cfg.seed, "resample", generation, j));
            bt.sub_indices[j] = resample(z, m, rng);
        }
        bt.models[j] = train_member(std::move(bt.models[j]), train, bt.sub_indices[j],
                                    cfg.per_generation_iters(), cfg.optimizer, cfg.batch_size,
                                    derive_seed(cfg.seed, "train-input", generation, j));
        losses[j] = checked_val_loss(bt.models[j], val, "input-model fitness evaluation");

        if (boosted) {
            std::vector<int> preds = predict(bt.models[j], full_batch);
            std::vector<std::uint8_t> mask(m);
            for (std::size_t i = 0; i < m; ++i)
                mask[i] = preds[i] == train.labels[i] ? 1 : 0;
            WeightUpdate upd = update_weights(z, mask);
            z = std::move(upd.weights);
            bt.weight_trace.push_back(z);
            bt.rounds.push_back({j, upd.round.epsilon, upd.round.alpha, upd.round.clamped});
        }
    }
    bt.fitness = fitness_probabilities(losses);
    return bt;
}

GenerationOutcome run_generation(std::vector<Mlp> population, const Dataset& train,
                                 const Batch& val, const Batch& test, const RunConfig& cfg,
                                 std::size_t generation) {
    const std::size_t g = population.size();
    GenerationRecord rec;
    rec.generation = generation;
    for (const Mlp& m : population)
        rec.input_losses_pre.push_back(checked_val_loss(m, val, "pre-training evaluation"));

    BoostedTraining bt =
        train_population_boosted(std::move(population), train, val, cfg, generation);
    rec.rounds = bt.rounds;
    rec.input_diversity = model_diversity(bt.models, nullptr);

    Rng prng(derive_seed(cfg.seed, "parents", generation));
    std::vector<ParentPair> pairs = sample_parent_pairs(bt.fitness.probs, g, prng);

    std::vector<Mlp> children;
    children.reserve(g);
    for (std::size_t h = 0; h < g; ++h) {
        const auto [i, j] = pairs[h];
        double p_i = bt.fitness.probs[i];
        double p_j = bt.fitness.probs[j];
        // A clone pair (i == j) can carry p_i + p_j > 1; rescaling to sum 1
        // keeps the crossover threshold and zeroes the mutation rate.
        if (p_i + p_j > 1.0) {
            const double s = p_i + p_j;
            p_i /= s;
            p_j /= s;
        }
        Rng crng(derive_seed(cfg.seed, "crossover", generation, h));
        ParamVector w = crossover(bt.models[i].params, bt.models[j].params, p_i, p_j, crng);
        Rng mrng(derive_seed(cfg.seed, "mutate", generation, h));
        w = mutate(w, p_i, p_j, cfg.genetic, mrng);
        // child training reuses the input models' sub-training sets
        Mlp child = train_member({cfg.arch, std::move(w)}, train, bt.sub_indices[h],
                                 cfg.per_generation_iters(), cfg.optimizer, cfg.batch_size,
                                 derive_seed(cfg.seed, "train-child", generation, h));
        children.push_back(std::move(child));
    }

    rec.candidate_losses = bt.fitness.losses;
    for (const Mlp& c : children)
        rec.candidate_losses.push_back(checked_val_loss(c, val, "child fitness evaluation"));
    rec.survivor_ids = select_survivors(rec.candidate_losses, g);

    GenerationOutcome out;
    out.population.reserve(g);
    for (std::size_t id : rec.survivor_ids) {
        rec.survivor_loss_sum += rec.candidate_losses[id];
        out.population.push_back(std::move(id < g ? bt.models[id] : children[id - g]));
    }
    rec.best_val_loss = rec.candidate_losses[rec.survivor_ids.front()];
    rec.mean_val_loss = rec.survivor_loss_sum / static_cast<double>(g);
    rec.survivor_diversity = model_diversity(out.population, nullptr);
    rec.test_accuracy_of_best = accuracy(out.population.front(), test);
    out.record = std::move(rec);
    return out;
}

RunResult run(const RunConfig& cfg, const Dataset& train, const Dataset& val,
              const Dataset& test) {
    cfg.validate();
    check_data(cfg, train, "train");
    check_data(cfg, val, "val");
    check_data(cfg, test, "test");

    const Batch val_b = as_batch(val);
    const Batch test_b = as_batch(test);
    RunResult res;
    res.lineage_steps = cfg.lineage_steps();

    if (cfg.mode == RunMode::single) {
        Rng init_rng(derive_seed(cfg.seed, "init", 0));
        Mlp model{cfg.arch, init_params(cfg.arch, init_rng)};
        Optimizer opt(cfg.optimizer, model.params.size());
        std::vector<std::size_t> full(train.size());
        std::iota(full.begin(), full.end(), 0);
        BatchSampler sampler(train, full, cfg.batch_size,
                             derive_seed(cfg.seed, "train-single-batches"));
        Rng fwd_rng(derive_seed(cfg.seed, "train-single-dropout"));

        for (std::size_t k = 1; k <= cfg.K; ++k) {
            GenerationRecord rec;
            rec.generation = k;
            rec.input_losses_pre.push_back(checked_val_loss(model, val_b, "segment evaluation"));
            for (std::size_t step = 0; step < cfg.per_generation_iters(); ++step) {
                Batch b = sampler.next();
                LossGrad lg = loss_and_grad(model, b, true, fwd_rng);
                if (!std::isfinite(lg.loss))
                    throw NumericError("non-finite training loss at step " +
                                       std::to_string((k - 1) * cfg.per_generation_iters() + step));
                opt.step(model.params, lg.grad);
            }
            double l = checked_val_loss(model, val_b, "segment evaluation");
            rec.candidate_losses = {l};
            rec.survivor_ids = {0};
            rec.survivor_loss_sum = l;
            rec.best_val_loss = l;
            rec.mean_val_loss = l;
            rec.test_accuracy_of_best = accuracy(model, test_b);
            res.history.push_back(std::move(rec));
        }
        res.final_model = std::move(model);
        res.total_optimizer_steps = res.lineage_steps;
    } else {
        std::vector<Mlp> population;
        population.reserve(cfg.g);
        for (std::size_t i = 0; i < cfg.g; ++i) {
            Rng init_rng(derive_seed(cfg.seed, "init", i));
            population.push_back({cfg.arch, init_params(cfg.arch, init_rng)});
        }
        for (std::size_t k = 1; k <= cfg.K; ++k) {
            GenerationOutcome out =
                run_generation(std::move(population), train, val_b, test_b, cfg, k);
            population = std::move(out.population);
            res.history.push_back(std::move(out.record));
        }
        // survivors come back ascending by validation loss
        res.final_model = std::move(population.front());
        res.total_optimizer_steps = 2 * cfg.g * res.lineage_steps;
    }

    res.test_accuracy = accuracy(res.final_model, test_b);
    res.test_loss = mean_loss(res.final_model, test_b);
    if (!std::isfinite(res.test_loss)) throw NumericError("non-finite test loss");
    return res;
}

double diversity(const std::vector<ParamVector>& members) {
    if (members.size() < 2)
        throw std::invalid_argument("diversity needs at least two members");
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].size() != members.front().size())
            throw std::invalid_argument("diversity: member length mismatch");
    std::vector<const ParamVector*> ps;
    for (const ParamVector& m : members) ps.push_back(&m);
    return mean_pairwise(ps);
}

ErrorBoundResult error_bound(const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw std::invalid_argument("error_bound: empty epsilon vector");
    double sum_sq = 0.0;
    double min_eps = epsilons.front();
    for (double e : epsilons) {
        // 0.5 itself is allowed: clamped error rates sit at the boundary
        if (!(e > 0.0 && e <= 0.5))
            throw std::invalid_argument("error_bound: epsilon must lie in (0, 0.5]");
        const double gamma = 0.5 - e;
        sum_sq += gamma * gamma;
        min_eps = std::min(min_eps, e);
    }
    ErrorBoundResult r;
    r.bound = 0.5 * std::exp(-2.0 * sum_sq / static_cast<double>(epsilons.size()));
    r.holds = min_eps <= r.bound;
    return r;
}

}  // namespace bgadam
