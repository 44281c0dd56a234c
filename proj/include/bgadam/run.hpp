#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgadam/boosting.hpp"
#include "bgadam/data.hpp"
#include "bgadam/genetic.hpp"
#include "bgadam/nnet.hpp"
#include "bgadam/optim.hpp"

namespace bgadam {

// bgadam: boosted resampling + genetic evolution; gadam: same flow with
// every sub-training set equal to the full training set; single: one model,
// no population machinery.
enum class RunMode { bgadam, gadam, single };

RunMode run_mode_from_string(const std::string& name);
std::string to_string(RunMode m);

struct RunConfig {
    RunMode mode = RunMode::bgadam;
    std::size_t g = 5;
    std::size_t K = 5;
    std::size_t iterations_total = 2000;
    std::size_t batch_size = 128;
    OptimizerConfig optimizer;
    GeneticConfig genetic;
    Architecture arch;
    std::uint64_t seed = 1;

    // Budget equalization: every model lineage receives iterations_total / K
    // optimizer steps per generation, K generations deep.
    std::size_t per_generation_iters() const { return iterations_total / K; }
    std::size_t lineage_steps() const { return per_generation_iters() * K; }
    void validate() const;
};

struct BoostingRoundLog {
    std::size_t model_index = 0;
    double epsilon = 0.0;
    double alpha = 0.0;
    bool clamped = false;
};

struct GenerationRecord {
    std::size_t generation = 0;               // 1-based
    std::vector<double> input_losses_pre;     // val loss of entrants, before training
    std::vector<double> candidate_losses;     // post-training: g inputs then g children
    std::vector<std::size_t> survivor_ids;    // ascending by loss, into candidates
    double survivor_loss_sum = 0.0;
    double best_val_loss = 0.0;
    double mean_val_loss = 0.0;
    double input_diversity = 0.0;             // over trained inputs, before selection
    double survivor_diversity = 0.0;
    double test_accuracy_of_best = 0.0;
    std::vector<BoostingRoundLog> rounds;     // empty unless boosting ran
};

struct RunResult {
    Mlp final_model;
    std::vector<GenerationRecord> history;    // length K
    double test_accuracy = 0.0;
    double test_loss = 0.0;                   // mean cross-entropy on test
    std::size_t lineage_steps = 0;
    std::size_t total_optimizer_steps = 0;
};

// Mini-batch training with a fresh optimizer state; loss/dropout/batch
// order fully determined by `seed`.
Mlp train_member(Mlp model, const Dataset& base, const std::vector<std::size_t>& train_indices,
                 std::size_t iterations, const OptimizerConfig& ocfg, std::size_t batch_size,
                 std::uint64_t seed);

struct BoostedTraining {
    std::vector<Mlp> models;
    FitnessReport fitness;                    // over the g validation losses
    std::vector<SampleWeights> weight_trace;  // z after each update
    std::vector<std::vector<std::size_t>> sub_indices;
    std::vector<BoostingRoundLog> rounds;
};

// Sequentially train the population: model j trains on D_j (D_1 = full set,
// later sets resampled from z), is scored on val, and updates z from its
// full-training-set predictions.
BoostedTraining train_population_boosted(std::vector<Mlp> models, const Dataset& train,
                                         const Batch& val, const RunConfig& cfg,
                                         std::size_t generation);

struct GenerationOutcome {
    std::vector<Mlp> population;  // survivors, ascending by validation loss
    GenerationRecord record;
};

GenerationOutcome run_generation(std::vector<Mlp> population, const Dataset& train,
                                 const Batch& val, const Batch& test, const RunConfig& cfg,
                                 std::size_t generation);

RunResult run(const RunConfig& cfg, const Dataset& train, const Dataset& val,
              const Dataset& test);

// Mean pairwise Euclidean distance between members.
double diversity(const std::vector<ParamVector>& members);

struct ErrorBoundResult {
    double bound = 0.0;
    bool holds = false;
};

// gamma_i = 0.5 - eps_i; bound = 0.5 * exp(-2 * sum(gamma_i^2) / g);
// holds when min(eps) <= bound.
ErrorBoundResult error_bound(const std::vector<double>& epsilons);

}  // namespace bgadam
