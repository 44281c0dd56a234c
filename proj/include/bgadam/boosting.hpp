#pragma once

#include <cstdint>
#include <vector>

#include "bgadam/rng.hpp"

namespace bgadam {

// Probability distribution over the m training samples: entries strictly
// positive, summing to 1.
struct SampleWeights {
    std::vector<double> z;

    std::size_t size() const { return z.size(); }
};

struct BoostingRound {
    double epsilon = 0.0;  // weighted error rate, clamped into (0, 0.5)
    double alpha = 0.0;    // 0.5 * ln((1 - epsilon) / epsilon)
    bool clamped = false;
    std::vector<std::uint8_t> correct_mask;
};

struct WeightUpdate {
    SampleWeights weights;
    BoostingRound round;
};

SampleWeights uniform_weights(std::size_t m);

// `size` indices drawn i.i.d. from the categorical distribution z, with
// replacement.
std::vector<std::size_t> resample(const SampleWeights& z, std::size_t size, Rng& rng);

// Multiply misclassified samples by exp(+alpha) and correct ones by
// exp(-alpha), then renormalize. epsilon is clamped into
// [1e-6, 0.5 - 1e-6] so alpha stays positive and finite.
WeightUpdate update_weights(const SampleWeights& z,
                            const std::vector<std::uint8_t>& correct_mask);

}  // namespace bgadam
