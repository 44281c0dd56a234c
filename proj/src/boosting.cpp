#include "bgadam/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgadam {

SampleWeights uniform_weights(std::size_t m) {
    if (m == 0) throw std::invalid_argument("uniform_weights: m must be >= 1");
    return {std::vector<double>(m, 1.0 / static_cast<double>(m))};
}

std::vector<std::size_t> resample(const SampleWeights& z, std::size_t size, Rng& rng) {
    if (size == 0) throw std::invalid_argument("resample: size must be >= 1");
    Categorical dist(z.z);
    std::vector<std::size_t> out(size);
    for (std::size_t& idx : out) idx = dist.draw(rng);
    return out;
}

WeightUpdate update_weights(const SampleWeights& z,
                            const std::vector<std::uint8_t>& correct_mask) {
    const std::size_t m = z.size();
    if (correct_mask.size() != m)
        throw std::invalid_argument("update_weights: mask length " +
                                    std::to_string(correct_mask.size()) +
                                    " != weight count " + std::to_string(m));

    double epsilon = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (!correct_mask[i]) epsilon += z.z[i];

    constexpr double lo = 1e-6, hi = 0.5 - 1e-6;
    const double raw = epsilon;
    epsilon = std::clamp(epsilon, lo, hi);

    WeightUpdate upd;
    upd.round.epsilon = epsilon;
    upd.round.alpha = 0.5 * std::log((1.0 - epsilon) / epsilon);
    upd.round.clamped = raw != epsilon;
    upd.round.correct_mask = correct_mask;

    const double up = std::exp(upd.round.alpha);
    const double down = std::exp(-upd.round.alpha);
    upd.weights.z.resize(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        upd.weights.z[i] = z.z[i] * (correct_mask[i] ? down : up);
        total += upd.weights.z[i];
    }
    for (double& w : upd.weights.z) w /= total;
    return upd;
}

}  // namespace bgadam
