#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace bgadam {

// Deterministic random stream. All distributions are implemented on top of
// the raw 64-bit engine output so results are identical across standard
// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Box-Muller; one value per call so the stream layout is position-independent.
    double normal(double mean = 0.0, double stddev = 1.0);

    // uniform integer in [0, n), n >= 1
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 eng_;
};

// Sub-seed derivation: a fixed labeled-stream scheme so any stochastic site
// (init, dropout, resampling, parent sampling, crossover, mutation) can be
// replayed in isolation from the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t a = 0, std::uint64_t b = 0);

// Categorical distribution over nonnegative weights (need not be normalized).
class Categorical {
public:
    explicit Categorical(const std::vector<double>& weights);
    std::size_t draw(Rng& rng) const;

private:
    std::vector<double> cdf_;
};

// In-place Fisher-Yates shuffle driven by Rng.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng.index(i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace bgadam
