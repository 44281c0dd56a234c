#include "bgadam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bgadam {

double Rng::normal(double mean, double stddev) {
    // u1 in (0, 1] keeps the log finite
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: n must be >= 1");
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return std::min(k, n - 1);
}

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = mix(master);
    for (unsigned char c : label) h = mix(h ^ c);
    h = mix(h ^ a);
    h = mix(h ^ b);
    return h;
}

Categorical::Categorical(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("Categorical: empty weight vector");
    cdf_.reserve(weights.size());
    double acc = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("Categorical: negative weight");
        acc += w;
        cdf_.push_back(acc);
    }
    if (acc <= 0.0) throw std::invalid_argument("Categorical: all weights zero");
}

std::size_t Categorical::draw(Rng& rng) const {
    double u = rng.uniform() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::size_t>(it - cdf_.begin());
}

}  // namespace bgadam
