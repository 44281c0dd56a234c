#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgadam {

// Dense row-major matrix of doubles. Used for features, activations and
// class-probability outputs.
struct Matrix {
    std::vector<double> data;
    std::size_t rows = 0, cols = 0;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : data(r * c, fill), rows(r), cols(c) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
};

// Flat, ordered list of all model weights and biases; the chromosome the
// genetic operators act on. Layout: per layer, weight matrix (row-major,
// in x out) followed by biases, layers in order.
using ParamVector = std::vector<double>;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

}  // namespace bgadam
