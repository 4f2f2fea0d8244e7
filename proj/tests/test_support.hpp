#pragma once

#include "greedy_colloc/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace gcol::test {

/// Deterministic generator shared by the property tests.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Matrix random_matrix(std::mt19937_64& gen, Index rows, Index cols) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix a(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) a(i, j) = dist(gen);
    }
    return a;
}

inline Vector random_vector(std::mt19937_64& gen, Index size) { return random_matrix(gen, size, 1).col(0); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Richardson-extrapolated central difference of a scalar function of one variable.
template <typename F>
double richardson_derivative(F f, double x, double h) {
    auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    const double d1 = central(h);
    const double d2 = central(h / 2.0);
    const double d4 = central(h / 4.0);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d4 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

/// Richardson-extrapolated second difference.
template <typename F>
double richardson_second_derivative(F f, double x, double h) {
    auto central = [&](double step) { return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step); };
    const double d1 = central(h);
    const double d2 = central(h / 2.0);
    const double d4 = central(h / 4.0);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d4 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

}  // namespace gcol::test
