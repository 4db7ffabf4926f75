#pragma once

#include <cmath>
#include <vector>

#include "ebransac/data.hpp"
#include "ebransac/rng.hpp"

namespace ebransac::testutil {

inline Dataset xy_dataset(const std::vector<std::pair<double, double>>& pts) {
    Dataset data;
    for (const auto& [x, y] : pts) data.points.push_back(make_point({x}, {y}));
    return data;
}

inline Dataset x_dataset(const std::vector<double>& xs) {
    Dataset data;
    for (double x : xs) data.points.push_back(make_point({x}));
    return data;
}

/// Noise-free or noisy line sample for regression checks.
inline Dataset line_dataset(double a, double b, int n, double noise_sigma,
                            std::uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    data.seed = seed;
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(-3.0, 3.0);
        const double y = a * x + b + (noise_sigma > 0 ? rng.normal(0.0, noise_sigma) : 0.0);
        data.points.push_back(make_point({x}, {y}));
    }
    return data;
}

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::fmax(1.0, std::fabs(want));
}

}  // namespace ebransac::testutil
