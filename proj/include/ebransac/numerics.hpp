#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ebransac {

/// Overflow-safe softplus, ln(1 + e^z) = max(z, 0) + log1p(e^{-|z|}).
inline double softplus(double z) {
    return std::fmax(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

/// Overflow-safe logistic sigmoid, 1 / (1 + e^{-z}).
inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// Central-difference gradient of a scalar function of a real vector.
/// Step per coordinate is h_scale * max(1, |x_j|).
template <typename F>
std::vector<double> central_diff_grad(F&& f, std::span<const double> x,
                                      double h_scale = 1e-6) {
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> grad(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double h = h_scale * std::fmax(1.0, std::fabs(x[j]));
        const double orig = xp[j];
        xp[j] = orig + h;
        const double fp = f(std::span<const double>(xp));
        xp[j] = orig - h;
        const double fm = f(std::span<const double>(xp));
        xp[j] = orig;
        grad[j] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

/// True when two gradient vectors agree to the given relative tolerance,
/// measured in the infinity norm with a unit floor.
inline bool gradients_match(std::span<const double> a, std::span<const double> b,
                            double rel_tol = 1e-6) {
    if (a.size() != b.size()) return false;
    double diff = 0.0, scale = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        diff = std::fmax(diff, std::fabs(a[j] - b[j]));
        scale = std::fmax(scale, std::fmax(std::fabs(a[j]), std::fabs(b[j])));
    }
    return diff <= rel_tol * scale;
}

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg, double estimate, double error_bound)
        : std::runtime_error(msg), estimate(estimate), error_bound(error_bound) {}
    double estimate;
    double error_bound;
};

/// Adaptive Simpson integration of f over [a, b] to the given absolute
/// tolerance. Throws QuadratureError (carrying the achieved estimate and
/// error bound) if the tolerance cannot be met within max_depth splits.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 48);

}  // namespace ebransac
