#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ebransac/loss_model.hpp"

namespace ebransac {

struct LineSearchParams {
    double initial_step = 1.0;
    double shrink = 0.5;
    double armijo_c = 1e-4;
};

/// Objective interface for the descent core: fills `grad_out` and returns the
/// value at `x`.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

struct DescentResult {
    std::vector<double> x;
    double value = 0.0;
    int iters = 0;
    bool converged = false;  // gradient infinity-norm fell below grad_tol
};

/// Plain gradient descent with Armijo backtracking. A step is accepted only
/// when the new value is finite and satisfies the Armijo decrease condition,
/// so the objective value never increases along the iterate sequence.
DescentResult minimize_armijo(const Objective& objective, std::span<const double> x0,
                              int max_iters, double grad_tol,
                              const LineSearchParams& ls = {});

/// Maps between natural parameters and the unconstrained optimization space:
/// strictly-positive coordinates are optimized as their logarithms.
std::vector<double> encode_params(const LossModel& model, std::span<const double> theta);
std::vector<double> decode_params(const LossModel& model, std::span<const double> z);

/// Wraps a natural-space objective (value + gradient in theta) into one over
/// the unconstrained space, applying the chain rule to the gradient.
Objective reparameterized_objective(const LossModel& model, Objective natural);

}  // namespace ebransac
