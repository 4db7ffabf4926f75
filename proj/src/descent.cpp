#include "ebransac/descent.hpp"

#include <cmath>

namespace ebransac {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::fmax(m, std::fabs(x));
    return m;
}

double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

DescentResult minimize_armijo(const Objective& objective, std::span<const double> x0,
                              int max_iters, double grad_tol,
                              const LineSearchParams& ls) {
    const std::size_t dim = x0.size();
    DescentResult res;
    res.x.assign(x0.begin(), x0.end());
    std::vector<double> grad(dim), trial(dim), trial_grad(dim);
    double value = objective(res.x, grad);
    constexpr int kMaxBacktracks = 60;
    int iter = 0;
    for (; iter < max_iters; ++iter) {
        if (!std::isfinite(value)) break;
        if (inf_norm(grad) < grad_tol) {
            res.converged = true;
            break;
        }
        const double g2 = squared_norm(grad);
        double step = ls.initial_step;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            for (std::size_t j = 0; j < dim; ++j) trial[j] = res.x[j] - step * grad[j];
            const double trial_value = objective(trial, trial_grad);
            if (std::isfinite(trial_value) &&
                trial_value <= value - ls.armijo_c * step * g2) {
                res.x.swap(trial);
                value = trial_value;
                grad.swap(trial_grad);
                accepted = true;
                break;
            }
            step *= ls.shrink;
        }
        if (!accepted) break;  // no acceptable step in this direction
    }
    res.value = value;
    res.iters = iter;
    return res;
}

std::vector<double> encode_params(const LossModel& model, std::span<const double> theta) {
    std::vector<double> z(theta.begin(), theta.end());
    for (int j = 0; j < model.param_dim; ++j) {
        if (model.param_domain[j] == CoordDomain::StrictlyPositive) {
            z[j] = std::log(theta[j]);
        }
    }
    return z;
}

std::vector<double> decode_params(const LossModel& model, std::span<const double> z) {
    std::vector<double> theta(z.begin(), z.end());
    for (int j = 0; j < model.param_dim; ++j) {
        if (model.param_domain[j] == CoordDomain::StrictlyPositive) {
            theta[j] = std::exp(z[j]);
        }
    }
    return theta;
}

Objective reparameterized_objective(const LossModel& model, Objective natural) {
    return [&model, natural = std::move(natural)](std::span<const double> z,
                                                  std::span<double> grad_out) {
        const std::vector<double> theta = decode_params(model, z);
        const double value = natural(theta, grad_out);
        for (int j = 0; j < model.param_dim; ++j) {
            if (model.param_domain[j] == CoordDomain::StrictlyPositive) {
                grad_out[j] *= theta[j];  // d theta / d z = theta for log coords
            }
        }
        return value;
    };
}

}  // namespace ebransac
