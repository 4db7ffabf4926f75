#include "ebransac/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ebransac/descent.hpp"
#include "ebransac/numerics.hpp"

namespace ebransac::models {

LossModel linear_regression() {
    LossModel m;
    m.name = "linreg";
    m.param_dim = 2;
    m.param_domain = {CoordDomain::Unbounded, CoordDomain::Unbounded};
    m.point_loss = [](std::span<const double> theta, const DataPoint& d) {
        const double r = (*d.target)[0] - theta[0] * d.input[0] - theta[1];
        return r * r;
    };
    m.point_loss_grad = [](std::span<const double> theta, const DataPoint& d,
                           std::span<double> g) {
        const double r = (*d.target)[0] - theta[0] * d.input[0] - theta[1];
        g[0] = -2.0 * r * d.input[0];
        g[1] = -2.0 * r;
    };
    return m;
}

LossModel gaussian() {
    LossModel m;
    m.name = "gaussian";
    m.param_dim = 2;
    m.param_domain = {CoordDomain::Unbounded, CoordDomain::StrictlyPositive};
    m.point_loss = [](std::span<const double> theta, const DataPoint& d) {
        const double mean = theta[0], sigma = theta[1];
        const double z = (d.input[0] - mean) / sigma;
        return 0.5 * std::log(2.0 * std::numbers::pi * sigma * sigma) + 0.5 * z * z;
    };
    m.point_loss_grad = [](std::span<const double> theta, const DataPoint& d,
                           std::span<double> g) {
        const double mean = theta[0], sigma = theta[1];
        const double r = d.input[0] - mean;
        g[0] = -r / (sigma * sigma);
        g[1] = 1.0 / sigma - r * r / (sigma * sigma * sigma);
    };
    return m;
}

LossModel exponential() {
    LossModel m;
    m.name = "exponential";
    m.param_dim = 1;
    m.param_domain = {CoordDomain::StrictlyPositive};
    m.point_loss = [](std::span<const double> theta, const DataPoint& d) {
        return -std::log(theta[0]) + theta[0] * d.input[0];
    };
    m.point_loss_grad = [](std::span<const double> theta, const DataPoint& d,
                           std::span<double> g) {
        g[0] = -1.0 / theta[0] + d.input[0];
    };
    return m;
}

LossModel by_name(std::string_view name) {
    if (name == "linreg") return linear_regression();
    if (name == "gaussian") return gaussian();
    if (name == "exponential") return exponential();
    throw std::invalid_argument("unknown model: " + std::string(name));
}

SubsetSolver closed_form_subset_solver(const LossModel& model) {
    if (model.name == "linreg") {
        return [](const Dataset& data, std::span<const std::size_t> idx) {
            const LineFit f = lms_fit(data, idx);
            return std::vector<double>{f.a, f.b};
        };
    }
    if (model.name == "gaussian") {
        return [](const Dataset& data, std::span<const std::size_t> idx) {
            const GaussianFit f = gaussian_mle(data, idx);
            return std::vector<double>{f.m, f.sigma};
        };
    }
    if (model.name == "exponential") {
        return [](const Dataset& data, std::span<const std::size_t> idx) {
            return std::vector<double>{exponential_mle(data, idx)};
        };
    }
    throw std::invalid_argument("no closed-form subset solver for model: " + model.name);
}

SubsetSolver descent_subset_solver(const LossModel& model, std::vector<double> theta0,
                                   int max_iters, double grad_tol) {
    return [model, theta0 = std::move(theta0), max_iters,
            grad_tol](const Dataset& data, std::span<const std::size_t> idx) {
        const Objective natural = [&](std::span<const double> theta,
                                      std::span<double> grad) {
            auto g = mean_loss_grad_subset(model, theta, data, idx);
            std::copy(g.begin(), g.end(), grad.begin());
            return mean_loss_subset(model, theta, data, idx);
        };
        const Objective objective = reparameterized_objective(model, natural);
        const std::vector<double> z0 = encode_params(model, theta0);
        const DescentResult res = minimize_armijo(objective, z0, max_iters, grad_tol);
        return decode_params(model, res.x);
    };
}

double kld_gaussian(double m1, double s1, double m2, double s2) {
    if (!(s1 > 0.0) || !(s2 > 0.0)) {
        throw std::invalid_argument("kld_gaussian: standard deviations must be positive");
    }
    const double dm = m1 - m2;
    return std::log(s2 / s1) + (s1 * s1 + dm * dm) / (2.0 * s2 * s2) - 0.5;
}

double population_ebr_loss_exponential(double lambda, double beta, double mix_ratio) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (mix_ratio < 0.0 || mix_ratio > 1.0) {
        throw std::invalid_argument("mix ratio must lie in [0, 1]");
    }
    const double log_lambda = std::log(lambda);
    const auto sfp_term = [&](double x) {
        return softplus(beta - (-log_lambda + lambda * x));
    };
    const auto exp_part = [&](double x) {
        return mix_ratio * 2.0 * std::exp(-2.0 * x) * sfp_term(x);
    };
    const auto mixed_part = [&](double x) {
        return (exp_part(x) + (1.0 - mix_ratio) * sfp_term(x));
    };
    // Panels split at the uniform component's discontinuities (x = 6, 7);
    // the exponential tail decays like e^{-2x}, negligible past x = 40.
    constexpr double kTol = 1e-11;
    double integral = adaptive_simpson(exp_part, 0.0, 6.0, kTol);
    integral += adaptive_simpson(mixed_part, 6.0, 7.0, kTol);
    integral += adaptive_simpson(exp_part, 7.0, 40.0, kTol);
    return -integral + softplus(beta);
}

}  // namespace ebransac::models
