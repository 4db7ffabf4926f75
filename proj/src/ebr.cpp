#include "ebransac/ebr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebransac/numerics.hpp"
#include "ebransac/parallel.hpp"
#include "ebransac/rng.hpp"

namespace ebransac {

AllRestartsDivergedError::AllRestartsDivergedError(std::vector<RestartRecord> log)
    : std::runtime_error("every restart diverged to a non-finite loss"),
      restart_log(std::move(log)) {}

void validate(const EbrConfig& config, int param_dim) {
    if (config.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (config.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(config.grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be > 0");
    const std::size_t dim = static_cast<std::size_t>(param_dim);
    if (config.init.kind == InitSampler::Kind::UniformBox) {
        if (config.init.lo.size() != dim || config.init.hi.size() != dim) {
            throw std::invalid_argument("init box must have one (lo, hi) pair per parameter");
        }
        for (std::size_t j = 0; j < dim; ++j) {
            if (!(config.init.lo[j] <= config.init.hi[j])) {
                throw std::invalid_argument("init box has lo > hi");
            }
        }
    } else {
        if (config.init.pilot.size() != dim || config.init.scale.size() != dim) {
            throw std::invalid_argument("init pilot/scale must have one entry per parameter");
        }
    }
}

double ebr_loss(const LossModel& model, std::span<const double> theta,
                const Dataset& data, double beta) {
    if (data.empty()) throw std::invalid_argument("ebr_loss: empty dataset");
    double sum = 0.0;
    for (std::size_t mu = 0; mu < data.size(); ++mu) {
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        sum += softplus(beta - l);
    }
    return -sum / static_cast<double>(data.size());
}

std::vector<double> ebr_loss_grad(const LossModel& model, std::span<const double> theta,
                                  const Dataset& data, double beta) {
    std::vector<double> grad(model.param_dim);
    ebr_loss_and_grad(model, theta, data, beta, grad);
    return grad;
}

double ebr_loss_and_grad(const LossModel& model, std::span<const double> theta,
                         const Dataset& data, double beta, std::span<double> grad_out) {
    if (data.empty()) throw std::invalid_argument("ebr_loss_and_grad: empty dataset");
    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    std::vector<double> g(model.param_dim);
    double sum = 0.0;
    for (std::size_t mu = 0; mu < data.size(); ++mu) {
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        sum += softplus(beta - l);
        const double weight = sigmoid(beta - l);
        model.point_loss_grad(theta, data[mu], g);
        for (int j = 0; j < model.param_dim; ++j) grad_out[j] += weight * g[j];
    }
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (int j = 0; j < model.param_dim; ++j) grad_out[j] *= inv_n;
    return -sum * inv_n;
}

namespace {

std::vector<double> sample_init(const InitSampler& init, Rng& rng) {
    if (init.kind == InitSampler::Kind::UniformBox) {
        std::vector<double> theta(init.lo.size());
        for (std::size_t j = 0; j < theta.size(); ++j) {
            theta[j] = rng.uniform(init.lo[j], init.hi[j]);
        }
        return theta;
    }
    std::vector<double> theta(init.pilot.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        theta[j] = rng.normal(init.pilot[j], init.scale[j]);
    }
    return theta;
}

nlohmann::json config_to_json(const EbrConfig& config) {
    nlohmann::json init;
    if (config.init.kind == InitSampler::Kind::UniformBox) {
        init = {{"kind", "uniform_box"}, {"lo", config.init.lo}, {"hi", config.init.hi}};
    } else {
        init = {{"kind", "gaussian_pilot"},
                {"pilot", config.init.pilot},
                {"scale", config.init.scale}};
    }
    return {{"beta", config.beta},
            {"restarts", config.restarts},
            {"init", init},
            {"max_iters", config.max_iters},
            {"grad_tol", config.grad_tol},
            {"step",
             {{"initial_step", config.step.initial_step},
              {"shrink", config.step.shrink},
              {"armijo_c", config.step.armijo_c}}},
            {"rng_seed", config.rng_seed}};
}

}  // namespace

FitResult fit(const LossModel& model, const Dataset& data, const EbrConfig& config,
              int threads) {
    validate(data);
    validate(config, model.param_dim);

    const Objective natural = [&](std::span<const double> theta, std::span<double> grad) {
        return ebr_loss_and_grad(model, theta, data, config.beta, grad);
    };
    const Objective objective = reparameterized_objective(model, natural);

    std::vector<RestartRecord> log(config.restarts);
    parallel_for(static_cast<std::size_t>(config.restarts), threads, [&](std::size_t r) {
        Rng rng(derive_seed(config.rng_seed, r));
        RestartRecord& rec = log[r];
        rec.theta_init = sample_init(config.init, rng);
        const std::vector<double> z0 = encode_params(model, rec.theta_init);
        DescentResult d;
        try {
            d = minimize_armijo(objective, z0, config.max_iters, config.grad_tol,
                                config.step);
        } catch (const NonFiniteLossError&) {
            rec.theta = rec.theta_init;
            rec.loss = std::numeric_limits<double>::quiet_NaN();
            rec.diverged = true;
            return;
        }
        rec.theta = decode_params(model, d.x);
        rec.loss = d.value;
        rec.iters = d.iters;
        rec.converged = d.converged;
        rec.diverged = !std::isfinite(d.value);
    });

    int best = -1;
    for (int r = 0; r < config.restarts; ++r) {
        if (log[r].diverged) continue;
        if (best < 0 || log[r].loss < log[best].loss) best = r;  // ties keep lowest index
    }
    if (best < 0) throw AllRestartsDivergedError(std::move(log));

    FitResult result;
    result.theta_star = log[best].theta;
    result.ebr_loss = log[best].loss;
    result.selection_probs =
        selection_probs_exact(model, result.theta_star, data, config.beta);
    result.restart_log = std::move(log);
    result.config = config_to_json(config);
    return result;
}

std::vector<double> selection_probs_exact(const LossModel& model,
                                          std::span<const double> theta,
                                          const Dataset& data, double beta,
                                          bool* psi_underflow) {
    if (data.empty()) throw std::invalid_argument("selection_probs_exact: empty dataset");
    const std::size_t n = data.size();
    std::vector<double> losses(n);
    double log_psi_plus_1 = 0.0;  // log(Psi + 1) = sum_mu softplus(beta - l_mu)
    for (std::size_t mu = 0; mu < n; ++mu) {
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        losses[mu] = l;
        log_psi_plus_1 += softplus(beta - l);
    }
    if (psi_underflow != nullptr) *psi_underflow = log_psi_plus_1 < 1e-12;
    // (Psi+1)/Psi = 1 / (1 - e^{-log(Psi+1)}); -expm1 keeps it stable for
    // small and large arguments alike.
    const double factor = 1.0 / (-std::expm1(-log_psi_plus_1));
    std::vector<double> probs(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        probs[mu] = std::fmin(1.0, factor * sigmoid(beta - losses[mu]));
    }
    return probs;
}

std::vector<double> selection_probs_approx(const LossModel& model,
                                           std::span<const double> theta,
                                           const Dataset& data, double beta) {
    if (data.empty()) throw std::invalid_argument("selection_probs_approx: empty dataset");
    std::vector<double> probs(data.size());
    for (std::size_t mu = 0; mu < data.size(); ++mu) {
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        probs[mu] = sigmoid(beta - l);
    }
    return probs;
}

}  // namespace ebransac
