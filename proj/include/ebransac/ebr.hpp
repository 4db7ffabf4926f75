#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ebransac/data.hpp"
#include "ebransac/descent.hpp"
#include "ebransac/fit_result.hpp"
#include "ebransac/loss_model.hpp"

namespace ebransac {

/// Restart-initialization distribution: per-coordinate uniform box, or
/// Gaussian around a pilot estimate. Both are expressed in the natural
/// parameter space.
struct InitSampler {
    enum class Kind { UniformBox, GaussianPilot };
    Kind kind = Kind::UniformBox;
    std::vector<double> lo, hi;        // UniformBox
    std::vector<double> pilot, scale;  // GaussianPilot
};

struct EbrConfig {
    double beta = 0.0;
    int restarts = 30;
    InitSampler init;
    int max_iters = 10000;
    double grad_tol = 1e-8;
    LineSearchParams step;
    std::uint64_t rng_seed = 0;
};

void validate(const EbrConfig& config, int param_dim);

class AllRestartsDivergedError : public std::runtime_error {
public:
    explicit AllRestartsDivergedError(std::vector<RestartRecord> log);
    std::vector<RestartRecord> restart_log;
};

/// EB-RANSAC loss, -(1/N) sum_mu softplus(beta - l(theta; d_mu)).
double ebr_loss(const LossModel& model, std::span<const double> theta,
                const Dataset& data, double beta);

/// Exact gradient of ebr_loss: (1/N) sum_mu sigmoid(beta - l_mu) dl_mu/dtheta.
std::vector<double> ebr_loss_grad(const LossModel& model, std::span<const double> theta,
                                  const Dataset& data, double beta);

/// Fused single-pass evaluation; writes the gradient and returns the loss.
double ebr_loss_and_grad(const LossModel& model, std::span<const double> theta,
                         const Dataset& data, double beta, std::span<double> grad_out);

/// Multi-start minimization of the EB-RANSAC loss (gradient descent with
/// Armijo backtracking in the log-reparameterized space). Returns the restart
/// with minimal final loss; ties break to the lowest restart index. Bitwise
/// deterministic given (data, config) regardless of `threads`: each restart
/// draws from its own stream derived from rng_seed + restart index.
FitResult fit(const LossModel& model, const Dataset& data, const EbrConfig& config,
              int threads = 1);

/// Exact per-point selection probabilities P(w_mu = 1 | theta, D, beta) =
/// ((Psi+1)/Psi) * sigmoid(beta - l_mu), clamped to [0, 1]. When log(Psi+1)
/// underflows below 1e-12 (every loss far above beta) the factor is computed
/// from the same stable expression and *psi_underflow is set.
std::vector<double> selection_probs_exact(const LossModel& model,
                                          std::span<const double> theta,
                                          const Dataset& data, double beta,
                                          bool* psi_underflow = nullptr);

/// Large-N approximation sigmoid(beta - l_mu).
std::vector<double> selection_probs_approx(const LossModel& model,
                                           std::span<const double> theta,
                                           const Dataset& data, double beta);

}  // namespace ebransac
