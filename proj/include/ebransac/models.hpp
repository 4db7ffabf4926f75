#pragma once

#include <string_view>

#include "ebransac/baselines.hpp"
#include "ebransac/loss_model.hpp"

namespace ebransac::models {

/// theta = (a, b); l = (y - a x - b)^2.
LossModel linear_regression();

/// theta = (m, sigma), sigma > 0; l = 0.5 ln(2 pi sigma^2) + (x - m)^2 / (2 sigma^2).
LossModel gaussian();

/// theta = (lambda), lambda > 0; l = -ln lambda + lambda x for x >= 0.
LossModel exponential();

/// Lookup by CLI name: linreg | gaussian | exponential.
LossModel by_name(std::string_view name);

/// Closed-form subset solver matching the model (OLS, Gaussian MLE,
/// exponential MLE); throws for models without one.
SubsetSolver closed_form_subset_solver(const LossModel& model);

/// Gradient-descent fallback solver for models without a closed form;
/// starts each solve at theta0.
SubsetSolver descent_subset_solver(const LossModel& model, std::vector<double> theta0,
                                   int max_iters = 10000, double grad_tol = 1e-10);

/// KL divergence between univariate Gaussians (m1, s1) and (m2, s2):
/// ln(s2/s1) + (s1^2 + (m1 - m2)^2) / (2 s2^2) - 1/2.
double kld_gaussian(double m1, double s1, double m2, double s2);

/// Population (N -> infinity) modified EB-RANSAC loss for the exponential
/// model under the inlier/outlier mixture
/// q_gen = r E(x|2) + (1-r) U_[6,7]:
///   -int_0^inf q_gen(x) softplus(beta - l(lambda; x)) dx + softplus(beta).
/// Quadrature panels split at the density discontinuities x = 6 and x = 7;
/// the exponential tail beyond 7 is integrated to the same tolerance.
double population_ebr_loss_exponential(double lambda, double beta, double mix_ratio);

}  // namespace ebransac::models
