#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebransac/data.hpp"

namespace ebransac {

enum class CoordDomain {
    Unbounded,
    StrictlyPositive,
};

/// A parametric model reduced to the two things robust fitting needs: a
/// per-point loss and its gradient in the parameters. Gradients are reported
/// in the natural parameterization; optimizers handle constrained coordinates
/// by working in log space (see ebr.hpp).
struct LossModel {
    int param_dim = 0;
    std::vector<CoordDomain> param_domain;
    std::function<double(std::span<const double>, const DataPoint&)> point_loss;
    std::function<void(std::span<const double>, const DataPoint&, std::span<double>)>
        point_loss_grad;
    std::string name;
};

/// Thrown when a point loss evaluates to a non-finite value; `index` names
/// the offending data point.
class NonFiniteLossError : public std::runtime_error {
public:
    NonFiniteLossError(std::size_t index, double value);
    std::size_t index;
    double value;
};

/// Mean of the per-point losses, (1/N) sum_mu l(theta; d_mu).
double mean_loss(const LossModel& model, std::span<const double> theta,
                 const Dataset& data);

/// Gradient of mean_loss in theta (mean of per-point gradients).
std::vector<double> mean_loss_grad(const LossModel& model, std::span<const double> theta,
                                   const Dataset& data);

/// Subset variants over an index list (used by RANSAC and the alternating
/// maximization); indices may repeat.
double mean_loss_subset(const LossModel& model, std::span<const double> theta,
                        const Dataset& data, std::span<const std::size_t> indices);
std::vector<double> mean_loss_grad_subset(const LossModel& model,
                                          std::span<const double> theta,
                                          const Dataset& data,
                                          std::span<const std::size_t> indices);

/// True when theta lies strictly inside the model's parameter domain.
bool in_domain_interior(const LossModel& model, std::span<const double> theta);

}  // namespace ebransac
