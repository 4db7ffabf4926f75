#include "ebransac/loss_model.hpp"

#include <cmath>

namespace ebransac {

NonFiniteLossError::NonFiniteLossError(std::size_t index, double value)
    : std::runtime_error("point loss is non-finite at index " + std::to_string(index)),
      index(index),
      value(value) {}

double mean_loss(const LossModel& model, std::span<const double> theta,
                 const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("mean_loss: empty dataset");
    double sum = 0.0;
    for (std::size_t mu = 0; mu < data.size(); ++mu) {
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        sum += l;
    }
    return sum / static_cast<double>(data.size());
}

std::vector<double> mean_loss_grad(const LossModel& model, std::span<const double> theta,
                                   const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("mean_loss_grad: empty dataset");
    std::vector<double> grad(model.param_dim, 0.0);
    std::vector<double> g(model.param_dim);
    for (std::size_t mu = 0; mu < data.size(); ++mu) {
        model.point_loss_grad(theta, data[mu], g);
        for (int j = 0; j < model.param_dim; ++j) grad[j] += g[j];
    }
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (double& v : grad) v *= inv_n;
    return grad;
}

double mean_loss_subset(const LossModel& model, std::span<const double> theta,
                        const Dataset& data, std::span<const std::size_t> indices) {
    if (indices.empty()) throw std::invalid_argument("mean_loss_subset: empty subset");
    double sum = 0.0;
    for (std::size_t mu : indices) {
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        sum += l;
    }
    return sum / static_cast<double>(indices.size());
}

std::vector<double> mean_loss_grad_subset(const LossModel& model,
                                          std::span<const double> theta,
                                          const Dataset& data,
                                          std::span<const std::size_t> indices) {
    if (indices.empty()) throw std::invalid_argument("mean_loss_grad_subset: empty subset");
    std::vector<double> grad(model.param_dim, 0.0);
    std::vector<double> g(model.param_dim);
    for (std::size_t mu : indices) {
        model.point_loss_grad(theta, data[mu], g);
        for (int j = 0; j < model.param_dim; ++j) grad[j] += g[j];
    }
    const double inv_n = 1.0 / static_cast<double>(indices.size());
    for (double& v : grad) v *= inv_n;
    return grad;
}

bool in_domain_interior(const LossModel& model, std::span<const double> theta) {
    if (static_cast<int>(theta.size()) != model.param_dim) return false;
    for (int j = 0; j < model.param_dim; ++j) {
        if (!std::isfinite(theta[j])) return false;
        if (model.param_domain[j] == CoordDomain::StrictlyPositive && theta[j] <= 0.0) {
            return false;
        }
    }
    return true;
}

}  // namespace ebransac
