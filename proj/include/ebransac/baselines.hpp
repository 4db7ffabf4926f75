#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ebransac/data.hpp"
#include "ebransac/fit_result.hpp"
#include "ebransac/loss_model.hpp"

namespace ebransac {

struct RansacConfig {
    int hypo_size = 2;        // size of the hypothetical-inlier set
    int iterations = 200;
    double t_cons = 0.05;     // per-point loss threshold for consensus membership
    int min_consensus = 0;    // consensus size must strictly exceed this
    bool local_opt = false;   // LO-RANSAC: refit on the consensus set
    std::uint64_t rng_seed = 0;
};

/// Minimizes the mean loss over the given index subset (closed form where the
/// model admits one, gradient descent otherwise).
using SubsetSolver =
    std::function<std::vector<double>(const Dataset&, std::span<const std::size_t>)>;

struct RansacIterationDiag {
    int iteration = 0;
    std::size_t consensus_size = 0;
    double score = 0.0;
    bool accepted = false;
};

class RansacNoConsensusError : public std::runtime_error {
public:
    explicit RansacNoConsensusError(std::vector<RansacIterationDiag> diags);
    std::vector<RansacIterationDiag> diagnostics;
};

/// Standard RANSAC (Steps 1-3), optionally with LO-RANSAC retraining on the
/// consensus set. Score is the mean consensus loss, lower is better; ties
/// break to the larger consensus set, then the earlier iteration.
/// Deterministic given rng_seed.
FitResult ransac_fit(const LossModel& model, const Dataset& data,
                     const RansacConfig& config, const SubsetSolver& inner_solver);

struct LineFit {
    double a = 0.0;  // slope
    double b = 0.0;  // intercept
};

struct GaussianFit {
    double m = 0.0;
    double sigma = 0.0;
};

/// Ordinary least squares for y = a x + b. Empty `indices` means all points.
LineFit lms_fit(const Dataset& data, std::span<const std::size_t> indices = {});

/// Sample mean and biased (1/N) standard deviation.
GaussianFit gaussian_mle(const Dataset& data, std::span<const std::size_t> indices = {});

/// lambda = 1 / sample mean.
double exponential_mle(const Dataset& data, std::span<const std::size_t> indices = {});

}  // namespace ebransac
