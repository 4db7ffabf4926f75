#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ebransac/baselines.hpp"
#include "ebransac/data.hpp"
#include "ebransac/loss_model.hpp"
#include "ebransac/rng.hpp"

namespace ebransac::gibbs {

/// Binary selection vector over the data points; the all-zero configuration
/// is excluded from the sample space.
class SelectionVector {
public:
    explicit SelectionVector(std::vector<std::uint8_t> w);
    static SelectionVector from_indices(std::size_t n, std::span<const std::size_t> ones);
    static SelectionVector all_ones(std::size_t n);

    const std::vector<std::uint8_t>& w() const { return w_; }
    std::size_t size() const { return w_.size(); }
    bool operator[](std::size_t i) const { return w_[i] != 0; }
    std::size_t count() const;
    std::vector<std::size_t> indices() const;

    bool operator==(const SelectionVector& other) const = default;

private:
    std::vector<std::uint8_t> w_;
};

/// Log of the unnormalized joint density:
/// -sum_mu w_mu l(theta; d_mu) + beta sum_mu w_mu.
double joint_log_density_unnorm(const LossModel& model, std::span<const double> theta,
                                const SelectionVector& w, const Dataset& data,
                                double beta);

class EmptyConsensusError : public std::runtime_error {
public:
    EmptyConsensusError(double beta, double min_loss, std::size_t argmin);
    double beta;
    double min_loss;
    std::size_t argmin;  // index of the least-loss point, for callers that fall back
};

/// Exact conditional argmax over w: w_mu = 1 iff beta > l(theta; d_mu).
/// Throws EmptyConsensusError when no point qualifies.
SelectionVector consensus_mask(const LossModel& model, std::span<const double> theta,
                               const Dataset& data, double beta);

class SamplingBudgetError : public std::runtime_error {
public:
    explicit SamplingBudgetError(int budget);
};

/// Exact sample from the conditional of w via rejection: independent
/// Bernoulli(sigmoid(beta - l_mu)) draws, redrawn on the all-zero outcome.
/// If `attempts` is non-null it receives the number of Bernoulli-vector
/// draws used (>= 1). Throws SamplingBudgetError after max_attempts draws.
SelectionVector sample_w(const LossModel& model, std::span<const double> theta,
                         const Dataset& data, double beta, Rng& rng,
                         int* attempts = nullptr, int max_attempts = 10000);

struct ChainRound {
    std::vector<double> theta;
    std::vector<std::uint8_t> w;
    double joint_log_density = 0.0;
};

struct ChainTrace {
    std::vector<ChainRound> rounds;
    bool converged = false;
    int iterations = 0;
};

class AlternationError : public std::runtime_error {
public:
    AlternationError(const std::string& msg, ChainTrace trace_so_far);
    ChainTrace trace;
};

/// Deterministic alternating maximization: theta_t minimizes the selected
/// loss (via inner_solver), w_{t+1} is the consensus mask of theta_t; stops
/// at a fixed point of w or after max_rounds. The recorded joint log density
/// is non-decreasing along the trace.
ChainTrace alternate_maximize(const LossModel& model, const Dataset& data, double beta,
                              const SelectionVector& w0, const SubsetSolver& inner_solver,
                              int max_rounds = 100);

/// JSON-lines export, one record per round.
std::string trace_to_jsonl(const ChainTrace& trace);

}  // namespace ebransac::gibbs
