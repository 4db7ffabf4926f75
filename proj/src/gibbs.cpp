#include "ebransac/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ebransac/numerics.hpp"

namespace ebransac::gibbs {

SelectionVector::SelectionVector(std::vector<std::uint8_t> w) : w_(std::move(w)) {
    if (w_.empty()) throw std::invalid_argument("selection vector must be non-empty");
    if (std::all_of(w_.begin(), w_.end(), [](std::uint8_t v) { return v == 0; })) {
        throw std::invalid_argument("selection vector must select at least one point");
    }
    for (std::uint8_t v : w_) {
        if (v > 1) throw std::invalid_argument("selection vector entries must be 0 or 1");
    }
}

SelectionVector SelectionVector::from_indices(std::size_t n,
                                              std::span<const std::size_t> ones) {
    std::vector<std::uint8_t> w(n, 0);
    for (std::size_t i : ones) w.at(i) = 1;
    return SelectionVector(std::move(w));
}

SelectionVector SelectionVector::all_ones(std::size_t n) {
    return SelectionVector(std::vector<std::uint8_t>(n, 1));
}

std::size_t SelectionVector::count() const {
    return static_cast<std::size_t>(std::count(w_.begin(), w_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> SelectionVector::indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (w_[i]) idx.push_back(i);
    }
    return idx;
}

double joint_log_density_unnorm(const LossModel& model, std::span<const double> theta,
                                const SelectionVector& w, const Dataset& data,
                                double beta) {
    if (w.size() != data.size()) {
        throw std::invalid_argument("selection vector length must match the dataset");
    }
    double value = 0.0;
    for (std::size_t mu = 0; mu < data.size(); ++mu) {
        if (!w[mu]) continue;
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        value += beta - l;
    }
    return value;
}

EmptyConsensusError::EmptyConsensusError(double beta, double min_loss, std::size_t argmin)
    : std::runtime_error("no point satisfies beta > loss (min loss " +
                         std::to_string(min_loss) + " at index " + std::to_string(argmin) +
                         ", beta " + std::to_string(beta) + ")"),
      beta(beta),
      min_loss(min_loss),
      argmin(argmin) {}

SelectionVector consensus_mask(const LossModel& model, std::span<const double> theta,
                               const Dataset& data, double beta) {
    validate(data);
    std::vector<std::uint8_t> w(data.size(), 0);
    double min_loss = std::numeric_limits<double>::infinity();
    std::size_t argmin = 0;
    bool any = false;
    for (std::size_t mu = 0; mu < data.size(); ++mu) {
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        if (l < min_loss) {
            min_loss = l;
            argmin = mu;
        }
        if (beta > l) {
            w[mu] = 1;
            any = true;
        }
    }
    if (!any) throw EmptyConsensusError(beta, min_loss, argmin);
    return SelectionVector(std::move(w));
}

SamplingBudgetError::SamplingBudgetError(int budget)
    : std::runtime_error("rejection sampling exhausted its budget of " +
                         std::to_string(budget) +
                         " draws (all selection probabilities near zero)") {}

SelectionVector sample_w(const LossModel& model, std::span<const double> theta,
                         const Dataset& data, double beta, Rng& rng, int* attempts,
                         int max_attempts) {
    validate(data);
    const std::size_t n = data.size();
    std::vector<double> probs(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        const double l = model.point_loss(theta, data[mu]);
        if (!std::isfinite(l)) throw NonFiniteLossError(mu, l);
        probs[mu] = sigmoid(beta - l);
    }
    std::vector<std::uint8_t> w(n);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        bool any = false;
        for (std::size_t mu = 0; mu < n; ++mu) {
            w[mu] = rng.uniform01() < probs[mu] ? 1 : 0;
            any = any || w[mu];
        }
        if (any) {
            if (attempts != nullptr) *attempts = attempt;
            return SelectionVector(std::move(w));
        }
    }
    throw SamplingBudgetError(max_attempts);
}

AlternationError::AlternationError(const std::string& msg, ChainTrace trace_so_far)
    : std::runtime_error(msg), trace(std::move(trace_so_far)) {}

ChainTrace alternate_maximize(const LossModel& model, const Dataset& data, double beta,
                              const SelectionVector& w0, const SubsetSolver& inner_solver,
                              int max_rounds) {
    if (w0.size() != data.size()) {
        throw std::invalid_argument("w0 length must match the dataset");
    }
    ChainTrace trace;
    SelectionVector w = w0;
    for (int round = 0; round < max_rounds; ++round) {
        const auto idx = w.indices();
        std::vector<double> theta;
        try {
            theta = inner_solver(data, idx);
        } catch (const std::exception& e) {
            throw AlternationError(std::string("inner solver failed: ") + e.what(),
                                   std::move(trace));
        }
        const double jld = joint_log_density_unnorm(model, theta, w, data, beta);
        trace.rounds.push_back({theta, w.w(), jld});
        trace.iterations = round + 1;

        SelectionVector w_next = w;
        try {
            w_next = consensus_mask(model, theta, data, beta);
        } catch (const EmptyConsensusError& e) {
            throw AlternationError(std::string("consensus collapsed: ") + e.what(),
                                   std::move(trace));
        }
        if (w_next == w) {
            trace.converged = true;
            break;
        }
        w = std::move(w_next);
    }
    return trace;
}

std::string trace_to_jsonl(const ChainTrace& trace) {
    std::ostringstream out;
    for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
        const ChainRound& r = trace.rounds[t];
        nlohmann::json j{{"round", t},
                         {"theta", r.theta},
                         {"w", r.w},
                         {"joint_log_density", r.joint_log_density}};
        if (t + 1 == trace.rounds.size()) {
            j["converged"] = trace.converged;
        }
        out << j.dump() << '\n';
    }
    return out.str();
}

}  // namespace ebransac::gibbs
