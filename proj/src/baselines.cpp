#include "ebransac/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebransac/rng.hpp"

namespace ebransac {

RansacNoConsensusError::RansacNoConsensusError(std::vector<RansacIterationDiag> diags)
    : std::runtime_error("no RANSAC iteration produced a consensus set larger than the threshold"),
      diagnostics(std::move(diags)) {}

namespace {

std::vector<std::size_t> all_indices(const Dataset& data) {
    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

std::vector<std::size_t> resolve(const Dataset& data, std::span<const std::size_t> indices,
                                 std::vector<std::size_t>& storage) {
    if (!indices.empty()) return {indices.begin(), indices.end()};
    storage = all_indices(data);
    return storage;
}

// Uniform sample of k distinct indices from [0, n): partial Fisher-Yates.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_index(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace

FitResult ransac_fit(const LossModel& model, const Dataset& data,
                     const RansacConfig& config, const SubsetSolver& inner_solver) {
    validate(data);
    const std::size_t n = data.size();
    if (config.hypo_size < 1 || static_cast<std::size_t>(config.hypo_size) > n) {
        throw std::invalid_argument("hypo_size must lie in [1, N]");
    }
    if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");

    std::vector<RansacIterationDiag> diags;
    diags.reserve(config.iterations);

    bool have_best = false;
    double best_score = 0.0;
    std::size_t best_consensus_size = 0;
    std::vector<double> best_theta;
    std::vector<std::size_t> best_consensus;

    for (int it = 0; it < config.iterations; ++it) {
        Rng rng(derive_seed(config.rng_seed, static_cast<std::uint64_t>(it)));
        RansacIterationDiag diag;
        diag.iteration = it;

        const auto hypo = sample_without_replacement(n, config.hypo_size, rng);
        std::vector<double> theta;
        try {
            theta = inner_solver(data, hypo);
        } catch (const std::exception&) {
            diags.push_back(diag);  // degenerate subset fit; skip the iteration
            continue;
        }

        std::vector<std::size_t> consensus;
        for (std::size_t mu = 0; mu < n; ++mu) {
            if (model.point_loss(theta, data[mu]) < config.t_cons) consensus.push_back(mu);
        }
        diag.consensus_size = consensus.size();
        if (consensus.size() <= static_cast<std::size_t>(config.min_consensus)) {
            diags.push_back(diag);
            continue;
        }

        if (config.local_opt) {
            try {
                theta = inner_solver(data, consensus);
            } catch (const std::exception&) {
                diags.push_back(diag);
                continue;
            }
        }
        const double score = mean_loss_subset(model, theta, data, consensus);
        diag.score = score;

        const bool better =
            !have_best || score < best_score ||
            (score == best_score && consensus.size() > best_consensus_size);
        if (better) {
            have_best = true;
            best_score = score;
            best_consensus_size = consensus.size();
            best_theta = std::move(theta);
            best_consensus = std::move(consensus);
            diag.accepted = true;
        }
        diags.push_back(diag);
    }

    if (!have_best) throw RansacNoConsensusError(std::move(diags));

    FitResult result;
    result.theta_star = best_theta;
    result.ebr_loss = best_score;
    result.selection_probs.assign(n, 0.0);
    for (std::size_t mu : best_consensus) result.selection_probs[mu] = 1.0;
    result.config = {{"hypo_size", config.hypo_size},
                     {"iterations", config.iterations},
                     {"t_cons", config.t_cons},
                     {"min_consensus", config.min_consensus},
                     {"local_opt", config.local_opt},
                     {"rng_seed", config.rng_seed}};
    return result;
}

LineFit lms_fit(const Dataset& data, std::span<const std::size_t> indices) {
    validate(data);
    std::vector<std::size_t> storage;
    const auto idx = resolve(data, indices, storage);
    if (idx.size() < 2) throw std::invalid_argument("lms_fit needs at least two points");
    double sx = 0.0, sy = 0.0;
    for (std::size_t mu : idx) {
        sx += data[mu].input[0];
        sy += (*data[mu].target)[0];
    }
    const double n = static_cast<double>(idx.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t mu : idx) {
        const double dx = data[mu].input[0] - mx;
        sxx += dx * dx;
        sxy += dx * ((*data[mu].target)[0] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("lms_fit: degenerate design (all x equal)");
    LineFit f;
    f.a = sxy / sxx;
    f.b = my - f.a * mx;
    return f;
}

GaussianFit gaussian_mle(const Dataset& data, std::span<const std::size_t> indices) {
    validate(data);
    std::vector<std::size_t> storage;
    const auto idx = resolve(data, indices, storage);
    if (idx.size() < 2) throw std::invalid_argument("gaussian_mle needs at least two points");
    double sum = 0.0;
    for (std::size_t mu : idx) sum += data[mu].input[0];
    const double n = static_cast<double>(idx.size());
    const double m = sum / n;
    double ss = 0.0;
    for (std::size_t mu : idx) {
        const double d = data[mu].input[0] - m;
        ss += d * d;
    }
    if (ss == 0.0) throw std::invalid_argument("gaussian_mle: zero variance");
    return GaussianFit{m, std::sqrt(ss / n)};  // biased 1/N estimator
}

double exponential_mle(const Dataset& data, std::span<const std::size_t> indices) {
    validate(data);
    std::vector<std::size_t> storage;
    const auto idx = resolve(data, indices, storage);
    double sum = 0.0;
    for (std::size_t mu : idx) {
        const double x = data[mu].input[0];
        if (x < 0.0) {
            throw std::invalid_argument("exponential_mle: negative sample at index " +
                                        std::to_string(mu));
        }
        sum += x;
    }
    if (sum <= 0.0) throw std::invalid_argument("exponential_mle: sample mean must be positive");
    return static_cast<double>(idx.size()) / sum;
}

}  // namespace ebransac
