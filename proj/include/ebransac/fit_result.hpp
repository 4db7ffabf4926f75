#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ebransac {

/// Per-restart diagnostics of a multi-start minimization.
struct RestartRecord {
    std::vector<double> theta_init;
    std::vector<double> theta;
    double loss = 0.0;
    int iters = 0;
    bool converged = false;
    bool diverged = false;
};

/// Result of a robust fit. For EB-RANSAC `selection_probs` holds
/// P(w_mu = 1 | theta*, D, beta); for RANSAC it holds the binary consensus
/// mask of the winning model.
struct FitResult {
    std::vector<double> theta_star;
    double ebr_loss = 0.0;
    std::vector<double> selection_probs;
    std::vector<RestartRecord> restart_log;
    nlohmann::json config;
};

void to_json(nlohmann::json& j, const RestartRecord& r);
void from_json(const nlohmann::json& j, RestartRecord& r);
void to_json(nlohmann::json& j, const FitResult& r);
void from_json(const nlohmann::json& j, FitResult& r);

}  // namespace ebransac
