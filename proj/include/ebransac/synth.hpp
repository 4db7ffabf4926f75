#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebransac/data.hpp"

namespace ebransac::synth {

/// Parameters of a seeded synthetic preset. Fields beyond (name, counts,
/// seed) apply to the preset the name selects.
struct PresetSpec {
    std::string name;  // linreg | gaussian | exponential
    int n_inliers = 0;
    int n_outliers = 0;
    std::uint64_t seed = 0;

    // linreg: inliers are y = slope*x + intercept + N(0, noise_sigma^2),
    // x ~ U[x_min, x_max]; outliers are isotropic Gaussian points.
    double slope = 1.0, intercept = 3.0;
    double x_min = -3.0, x_max = 3.0;
    double noise_sigma = 0.1;
    double outlier_cx = 1.0, outlier_cy = 0.0, outlier_scale = 1.5;

    // gaussian: inliers N(inlier_m, inlier_sigma^2), outliers N(outlier_m, outlier_sigma^2).
    double inlier_m = -1.0, inlier_sigma = 0.2;
    double outlier_m = 1.0, outlier_sigma = 0.1;

    // exponential: inliers E(inlier_rate), outliers U[outlier_lo, outlier_hi].
    double inlier_rate = 2.0;
    double outlier_lo = 6.0, outlier_hi = 7.0;
};

/// Preset defaults matching the desk experiments: linreg 100+20,
/// gaussian 200+40, exponential 200+40.
PresetSpec preset_by_name(std::string_view name, std::uint64_t seed);

void to_json(nlohmann::json& j, const PresetSpec& spec);

struct LabeledDataset {
    Dataset data;
    std::vector<std::uint8_t> is_outlier;  // scoring metadata only, never serialized to CSV
    PresetSpec spec;
};

/// Deterministic given spec.seed. Inliers, outliers, and the final shuffle
/// draw from independent streams, so changing one count leaves the other
/// component's draws untouched.
LabeledDataset generate(const PresetSpec& spec);

/// Writes the estimator-facing CSV plus a metadata sidecar carrying seed,
/// spec, and labels.
void save(const LabeledDataset& labeled, const std::filesystem::path& csv_path);

}  // namespace ebransac::synth
