#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebransac/baselines.hpp"
#include "ebransac/ebr.hpp"
#include "ebransac/synth.hpp"

namespace ebransac::experiments {

struct ExperimentConfig {
    std::string preset = "linreg";
    std::vector<double> betas;  // single value or strictly increasing grid
    std::vector<std::string> methods{"ebr", "classical"};
    std::vector<std::uint64_t> seeds{0};
    std::filesystem::path out_dir = ".";
    int threads = 0;   // 0 = hardware concurrency
    int restarts = 30;

    // landscape-only knobs
    double mix_ratio = 200.0 / 240.0;
    std::vector<double> lambda_grid;  // empty = default grid
};

void validate(const ExperimentConfig& config);
nlohmann::json resolved_config(const ExperimentConfig& config);

/// Preset defaults: restart box straddling both loss basins, descent knobs,
/// per-seed RNG stream.
EbrConfig default_ebr_config(const synth::PresetSpec& spec, double beta,
                             std::uint64_t seed, int restarts = 30);
RansacConfig default_ransac_config(const synth::PresetSpec& spec, std::size_t n_points,
                                   bool local_opt, std::uint64_t seed);

/// Comparison metric against the generating parameters: parameter MSE for
/// linreg, KLD to the inlier Gaussian for gaussian, |lambda - rate| for
/// exponential.
double metric_vs_truth(const synth::PresetSpec& spec, std::span<const double> theta);

/// Closed-form classical estimate for the preset (LMS / Gaussian MLE /
/// exponential MLE).
std::vector<double> classical_fit(const synth::PresetSpec& spec, const Dataset& data);

struct MethodRow {
    std::string method;
    double beta = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::vector<double> theta;
    double metric = 0.0;
    FitResult fit;  // populated for ebr / ransac variants
};

struct FitRunResult {
    std::vector<MethodRow> rows;
    nlohmann::json config;
    int failures = 0;
};

/// Fits every requested method on every (beta, seed) preset instance.
/// A method's failure is recorded in its row and does not abort the others.
FitRunResult fit_run(const ExperimentConfig& config);

struct SweepCell {
    double beta = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::vector<double> theta;  // EB-RANSAC estimate
    double metric = 0.0;
};

struct ClassicalRef {
    std::uint64_t seed = 0;
    std::vector<double> theta;
    double metric = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // sorted by (beta, seed)
    std::vector<ClassicalRef> refs;
    nlohmann::json config;
    int failures = 0;
};

/// One EB-RANSAC fit per (beta, seed) grid cell, executed by a work pool
/// with deterministic output ordering. Per-cell failures are recorded
/// in-line and do not poison the grid.
SweepResult beta_sweep(const ExperimentConfig& config);

struct LandscapeCell {
    double beta = 0.0;
    double lambda = 0.0;
    double value = 0.0;
    bool ok = false;
    std::string error;
};

struct LandscapeResult {
    std::vector<LandscapeCell> cells;  // sorted by (beta, lambda)
    nlohmann::json config;
    int failures = 0;
};

/// Population landscape of the modified EB-RANSAC loss for the exponential
/// preset over (beta, lambda) cells.
LandscapeResult landscape(const ExperimentConfig& config);

struct JumpResult {
    double beta_c = 0.0;
    double width = 0.0;      // grid interval width at the jump
    double magnitude = 0.0;  // |delta value| across the interval
};

/// Largest-step jump detector over a monotone beta grid: beta_c is the
/// midpoint of the interval with the largest |delta|, reported with the
/// interval width as uncertainty. Returns nullopt when no interval exceeds
/// 3x the median |delta|.
std::optional<JumpResult> detect_jump(std::span<const double> betas,
                                      std::span<const double> values);

// Output files. Each writer embeds the resolved config and seeds as '#'
// header lines; bodies are rendered with fixed formatting so identical
// configs produce byte-identical files.
void write_fit_outputs(const FitRunResult& result, const std::filesystem::path& out_dir);
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& file);
void write_landscape_csv(const LandscapeResult& result, const std::filesystem::path& file);

/// Reads back one seed's (beta, first-parameter) series from a sweep CSV.
void read_sweep_series(const std::filesystem::path& file, std::uint64_t seed,
                       std::vector<double>& betas, std::vector<double>& values);

/// Fixed-format float rendering used for all CSV bodies.
std::string format_double(double v);

}  // namespace ebransac::experiments
