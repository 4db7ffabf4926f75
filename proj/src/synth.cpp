#include "ebransac/synth.hpp"

#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ebransac/rng.hpp"

namespace ebransac::synth {

namespace {

constexpr std::uint64_t kInlierStream = 1;
constexpr std::uint64_t kOutlierStream = 2;
constexpr std::uint64_t kShuffleStream = 3;

}  // namespace

PresetSpec preset_by_name(std::string_view name, std::uint64_t seed) {
    PresetSpec spec;
    spec.name = std::string(name);
    spec.seed = seed;
    if (name == "linreg") {
        spec.n_inliers = 100;
        spec.n_outliers = 20;
    } else if (name == "gaussian") {
        spec.n_inliers = 200;
        spec.n_outliers = 40;
    } else if (name == "exponential") {
        spec.n_inliers = 200;
        spec.n_outliers = 40;
    } else {
        throw std::invalid_argument("unknown preset: " + std::string(name));
    }
    return spec;
}

void to_json(nlohmann::json& j, const PresetSpec& spec) {
    j = {{"name", spec.name},
         {"n_inliers", spec.n_inliers},
         {"n_outliers", spec.n_outliers},
         {"seed", spec.seed}};
    if (spec.name == "linreg") {
        j["slope"] = spec.slope;
        j["intercept"] = spec.intercept;
        j["x_min"] = spec.x_min;
        j["x_max"] = spec.x_max;
        j["noise_sigma"] = spec.noise_sigma;
        j["outlier_center"] = {spec.outlier_cx, spec.outlier_cy};
        j["outlier_scale"] = spec.outlier_scale;
    } else if (spec.name == "gaussian") {
        j["inlier_m"] = spec.inlier_m;
        j["inlier_sigma"] = spec.inlier_sigma;
        j["outlier_m"] = spec.outlier_m;
        j["outlier_sigma"] = spec.outlier_sigma;
    } else if (spec.name == "exponential") {
        j["inlier_rate"] = spec.inlier_rate;
        j["outlier_lo"] = spec.outlier_lo;
        j["outlier_hi"] = spec.outlier_hi;
    }
}

LabeledDataset generate(const PresetSpec& spec) {
    if (spec.n_inliers <= 0 || spec.n_outliers < 0) {
        throw std::invalid_argument("preset needs n_inliers > 0 and n_outliers >= 0");
    }
    Rng inlier_rng(derive_seed(spec.seed, kInlierStream));
    Rng outlier_rng(derive_seed(spec.seed, kOutlierStream));
    Rng shuffle_rng(derive_seed(spec.seed, kShuffleStream));

    std::vector<DataPoint> points;
    std::vector<std::uint8_t> labels;
    points.reserve(spec.n_inliers + spec.n_outliers);
    labels.reserve(spec.n_inliers + spec.n_outliers);

    if (spec.name == "linreg") {
        for (int i = 0; i < spec.n_inliers; ++i) {
            const double x = inlier_rng.uniform(spec.x_min, spec.x_max);
            const double y =
                spec.slope * x + spec.intercept + inlier_rng.normal(0.0, spec.noise_sigma);
            points.push_back(make_point({x}, {y}));
            labels.push_back(0);
        }
        for (int i = 0; i < spec.n_outliers; ++i) {
            const double x = outlier_rng.normal(spec.outlier_cx, spec.outlier_scale);
            const double y = outlier_rng.normal(spec.outlier_cy, spec.outlier_scale);
            points.push_back(make_point({x}, {y}));
            labels.push_back(1);
        }
    } else if (spec.name == "gaussian") {
        for (int i = 0; i < spec.n_inliers; ++i) {
            points.push_back(make_point({inlier_rng.normal(spec.inlier_m, spec.inlier_sigma)}));
            labels.push_back(0);
        }
        for (int i = 0; i < spec.n_outliers; ++i) {
            points.push_back(
                make_point({outlier_rng.normal(spec.outlier_m, spec.outlier_sigma)}));
            labels.push_back(1);
        }
    } else if (spec.name == "exponential") {
        for (int i = 0; i < spec.n_inliers; ++i) {
            points.push_back(make_point({inlier_rng.exponential(spec.inlier_rate)}));
            labels.push_back(0);
        }
        for (int i = 0; i < spec.n_outliers; ++i) {
            points.push_back(
                make_point({outlier_rng.uniform(spec.outlier_lo, spec.outlier_hi)}));
            labels.push_back(1);
        }
    } else {
        throw std::invalid_argument("unknown preset: " + spec.name);
    }

    // Shuffle points and labels with one permutation.
    std::vector<std::size_t> perm(points.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle_rng.shuffle(perm);
    LabeledDataset out;
    out.spec = spec;
    out.data.seed = spec.seed;
    out.data.points.reserve(points.size());
    out.is_outlier.reserve(points.size());
    for (std::size_t i : perm) {
        out.data.points.push_back(std::move(points[i]));
        out.is_outlier.push_back(labels[i]);
    }
    return out;
}

void save(const LabeledDataset& labeled, const std::filesystem::path& csv_path) {
    nlohmann::json meta;
    meta["spec"] = labeled.spec;
    meta["labels"] = labeled.is_outlier;
    save_dataset(labeled.data, csv_path, meta.dump());
}

}  // namespace ebransac::synth
