#include "ebransac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ebransac/models.hpp"
#include "ebransac/parallel.hpp"
#include "ebransac/rng.hpp"

namespace ebransac::experiments {

namespace {

constexpr std::uint64_t kFitStream = 101;
constexpr std::uint64_t kSweepStream = 102;

bool known_method(const std::string& m) {
    return m == "ebr" || m == "ransac" || m == "lo-ransac" || m == "classical";
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (double l = 0.2; l <= 3.5 + 1e-9; l += 0.02) grid.push_back(l);
    return grid;
}

}  // namespace

void validate(const ExperimentConfig& config) {
    synth::preset_by_name(config.preset, 0);  // throws on unknown preset
    if (config.betas.empty()) throw std::invalid_argument("at least one beta is required");
    for (std::size_t i = 1; i < config.betas.size(); ++i) {
        if (!(config.betas[i] > config.betas[i - 1])) {
            throw std::invalid_argument("beta grid must be strictly increasing");
        }
    }
    if (config.seeds.empty()) throw std::invalid_argument("at least one seed is required");
    if (config.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    for (const auto& m : config.methods) {
        if (!known_method(m)) throw std::invalid_argument("unknown method: " + m);
    }
}

nlohmann::json resolved_config(const ExperimentConfig& config) {
    return {{"preset", config.preset},
            {"betas", config.betas},
            {"methods", config.methods},
            {"seeds", config.seeds},
            {"restarts", config.restarts},
            {"mix_ratio", config.mix_ratio}};
}

EbrConfig default_ebr_config(const synth::PresetSpec& spec, double beta,
                             std::uint64_t seed, int restarts) {
    EbrConfig config;
    config.beta = beta;
    config.restarts = restarts;
    config.rng_seed = seed;
    config.init.kind = InitSampler::Kind::UniformBox;
    if (spec.name == "linreg") {
        config.init.lo = {-5.0, -8.0};
        config.init.hi = {5.0, 8.0};
    } else if (spec.name == "gaussian") {
        config.init.lo = {-3.0, 0.05};
        config.init.hi = {3.0, 2.0};
    } else if (spec.name == "exponential") {
        // Wide enough to straddle both loss basins (inlier rate and the
        // contaminated ML rate).
        config.init.lo = {0.05};
        config.init.hi = {5.0};
    } else {
        throw std::invalid_argument("no EB-RANSAC defaults for preset: " + spec.name);
    }
    return config;
}

RansacConfig default_ransac_config(const synth::PresetSpec& spec, std::size_t n_points,
                                   bool local_opt, std::uint64_t seed) {
    RansacConfig config;
    config.local_opt = local_opt;
    config.rng_seed = seed;
    config.iterations = 200;
    config.min_consensus = static_cast<int>((n_points + 1) / 2);
    if (spec.name == "linreg") {
        config.hypo_size = 2;
        config.t_cons = 0.05;
    } else if (spec.name == "gaussian") {
        config.hypo_size = 3;
        config.t_cons = 2.0;
    } else if (spec.name == "exponential") {
        config.hypo_size = 2;
        config.t_cons = 4.0;
    } else {
        throw std::invalid_argument("no RANSAC defaults for preset: " + spec.name);
    }
    return config;
}

double metric_vs_truth(const synth::PresetSpec& spec, std::span<const double> theta) {
    if (spec.name == "linreg") {
        const double da = theta[0] - spec.slope;
        const double db = theta[1] - spec.intercept;
        return 0.5 * (da * da + db * db);
    }
    if (spec.name == "gaussian") {
        return models::kld_gaussian(theta[0], theta[1], spec.inlier_m, spec.inlier_sigma);
    }
    if (spec.name == "exponential") {
        return std::fabs(theta[0] - spec.inlier_rate);
    }
    throw std::invalid_argument("no truth metric for preset: " + spec.name);
}

std::vector<double> classical_fit(const synth::PresetSpec& spec, const Dataset& data) {
    if (spec.name == "linreg") {
        const LineFit f = lms_fit(data);
        return {f.a, f.b};
    }
    if (spec.name == "gaussian") {
        const GaussianFit f = gaussian_mle(data);
        return {f.m, f.sigma};
    }
    if (spec.name == "exponential") {
        return {exponential_mle(data)};
    }
    throw std::invalid_argument("no classical estimator for preset: " + spec.name);
}

namespace {

MethodRow run_method(const std::string& method, const synth::LabeledDataset& labeled,
                     double beta, std::uint64_t seed, int restarts, int threads) {
    MethodRow row;
    row.method = method;
    row.beta = beta;
    row.seed = seed;
    try {
        const LossModel model = models::by_name(labeled.spec.name);
        if (method == "ebr") {
            const EbrConfig config = default_ebr_config(
                labeled.spec, beta, derive_seed(seed, kFitStream), restarts);
            row.fit = fit(model, labeled.data, config, threads);
            row.theta = row.fit.theta_star;
        } else if (method == "ransac" || method == "lo-ransac") {
            const RansacConfig config =
                default_ransac_config(labeled.spec, labeled.data.size(),
                                      method == "lo-ransac", derive_seed(seed, kFitStream));
            row.fit = ransac_fit(model, labeled.data, config,
                                 models::closed_form_subset_solver(model));
            row.theta = row.fit.theta_star;
        } else if (method == "classical") {
            row.theta = classical_fit(labeled.spec, labeled.data);
        } else {
            throw std::invalid_argument("unknown method: " + method);
        }
        row.metric = metric_vs_truth(labeled.spec, row.theta);
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

}  // namespace

FitRunResult fit_run(const ExperimentConfig& config) {
    validate(config);
    FitRunResult result;
    result.config = resolved_config(config);

    std::map<std::uint64_t, synth::LabeledDataset> datasets;
    for (std::uint64_t seed : config.seeds) {
        datasets.emplace(seed, synth::generate(synth::preset_by_name(config.preset, seed)));
    }

    struct Task {
        std::string method;
        double beta;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (double beta : config.betas) {
        for (std::uint64_t seed : config.seeds) {
            for (const auto& method : config.methods) {
                tasks.push_back({method, beta, seed});
            }
        }
    }
    result.rows.resize(tasks.size());
    parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
        const Task& t = tasks[i];
        result.rows[i] =
            run_method(t.method, datasets.at(t.seed), t.beta, t.seed, config.restarts, 1);
    });
    for (const auto& row : result.rows) result.failures += row.ok ? 0 : 1;
    return result;
}

SweepResult beta_sweep(const ExperimentConfig& config) {
    validate(config);
    SweepResult result;
    result.config = resolved_config(config);

    std::map<std::uint64_t, synth::LabeledDataset> datasets;
    for (std::uint64_t seed : config.seeds) {
        datasets.emplace(seed, synth::generate(synth::preset_by_name(config.preset, seed)));
    }
    for (std::uint64_t seed : config.seeds) {
        ClassicalRef ref;
        ref.seed = seed;
        const auto& labeled = datasets.at(seed);
        ref.theta = classical_fit(labeled.spec, labeled.data);
        ref.metric = metric_vs_truth(labeled.spec, ref.theta);
        result.refs.push_back(std::move(ref));
    }

    result.cells.resize(config.betas.size() * config.seeds.size());
    parallel_for(result.cells.size(), config.threads, [&](std::size_t i) {
        const std::size_t bi = i / config.seeds.size();
        const std::size_t si = i % config.seeds.size();
        SweepCell& cell = result.cells[i];
        cell.beta = config.betas[bi];
        cell.seed = config.seeds[si];
        const auto& labeled = datasets.at(cell.seed);
        try {
            const EbrConfig ebr_config = default_ebr_config(
                labeled.spec, cell.beta,
                derive_seed(cell.seed, kSweepStream + bi), config.restarts);
            const FitResult fit_result = fit(models::by_name(labeled.spec.name),
                                             labeled.data, ebr_config, 1);
            cell.theta = fit_result.theta_star;
            cell.metric = metric_vs_truth(labeled.spec, cell.theta);
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    });
    for (const auto& cell : result.cells) result.failures += cell.ok ? 0 : 1;
    return result;
}

LandscapeResult landscape(const ExperimentConfig& config) {
    validate(config);
    if (config.preset != "exponential") {
        throw std::invalid_argument("landscape scans apply to the exponential preset only");
    }
    LandscapeResult result;
    result.config = resolved_config(config);
    const std::vector<double> grid =
        config.lambda_grid.empty() ? default_lambda_grid() : config.lambda_grid;
    result.config["lambda_grid"] = grid;

    result.cells.resize(config.betas.size() * grid.size());
    parallel_for(result.cells.size(), config.threads, [&](std::size_t i) {
        const std::size_t bi = i / grid.size();
        const std::size_t li = i % grid.size();
        LandscapeCell& cell = result.cells[i];
        cell.beta = config.betas[bi];
        cell.lambda = grid[li];
        try {
            cell.value =
                models::population_ebr_loss_exponential(cell.lambda, cell.beta,
                                                        config.mix_ratio);
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    });
    for (const auto& cell : result.cells) result.failures += cell.ok ? 0 : 1;
    return result;
}

std::optional<JumpResult> detect_jump(std::span<const double> betas,
                                      std::span<const double> values) {
    if (betas.size() != values.size() || betas.size() < 2) {
        throw std::invalid_argument("detect_jump needs two aligned series of length >= 2");
    }
    for (std::size_t i = 1; i < betas.size(); ++i) {
        if (!(betas[i] > betas[i - 1])) {
            throw std::invalid_argument("detect_jump needs a strictly increasing beta grid");
        }
    }
    std::vector<double> deltas(betas.size() - 1);
    for (std::size_t i = 0; i + 1 < betas.size(); ++i) {
        deltas[i] = std::fabs(values[i + 1] - values[i]);
    }
    std::vector<double> sorted = deltas;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::size_t arg = 0;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
        if (deltas[i] > deltas[arg]) arg = i;
    }
    if (!(deltas[arg] > 3.0 * median)) return std::nullopt;
    JumpResult jump;
    jump.beta_c = 0.5 * (betas[arg] + betas[arg + 1]);
    jump.width = betas[arg + 1] - betas[arg];
    jump.magnitude = deltas[arg];
    return jump;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

void write_header(std::ostream& out, const nlohmann::json& config) {
    out << "# config: " << config.dump() << '\n';
}

// Error text lands in the last CSV column; keep it one-field safe.
std::string sanitize(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return text;
}

std::string theta_columns(int n) {
    std::string cols;
    for (int i = 0; i < n; ++i) {
        cols += ",theta_" + std::to_string(i);
    }
    return cols;
}

}  // namespace

void write_fit_outputs(const FitRunResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::size_t max_dim = 0;
    for (const auto& row : result.rows) max_dim = std::max(max_dim, row.theta.size());

    std::ofstream csv(out_dir / "comparison.csv");
    write_header(csv, result.config);
    csv << "method,beta,seed,ok" << theta_columns(static_cast<int>(max_dim))
        << ",metric,error\n";
    for (const auto& row : result.rows) {
        csv << row.method << ',' << format_double(row.beta) << ',' << row.seed << ','
            << (row.ok ? 1 : 0);
        for (std::size_t i = 0; i < max_dim; ++i) {
            csv << ',' << (i < row.theta.size() ? format_double(row.theta[i]) : "");
        }
        csv << ',' << (row.ok ? format_double(row.metric) : "nan") << ','
            << sanitize(row.error) << '\n';
        if (row.ok && !row.fit.theta_star.empty()) {
            nlohmann::json j = row.fit;
            std::ostringstream name;
            name << "fit_" << row.method << "_beta" << format_double(row.beta) << "_seed"
                 << row.seed << ".json";
            std::ofstream jf(out_dir / name.str());
            jf << j.dump(2) << '\n';
        }
    }
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::size_t max_dim = 0;
    for (const auto& cell : result.cells) max_dim = std::max(max_dim, cell.theta.size());
    for (const auto& ref : result.refs) max_dim = std::max(max_dim, ref.theta.size());

    std::ofstream csv(file);
    write_header(csv, result.config);
    csv << "kind,beta,seed,ok" << theta_columns(static_cast<int>(max_dim))
        << ",metric,error\n";
    for (const auto& ref : result.refs) {
        csv << "classical,," << ref.seed << ",1";
        for (std::size_t i = 0; i < max_dim; ++i) {
            csv << ',' << (i < ref.theta.size() ? format_double(ref.theta[i]) : "");
        }
        csv << ',' << format_double(ref.metric) << ",\n";
    }
    for (const auto& cell : result.cells) {
        csv << "ebr," << format_double(cell.beta) << ',' << cell.seed << ','
            << (cell.ok ? 1 : 0);
        for (std::size_t i = 0; i < max_dim; ++i) {
            csv << ',' << (i < cell.theta.size() ? format_double(cell.theta[i]) : "");
        }
        csv << ',' << (cell.ok ? format_double(cell.metric) : "nan") << ',' << sanitize(cell.error)
            << '\n';
    }
}

void write_landscape_csv(const LandscapeResult& result, const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream csv(file);
    write_header(csv, result.config);
    csv << "beta,lambda,value,ok,error\n";
    for (const auto& cell : result.cells) {
        csv << format_double(cell.beta) << ',' << format_double(cell.lambda) << ','
            << (cell.ok ? format_double(cell.value) : "nan") << ',' << (cell.ok ? 1 : 0)
            << ',' << sanitize(cell.error) << '\n';
    }
}

void read_sweep_series(const std::filesystem::path& file, std::uint64_t seed,
                       std::vector<double>& betas, std::vector<double>& values) {
    betas.clear();
    values.clear();
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!saw_header) {
            saw_header = true;  // column header row
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() < 5 || fields[0] != "ebr") continue;
        if (std::stoull(fields[2]) != seed || fields[3] != "1") continue;
        betas.push_back(std::stod(fields[1]));
        values.push_back(std::stod(fields[4]));  // theta_0
    }
}

}  // namespace ebransac::experiments
