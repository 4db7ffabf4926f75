// Experiment runner: robust fits, beta sweeps, landscape scans, jump
// detection, the discrete-theory oracle, and synthetic data generation.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebransac/experiments.hpp"
#include "ebransac/gibbs.hpp"
#include "ebransac/models.hpp"
#include "ebransac/rng.hpp"
#include "ebransac/synth.hpp"
#include "ebransac/theory.hpp"

namespace {

using namespace ebransac;

std::vector<double> expand_grid(const std::vector<double>& betas, double grid_min,
                                double grid_max, double grid_step) {
    if (!betas.empty()) return betas;
    std::vector<double> grid;
    for (double b = grid_min; b <= grid_max + 1e-12; b += grid_step) grid.push_back(b);
    return grid;
}

std::vector<double> parse_probs(const std::string& arg) {
    std::string text = arg;
    if (std::filesystem::exists(arg)) {
        std::ifstream in(arg);
        std::string line, all;
        while (std::getline(in, line)) all += line + ",";
        text = all;
    }
    std::vector<double> probs;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (!field.empty()) probs.push_back(std::stod(field));
    }
    return probs;
}

int exit_code(int failures) { return failures > 0 ? 2 : 0; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EB-RANSAC robust estimation experiments"};
    app.set_config("--config", "", "TOML-style config file; flags override");
    app.require_subcommand(1);

    experiments::ExperimentConfig config;
    std::vector<double> betas;
    double grid_min = 4.0, grid_max = 8.0, grid_step = 0.05;
    std::string out = "out";
    std::uint64_t single_seed = 0;
    bool seed_given = false;

    const auto add_common = [&](CLI::App* cmd, bool with_methods) {
        cmd->add_option("--preset", config.preset, "Preset: linreg | gaussian | exponential");
        cmd->add_option("--beta", betas, "Beta value(s)")->delimiter(',');
        cmd->add_option("--seeds", config.seeds, "Dataset seeds")->delimiter(',');
        cmd->add_option("--seed", single_seed, "Single dataset seed (overrides --seeds)")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--out", out, "Output directory or file");
        cmd->add_option("--restarts", config.restarts, "EB-RANSAC restarts");
        cmd->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
        if (with_methods) {
            cmd->add_option("--methods", config.methods,
                            "Methods: ebr | ransac | lo-ransac | classical")
                ->delimiter(',');
        }
    };

    auto* fit_cmd = app.add_subcommand("fit", "Fit all requested methods on a preset");
    add_common(fit_cmd, true);

    auto* sweep_cmd = app.add_subcommand("sweep", "EB-RANSAC metric over a beta grid");
    add_common(sweep_cmd, false);
    sweep_cmd->add_option("--beta-min", grid_min, "Grid start (used when --beta absent)");
    sweep_cmd->add_option("--beta-max", grid_max, "Grid end");
    sweep_cmd->add_option("--beta-step", grid_step, "Grid step");

    auto* landscape_cmd =
        app.add_subcommand("landscape", "Population loss landscape (exponential preset)");
    add_common(landscape_cmd, false);
    double lambda_min = 0.2, lambda_max = 3.5, lambda_step = 0.02;
    landscape_cmd->add_option("--lambda-min", lambda_min, "Lambda grid start");
    landscape_cmd->add_option("--lambda-max", lambda_max, "Lambda grid end");
    landscape_cmd->add_option("--lambda-step", lambda_step, "Lambda grid step");
    landscape_cmd->add_option("--mix-ratio", config.mix_ratio, "Inlier mixture ratio");

    auto* jump_cmd = app.add_subcommand("jump", "Detect the estimate jump in a sweep CSV");
    std::string sweep_file;
    std::uint64_t jump_seed = 0;
    jump_cmd->add_option("--sweep", sweep_file, "Sweep CSV produced by `sweep`")->required();
    jump_cmd->add_option("--seed", jump_seed, "Seed whose series to analyze");

    auto* theory_cmd = app.add_subcommand("theory", "Discrete-distribution theory tools");
    auto* tcut_cmd = theory_cmd->add_subcommand("tcut", "Cut-off threshold and minimizer");
    std::string q_arg;
    double tcut_beta = 0.0, tcut_tol = -1.0;
    tcut_cmd->add_option("--q", q_arg, "Probabilities: comma list or CSV file")->required();
    tcut_cmd->add_option("--beta", tcut_beta, "Beta")->required();
    tcut_cmd->add_option("--tol", tcut_tol, "Bisection tolerance (default 1e-12 T*)");

    auto* gibbs_cmd = app.add_subcommand("gibbs", "Alternating-maximization chains");
    auto* gibbs_run = gibbs_cmd->add_subcommand("run", "Run one chain on a preset");
    add_common(gibbs_run, false);
    int w0_size = 2, max_rounds = 100;
    gibbs_run->add_option("--w0-size", w0_size, "Random hypothetical-inlier set size");
    gibbs_run->add_option("--max-rounds", max_rounds, "Round limit");

    auto* synth_cmd = app.add_subcommand("synth", "Synthetic datasets");
    auto* synth_gen = synth_cmd->add_subcommand("gen", "Generate a preset dataset");
    add_common(synth_gen, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (seed_given) config.seeds = {single_seed};
        if (config.seeds.empty()) config.seeds = {0};

        if (fit_cmd->parsed()) {
            config.betas = betas.empty() ? std::vector<double>{5.0} : betas;
            const auto result = experiments::fit_run(config);
            experiments::write_fit_outputs(result, out);
            std::cout << "wrote " << (std::filesystem::path(out) / "comparison.csv").string()
                      << " (" << result.rows.size() << " rows, " << result.failures
                      << " failed)\n";
            return exit_code(result.failures);
        }
        if (sweep_cmd->parsed()) {
            config.betas = expand_grid(betas, grid_min, grid_max, grid_step);
            const auto result = experiments::beta_sweep(config);
            std::filesystem::path file = out;
            if (!file.has_extension()) file /= "sweep.csv";
            experiments::write_sweep_csv(result, file);
            std::cout << "wrote " << file.string() << " (" << result.cells.size()
                      << " cells, " << result.failures << " failed)\n";
            return exit_code(result.failures);
        }
        if (landscape_cmd->parsed()) {
            config.betas = betas.empty() ? std::vector<double>{5.0, 6.5, 8.0} : betas;
            config.preset = "exponential";
            config.lambda_grid.clear();
            for (double l = lambda_min; l <= lambda_max + 1e-12; l += lambda_step) {
                config.lambda_grid.push_back(l);
            }
            const auto result = experiments::landscape(config);
            std::filesystem::path file = out;
            if (!file.has_extension()) file /= "landscape.csv";
            experiments::write_landscape_csv(result, file);
            std::cout << "wrote " << file.string() << " (" << result.cells.size()
                      << " cells, " << result.failures << " failed)\n";
            return exit_code(result.failures);
        }
        if (jump_cmd->parsed()) {
            std::vector<double> grid, series;
            experiments::read_sweep_series(sweep_file, jump_seed, grid, series);
            const auto jump = experiments::detect_jump(grid, series);
            if (!jump.has_value()) {
                std::cout << "no jump detected\n";
                return 0;
            }
            nlohmann::json j{{"beta_c", jump->beta_c},
                             {"width", jump->width},
                             {"magnitude", jump->magnitude}};
            std::cout << j.dump() << '\n';
            return 0;
        }
        if (tcut_cmd->parsed()) {
            const theory::DiscreteDistribution q(parse_probs(q_arg));
            const auto sol = theory::solve_t_cut(q, tcut_beta, tcut_tol);
            nlohmann::json j{{"t_cut", sol.t_cut},
                             {"zeta", sol.zeta},
                             {"beta", sol.beta},
                             {"p", sol.p.probs()}};
            std::cout << j.dump() << '\n';
            return 0;
        }
        if (gibbs_run->parsed()) {
            const auto labeled =
                synth::generate(synth::preset_by_name(config.preset, config.seeds[0]));
            const LossModel model = models::by_name(config.preset);
            Rng rng(derive_seed(config.seeds[0], 77));
            std::vector<std::size_t> w0_idx;
            while (w0_idx.size() < static_cast<std::size_t>(w0_size)) {
                const std::size_t i = rng.uniform_index(labeled.data.size());
                if (std::find(w0_idx.begin(), w0_idx.end(), i) == w0_idx.end()) {
                    w0_idx.push_back(i);
                }
            }
            const double beta = betas.empty() ? 5.0 : betas[0];
            const auto trace = gibbs::alternate_maximize(
                model, labeled.data, beta,
                gibbs::SelectionVector::from_indices(labeled.data.size(), w0_idx),
                models::closed_form_subset_solver(model), max_rounds);
            std::filesystem::path file = out;
            if (!file.has_extension()) {
                std::filesystem::create_directories(file);
                file /= "trace.jsonl";
            } else if (file.has_parent_path()) {
                std::filesystem::create_directories(file.parent_path());
            }
            std::ofstream f(file);
            f << gibbs::trace_to_jsonl(trace);
            std::cout << "wrote " << file.string() << " (" << trace.iterations
                      << " rounds, converged=" << (trace.converged ? "yes" : "no") << ")\n";
            return 0;
        }
        if (synth_gen->parsed()) {
            const auto labeled =
                synth::generate(synth::preset_by_name(config.preset, config.seeds[0]));
            std::filesystem::path file = out;
            if (!file.has_extension()) {
                std::filesystem::create_directories(file);
                file /= config.preset + "_seed" + std::to_string(config.seeds[0]) + ".csv";
            } else if (file.has_parent_path()) {
                std::filesystem::create_directories(file.parent_path());
            }
            synth::save(labeled, file);
            std::cout << "wrote " << file.string() << " and sidecar metadata\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
