#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.h"
#include "metrics.h"
#include "population_io.h"
#include "trainer.h"
#include "weights_io.h"

namespace fs = std::filesystem;
using namespace pbtzero;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;
constexpr int kExitIncompatible = 3;

struct TrainArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string seed;
    bool resume = false;
};

void add_train_options(CLI::App* cmd, TrainArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value lines)");
    cmd->add_option("--set", args.overrides, "override a config key, e.g. --set iterations=10")
        ->take_all();
    cmd->add_option("--seed", args.seed, "master seed (same as --set seed=...)");
    cmd->add_flag("--resume", args.resume, "continue from the newest checkpoint in run_dir");
    cmd->footer(config_help_text());
}

TrainConfig load_train_config(const TrainArgs& args, const std::string& mode) {
    std::vector<std::string> overrides = args.overrides;
    for (const auto& o : overrides) {
        if (o.rfind("mode", 0) == 0 && o.find('=') != std::string::npos &&
            o.substr(0, o.find('=')).find_first_not_of("mode \t") == std::string::npos) {
            throw ConfigError("mode is chosen by the subcommand, not --set");
        }
    }
    if (!args.seed.empty()) overrides.push_back("seed=" + args.seed);
    overrides.push_back("mode=" + mode);
    if (args.config_path.empty()) return parse_config_text("", overrides);
    return load_config_file(args.config_path, overrides);
}

int run_training(const TrainArgs& args, const std::string& mode) {
    const TrainConfig cfg = load_train_config(args, mode);
    Trainer trainer = args.resume ? Trainer::resume(cfg) : Trainer(cfg);
    trainer.run(std::cout);
    std::cout << "done: " << cfg.run_dir << "\n";
    return kExitOk;
}

int run_inspect(const std::string& path) {
    if (fs::is_regular_file(path)) {
        const Network net = load_weights(path);
        const auto& cfg = net.config();
        std::cout << path << ": weight checkpoint v" << kWeightsFormatVersion << "\n"
                  << "  board " << cfg.board_size << "x" << cfg.board_size << ", "
                  << cfg.residual_blocks << " blocks, " << cfg.filters << " filters\n"
                  << "  value head: "
                  << (cfg.value_head == ValueHeadKind::Single ? "single" : "multi-komi");
        if (!cfg.komi_values.empty()) {
            std::cout << " (";
            for (size_t i = 0; i < cfg.komi_values.size(); ++i) {
                if (i) std::cout << ",";
                std::cout << format_double(cfg.komi_values[i]);
            }
            std::cout << ")";
        }
        std::cout << "\n  parameters: " << net.parameter_count() << "\n";
        return kExitOk;
    }
    std::string dir = path;
    if (fs::is_directory(dir) && !fs::exists(fs::path(dir) / "population.meta")) {
        const auto latest = latest_checkpoint_iteration(dir);
        if (!latest) throw CheckpointError("no checkpoints under " + dir);
        std::cout << dir << ": run with checkpoints up to iteration " << *latest << "\n";
        dir = iteration_dir(dir, *latest);
    }
    const LoadedPopulation loaded = load_population(dir);
    std::cout << dir << ": population checkpoint v" << kPopulationFormatVersion << "\n"
              << "  iteration " << loaded.state.iteration << ", " << loaded.state.slots.size()
              << " agents, board " << loaded.board.board_size << "x" << loaded.board.board_size
              << " komi " << format_double(loaded.board.komi) << "\n";
    if (!loaded.state.last_ranking.empty()) {
        std::cout << "  ranking:";
        for (int id : loaded.state.last_ranking) std::cout << " " << id;
        std::cout << "\n";
    }
    for (const auto& slot : loaded.state.slots) {
        std::cout << "  agent " << slot.agent_id << ": lr "
                  << format_double(slot.hp.learning_rate) << ", x "
                  << format_double(slot.hp.value_loss_ratio) << ", " << slot.lineage.size()
                  << " lineage events, " << slot.net.parameter_count() << " parameters\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AlphaZero-style training with population based hyperparameter adaptation"};
    app.require_subcommand(1);

    TrainArgs train_args, baseline_args, ablation_args;
    std::string ablation_variant;

    CLI::App* train = app.add_subcommand("train", "train a population with exploit/explore");
    add_train_options(train, train_args);

    CLI::App* baseline =
        app.add_subcommand("baseline", "train a single agent with a fixed lr schedule");
    add_train_options(baseline, baseline_args);

    CLI::App* ablation = app.add_subcommand("ablation", "population training with PBT disabled");
    add_train_options(ablation, ablation_args);
    ablation->add_option("--variant", ablation_variant, "replace-only | neither")->required();

    CLI::App* tournament =
        app.add_subcommand("tournament", "cross-run round robin over saved checkpoints");
    std::vector<std::string> run_dirs;
    int every = 5, games = 100, opening_moves = 4, threads = 0;
    std::string out_path = "tournament.csv";
    std::string tourn_seed = "1";
    tournament->add_option("runs", run_dirs, "two or more run directories")->required();
    tournament->add_option("--every", every, "sample checkpoints every N iterations");
    tournament->add_option("--games", games, "games per matchup (even)");
    tournament->add_option("--opening-moves", opening_moves,
                           "opening moves sampled from the visit distribution");
    tournament->add_option("--out", out_path, "output CSV");
    tournament->add_option("--seed", tourn_seed, "match seed");
    tournament->add_option("--threads", threads, "worker threads; 0 = all");

    CLI::App* export_cmd = app.add_subcommand("export", "re-emit a run's metrics stream");
    std::string export_run, export_format = "csv", export_out;
    export_cmd->add_option("--run", export_run, "run directory")->required();
    export_cmd->add_option("--format", export_format, "csv | jsonl");
    export_cmd->add_option("--out", export_out, "output file")->required();

    CLI::App* inspect = app.add_subcommand("inspect", "describe a checkpoint or run directory");
    std::string inspect_path;
    inspect->add_option("path", inspect_path, "run dir, iteration dir or .ckpt file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return run_training(train_args, "pbt");
        if (baseline->parsed()) return run_training(baseline_args, "baseline");
        if (ablation->parsed()) {
            if (ablation_variant == "replace-only")
                return run_training(ablation_args, "ablation-replace-only");
            if (ablation_variant == "neither")
                return run_training(ablation_args, "ablation-neither");
            throw ConfigError("unknown ablation variant '" + ablation_variant +
                              "' (expected replace-only or neither)");
        }
        if (tournament->parsed()) {
            if (run_dirs.size() < 2) throw ConfigError("tournament needs at least two runs");
            if (games < 2 || games % 2 != 0) throw ConfigError("--games must be even");
            int resolved = threads;
            if (resolved <= 0) {
                const unsigned hw = std::thread::hardware_concurrency();
                resolved = hw == 0 ? 1 : static_cast<int>(hw);
            }
            const CrossRunTable table = cross_run_tournament(
                run_dirs, every, games, opening_moves,
                static_cast<uint64_t>(std::stoull(tourn_seed)), resolved);
            write_cross_run_csv(table, out_path);
            std::cout << "wrote " << out_path << " (" << table.rows.size() << " rows)\n";
            return kExitOk;
        }
        if (export_cmd->parsed()) {
            ExportFormat fmt;
            if (export_format == "csv")
                fmt = ExportFormat::Csv;
            else if (export_format == "jsonl")
                fmt = ExportFormat::JsonLines;
            else
                throw ConfigError("unknown export format '" + export_format + "'");
            export_metrics(export_run, fmt, export_out);
            std::cout << "wrote " << export_out << "\n";
            return kExitOk;
        }
        if (inspect->parsed()) return run_inspect(inspect_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return kExitIncompatible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitRuntimeError;
}
