#include "trainer.h"

#include <algorithm>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include "gradient.h"
#include "net_evaluator.h"
#include "selfplay.h"
#include "sgf.h"
#include "tournament.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;

namespace pbtzero {

namespace {

// Phase tags mixed into per-iteration seeds so every phase, pair, game and
// agent gets an independent deterministic stream.
constexpr uint64_t kPhasePairings = 1;
constexpr uint64_t kPhaseSelfplay = 2;
constexpr uint64_t kPhaseOptimize = 3;
constexpr uint64_t kPhasePbt = 4;

PopulationState make_initial_population(const TrainConfig& cfg) {
    PopulationState state;
    state.iteration = 0;
    state.master_rng = Rng(cfg.seed);
    const int p = cfg.effective_population();
    for (int i = 0; i < p; ++i) {
        Network net = Network::init(cfg.net, mix_seed(cfg.seed, 0xa11ce0ULL, i));
        state.slots.emplace_back(i, std::move(net), cfg.initial_hp_for_agent(i));
    }
    return state;
}

void dump_sgf(const TrainConfig& cfg, int64_t iteration, int pair_index,
              const std::vector<GameRecord>& records) {
    if (cfg.sgf_dir.empty()) return;
    const fs::path dir = fs::path(cfg.sgf_dir) / ("iter_" + std::to_string(iteration));
    fs::create_directories(dir);
    for (size_t g = 0; g < records.size(); ++g) {
        const auto& rec = records[g];
        std::ofstream out(dir / ("pair" + std::to_string(pair_index) + "_game" +
                                 std::to_string(g) + ".sgf"));
        out << to_sgf(cfg.board, rec.moves, rec.result,
                      "agent_" + std::to_string(rec.black_agent),
                      "agent_" + std::to_string(rec.white_agent));
    }
}

// Drops rows of iterations newer than `iteration` (partial work from an
// interrupted run) so a resumed run appends a consistent stream.
void truncate_stream_after(const std::string& path, int64_t iteration, bool lineage) {
    if (!fs::exists(path)) return;
    std::ifstream in(path);
    std::vector<std::string> keep;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!lineage && first) {
            keep.push_back(line);  // header
            first = false;
            continue;
        }
        int64_t it = -1;
        if (lineage) {
            if (line.rfind("iter=", 0) == 0) it = std::atoll(line.c_str() + 5);
        } else {
            it = std::atoll(line.c_str());
        }
        if (it >= 0 && it <= iteration) keep.push_back(line);
    }
    in.close();
    std::ofstream out(path, std::ios::trunc);
    for (const auto& l : keep) out << l << "\n";
}

}  // namespace

Trainer::Trainer(const TrainConfig& config)
    : cfg_(config), state_(make_initial_population(config)), buffer_(config.replay_window) {}

Trainer::Trainer(const TrainConfig& config, PopulationState state, ReplayBuffer buffer)
    : cfg_(config), state_(std::move(state)), buffer_(std::move(buffer)) {}

Trainer Trainer::resume(const TrainConfig& config) {
    const auto latest = latest_checkpoint_iteration(config.run_dir);
    if (!latest) throw CheckpointError("no checkpoint found under " + config.run_dir);
    LoadedPopulation loaded = load_population(iteration_dir(config.run_dir, *latest));
    if (!(loaded.board.board_size == config.board.board_size &&
          loaded.board.komi == config.board.komi &&
          loaded.board.superko == config.board.superko)) {
        throw CheckpointError("checkpoint board settings do not match the config");
    }
    if (loaded.search.simulations != config.search.simulations ||
        loaded.search.c_puct != config.search.c_puct ||
        loaded.search.dirichlet_alpha != config.search.dirichlet_alpha ||
        loaded.search.dirichlet_epsilon != config.search.dirichlet_epsilon ||
        loaded.search.temperature_moves != config.search.temperature_moves) {
        throw CheckpointError("checkpoint search settings do not match the config");
    }
    for (const auto& slot : loaded.state.slots) {
        if (!(slot.net.config() == config.net)) {
            throw CheckpointError("checkpoint network architecture does not match the config");
        }
    }
    ReplayBuffer buffer =
        load_replay_window(config.run_dir, loaded.state.iteration, config.replay_window);
    truncate_stream_after((fs::path(config.run_dir) / "metrics.csv").string(),
                          loaded.state.iteration, false);
    truncate_stream_after((fs::path(config.run_dir) / "lineage.log").string(),
                          loaded.state.iteration, true);
    return Trainer(config, std::move(loaded.state), std::move(buffer));
}

IterationReport Trainer::run_iteration() {
    const PopulationState snapshot = state_;
    bool buffer_appended = false;
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const int64_t iteration = state_.iteration + 1;
        const uint64_t iter_seed = state_.master_rng.next_u64();
        state_.iteration = iteration;
        const int threads = cfg_.resolved_threads();
        const int p = static_cast<int>(state_.slots.size());
        const bool baseline = cfg_.mode == RunMode::Baseline;

        IterationReport report;
        report.iteration = iteration;

        // ---- phase 1: self-play into the shared buffer ----
        std::vector<std::pair<int, int>> pairs;
        if (baseline) {
            pairs.emplace_back(state_.slots[0].agent_id, state_.slots[0].agent_id);
        } else {
            Rng pair_rng(mix_seed(iter_seed, kPhasePairings));
            pairs = make_pairings(state_.agent_ids(), pair_rng).pairs;
        }
        const std::vector<int> counts =
            plan_pair_game_counts(cfg_.games_per_iteration, static_cast<int>(pairs.size()));

        std::vector<TrainingExample> fresh;
        for (size_t pi = 0; pi < pairs.size(); ++pi) {
            const auto [ida, idb] = pairs[pi];
            NetworkEvaluator eval_a(state_.slot_by_id(ida).net, cfg_.board.komi);
            NetworkEvaluator eval_b(state_.slot_by_id(idb).net, cfg_.board.komi);
            Rng pair_rng(mix_seed(iter_seed, kPhaseSelfplay, pi));
            const std::vector<GameRecord> records =
                play_pair_games(eval_a, eval_b, ida, idb, counts[pi], cfg_.search, cfg_.board,
                                pair_rng, threads);
            dump_sgf(cfg_, iteration, static_cast<int>(pi), records);
            for (const auto& rec : records) {
                auto examples = to_examples(rec, cfg_.board, cfg_.net, iteration);
                fresh.insert(fresh.end(), std::make_move_iterator(examples.begin()),
                             std::make_move_iterator(examples.end()));
            }
        }
        const size_t fresh_count = fresh.size();
        buffer_.append_iteration(iteration, std::move(fresh));
        buffer_appended = true;

        // ---- phase 2: every agent optimizes on the shared buffer ----
        const int steps = cfg_.steps_per_iteration > 0
                              ? cfg_.steps_per_iteration
                              : std::max<int>(1, static_cast<int>((fresh_count + cfg_.batch_size -
                                                                   1) /
                                                                  cfg_.batch_size));
        report.agents.resize(p);
        std::vector<std::exception_ptr> agent_errors(p);
        const int agent_threads = p > 1 ? std::min(p, threads) : 1;
        const int step_threads = p > 1 ? 1 : threads;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(agent_threads)
#endif
        for (int i = 0; i < p; ++i) {
            try {
                AgentSlot& slot = state_.slots[i];
                Hyperparams hp = slot.hp;
                if (baseline && !cfg_.lr_schedule.empty()) {
                    hp.learning_rate = cfg_.lr_schedule.rate_at(static_cast<int>(iteration));
                    slot.hp.learning_rate = hp.learning_rate;
                }
                Rng opt_rng(mix_seed(iter_seed, kPhaseOptimize, slot.agent_id));
                LossBreakdown mean;
                for (int s = 0; s < steps; ++s) {
                    const auto batch = buffer_.sample_batch(cfg_.batch_size, opt_rng);
                    const LossBreakdown bd = train_step(slot.net, batch, hp, step_threads);
                    mean.value_term += bd.value_term;
                    mean.policy_term += bd.policy_term;
                    mean.reg_term += bd.reg_term;
                    mean.total += bd.total;
                }
                mean.value_term /= steps;
                mean.policy_term /= steps;
                mean.reg_term /= steps;
                mean.total /= steps;
                auto& row = report.agents[i];
                row.agent_id = slot.agent_id;
                row.learning_rate = hp.learning_rate;
                row.value_loss_ratio = hp.value_loss_ratio;
                row.loss = mean;
            } catch (...) {
                agent_errors[i] = std::current_exception();
            }
        }
        for (const auto& err : agent_errors) {
            if (err) std::rethrow_exception(err);
        }

        // ---- phase 3: round-robin evaluation ----
        if (!baseline) {
            std::vector<NetworkEvaluator> evals;
            evals.reserve(p);
            std::vector<const Evaluator*> eval_ptrs;
            std::vector<int> ids;
            for (const auto& slot : state_.slots) {
                evals.emplace_back(slot.net, cfg_.board.komi);
                ids.push_back(slot.agent_id);
            }
            for (const auto& e : evals) eval_ptrs.push_back(&e);
            const TournamentResult tr =
                run_round_robin(eval_ptrs, ids, cfg_.search, cfg_.board,
                                cfg_.eval_games_per_pairing, threads);
            state_.last_ranking = tr.ranking;
            for (int i = 0; i < p; ++i) report.agents[i].eval_win_rate = tr.win_rate[i];
        }

        // ---- phase 4: exploit / explore ----
        if (cfg_.mode == RunMode::Pbt || cfg_.mode == RunMode::AblationReplaceOnly) {
            report.replaced_ids = exploit(state_, state_.last_ranking);
            if (cfg_.mode == RunMode::Pbt) {
                Rng pbt_rng(mix_seed(iter_seed, kPhasePbt));
                explore(state_, report.replaced_ids, cfg_.bounds, pbt_rng);
            }
        }

        report.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return report;
    } catch (...) {
        state_ = snapshot;
        if (buffer_appended) buffer_.drop_last_iteration();
        throw;
    }
}

void Trainer::persist_iteration(const IterationReport& report) {
    const std::string dir = iteration_dir(cfg_.run_dir, state_.iteration);
    save_population(state_, cfg_.board, cfg_.search, dir);
    if (!buffer_.groups().empty() && buffer_.groups().back().iteration == state_.iteration) {
        save_replay_group(buffer_.groups().back().examples, state_.iteration,
                          (fs::path(dir) / "replay.bin").string());
    }
    append_metrics(cfg_.run_dir, report, state_);
}

void Trainer::run(std::ostream& log) {
    init_metrics(cfg_.run_dir);
    {
        std::ofstream cfg_echo(fs::path(cfg_.run_dir) / "config.cfg");
        cfg_echo << config_to_text(cfg_);
    }
    if (state_.iteration == 0) {
        save_population(state_, cfg_.board, cfg_.search,
                        iteration_dir(cfg_.run_dir, 0));
    }
    while (state_.iteration < cfg_.iterations) {
        const IterationReport report = run_iteration();
        persist_iteration(report);
        double mean_lr = 0, mean_x = 0;
        for (const auto& row : report.agents) {
            mean_lr += row.learning_rate;
            mean_x += row.value_loss_ratio;
        }
        mean_lr /= report.agents.size();
        mean_x /= report.agents.size();
        log << "iteration " << report.iteration << "/" << cfg_.iterations << "  mean lr "
            << format_double(mean_lr) << "  mean x " << format_double(mean_x) << "  replaced "
            << report.replaced_ids.size() << "  wall " << static_cast<int>(report.wall_time_s)
            << "s\n"
            << std::flush;
    }
}

double CrossRunTable::min_rate(int64_t iteration, int run) const {
    double best = 2.0;
    for (const auto& row : rows) {
        if (row.iteration == iteration && row.run == run) best = std::min(best, row.win_rate);
    }
    return best;
}

double CrossRunTable::avg_rate(int64_t iteration, int run) const {
    double sum = 0;
    int count = 0;
    for (const auto& row : rows) {
        if (row.iteration == iteration && row.run == run) {
            sum += row.win_rate;
            ++count;
        }
    }
    return count ? sum / count : 0.0;
}

CrossRunTable cross_run_tournament(const std::vector<std::string>& run_dirs, int every,
                                   int games_per_matchup, int opening_temperature_moves,
                                   uint64_t seed, int threads) {
    if (run_dirs.size() < 2)
        throw std::invalid_argument("cross-run tournament needs at least two runs");
    if (every < 1) throw std::invalid_argument("sampling interval must be >= 1");
    if (games_per_matchup < 2 || games_per_matchup % 2 != 0)
        throw std::invalid_argument("games per matchup must be even and positive");

    // iterations present in every run
    std::set<int64_t> common;
    for (size_t r = 0; r < run_dirs.size(); ++r) {
        std::set<int64_t> here;
        const auto latest = latest_checkpoint_iteration(run_dirs[r]);
        if (!latest) throw CheckpointError("no checkpoints under " + run_dirs[r]);
        for (int64_t it = every; it <= *latest; it += every) {
            if (fs::exists(fs::path(iteration_dir(run_dirs[r], it)) / "population.meta")) {
                here.insert(it);
            }
        }
        if (r == 0) {
            common = here;
        } else {
            std::set<int64_t> merged;
            for (int64_t it : common) {
                if (here.count(it)) merged.insert(it);
            }
            common = merged;
        }
    }
    if (common.empty())
        throw CheckpointError("runs share no checkpoint iterations at the sampling interval");

    CrossRunTable table;
    table.run_dirs = run_dirs;
    table.games_per_matchup = games_per_matchup;

    for (int64_t iteration : common) {
        struct Rep {
            Network net;
            SearchConfig search;
        };
        std::vector<Rep> reps;
        BoardConfig board;
        for (size_t r = 0; r < run_dirs.size(); ++r) {
            LoadedPopulation loaded = load_population(iteration_dir(run_dirs[r], iteration));
            if (r == 0) {
                board = loaded.board;
            } else if (loaded.board.board_size != board.board_size ||
                       loaded.board.komi != board.komi ||
                       loaded.board.superko != board.superko) {
                throw CheckpointError("run " + run_dirs[r] +
                                      " uses different board settings; checkpoints are "
                                      "incompatible");
            }
            const int top_id = loaded.state.last_ranking.empty()
                                   ? loaded.state.slots.front().agent_id
                                   : loaded.state.last_ranking.front();
            reps.push_back(Rep{loaded.state.slot_by_id(top_id).net, loaded.search});
        }

        for (size_t i = 0; i < reps.size(); ++i) {
            for (size_t j = i + 1; j < reps.size(); ++j) {
                NetworkEvaluator ei(reps[i].net, board.komi);
                NetworkEvaluator ej(reps[j].net, board.komi);
                MctsPlayer pi_player(ei, reps[i].search, opening_temperature_moves);
                MctsPlayer pj_player(ej, reps[j].search, opening_temperature_moves);
                MatchOptions opts;
                opts.games = games_per_matchup;
                opts.opening_temperature_moves = opening_temperature_moves;
                opts.seed = mix_seed(seed, static_cast<uint64_t>(iteration), i, j);
                opts.threads = threads;
                const MatchOutcome outcome = play_match(pi_player, pj_player, board, opts);
                table.rows.push_back({iteration, static_cast<int>(i), static_cast<int>(j),
                                      outcome.score_a()});
                table.rows.push_back({iteration, static_cast<int>(j), static_cast<int>(i),
                                      1.0 - outcome.score_a()});
            }
        }
    }
    return table;
}

void write_cross_run_csv(const CrossRunTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "iteration,run,opponent,win_rate,min_win_rate,avg_win_rate\n";
    for (const auto& row : table.rows) {
        out << row.iteration << ',' << table.run_dirs[row.run] << ','
            << table.run_dirs[row.opponent] << ',' << format_double(row.win_rate) << ','
            << format_double(table.min_rate(row.iteration, row.run)) << ','
            << format_double(table.avg_rate(row.iteration, row.run)) << "\n";
    }
}

}  // namespace pbtzero
