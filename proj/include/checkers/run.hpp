#pragma once

#include <string>
#include <vector>

#include "checkers/eval.hpp"
#include "checkers/ppo.hpp"

namespace checkers {

// A full training run: PPO self-play plus a per-iteration evaluation against
// random opponents, all written under one output directory:
//   config.ini       effective configuration
//   checkpoints/     iter_0000.ckpt ... (initial params, then per cadence)
//   metrics.log      one row per training iteration
//   eval/summary.tsv one row per evaluation
//   DONE             written when the final iteration finishes
struct RunOptions {
    Trainer::Options trainer;
    int eval_games = 30;
    int eval_turn_limit = 150;
    bool eval_deterministic = false;
};

std::string describe_config(const RunOptions& opt);

// Executes the run, resuming from the latest checkpoint when one exists.
// Returns false if the directory already holds a completed identical run
// (nothing to do), true if it trained.
bool run_training(const RunOptions& opt);

struct EvalSummaryRow {
    int iteration = 0;
    int64_t env_steps = 0;
    int games = 0, wins = 0, truncations = 0;
    double win_rate_incl = 0, win_rate_decided = 0;
    double mean_length = 0, mean_winning_length = -1, mean_reward = 0;
};

std::vector<EvalSummaryRow> read_eval_summary(const std::string& path);

void append_eval_summary(const std::string& path, int iteration, int64_t env_steps,
                         const EvalReport& rep);

}  // namespace checkers
