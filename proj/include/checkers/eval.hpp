#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "checkers/agents.hpp"

namespace checkers {

struct MatchOutcome {
    int winner = -1;  // seat, or -1 for truncation
    int total_turns = 0;
    std::array<int, 6> player_turns{};
    std::array<double, 6> reward_sum{};
};

// Plays one full game. The callback fires after every completed turn with the
// seat that finished and that seat's completed-turn count.
MatchOutcome play_game(
    const Board& board, const std::array<Agent*, 6>& agents, int turn_limit,
    const RewardScheme& scheme, Rng& rng,
    const std::function<void(const GameState&, int, int)>& on_turn_complete = nullptr);

struct GameRecord {
    uint64_t seed = 0;
    std::array<int8_t, 6> seats{};  // policy id per seat (-1 random)
    int winner = -1;
    int total_turns = 0;
    int eval_turns = 0;
};

struct EvalReport {
    int games = 0, wins = 0, truncations = 0;
    std::array<int, 6> wins_by_seat{};
    double win_rate_incl = 0;     // wins / games
    double win_rate_decided = 0;  // wins / (games - truncations), 0 when undecided
    std::vector<int> lengths;     // evaluated seat's completed turns per game
    double mean_length = 0;
    double mean_winning_length = -1;  // -1 when no game was won
    double mean_reward = 0;
    std::vector<GameRecord> records;
};

// One policy seat against five uniform-random agents. The evaluated seat
// rotates per game; for multi-head parameter sets the evaluated head cycles
// per game as well.
EvalReport evaluate_vs_random(const Board& board, const PolicySet<float>& params, int games,
                              int turn_limit, uint64_t seed, const RewardScheme& scheme = {},
                              bool deterministic = false);

struct HeadToHeadReport {
    int games = 0, truncations = 0;
    std::array<int, 3> wins{};
    std::array<double, 3> win_share{};
    std::vector<GameRecord> records;
};

// Three parameter sets, two seats each, seat assignment shuffled per game.
// Truncated games are nobody's win.
HeadToHeadReport head_to_head(const Board& board, const std::array<const PolicySet<float>*, 3>& archs,
                              int games, int turn_limit, uint64_t seed,
                              const RewardScheme& scheme = {}, bool deterministic = false);

struct HeatmapGrid {
    int n = 2;
    int games = 0;
    std::vector<int> snapshot_turns;
    std::vector<std::vector<int64_t>> counts;  // per snapshot, (4N+1)^2 grid, i*(4N+1)+j
};

// Peg-location frequencies for the evaluated policy against five random
// agents, snapshotted in the evaluated player's canonical frame right after
// it completes turn t (final state if the game ended earlier).
HeatmapGrid collect_heatmaps(const Board& board, const PolicySet<float>& params, int games,
                             const std::vector<int>& snapshot_turns, int turn_limit,
                             uint64_t seed, const RewardScheme& scheme = {},
                             bool deterministic = false);

int64_t mass_in_target(const Board& board, const HeatmapGrid& grid, int snapshot_idx);

void write_eval_report(const std::string& path, const EvalReport& report);
void write_h2h_report(const std::string& path, const HeadToHeadReport& report,
                      const std::array<std::string, 3>& labels);
void write_heatmaps(const std::string& path, const HeatmapGrid& grid);

}  // namespace checkers
