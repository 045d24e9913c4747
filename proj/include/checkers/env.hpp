#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "checkers/rules.hpp"

namespace checkers {

enum class RewardVariant : uint8_t { Sparse, SparseGoal, SparseMove, PositiveSum };

struct RewardScheme {
    RewardVariant variant = RewardVariant::PositiveSum;

    bool has_goal_bonus() const {
        return variant == RewardVariant::SparseGoal || variant == RewardVariant::PositiveSum;
    }
    bool has_move_bonus() const {
        return variant == RewardVariant::SparseMove || variant == RewardVariant::PositiveSum;
    }
    bool has_lose_penalty() const { return variant != RewardVariant::PositiveSum; }

    static float win_reward(int n) { return 5.0f * static_cast<float>(n); }
    static float lose_penalty(int n) { return -static_cast<float>(n); }
    static constexpr float kGoalBonus = 0.1f;
    static constexpr float kMoveBonus = 0.001f;
};

const char* reward_variant_name(RewardVariant v);
RewardVariant parse_reward_variant(const std::string& name);

struct StepResult {
    std::array<float, 6> rewards{};
    bool terminated = false;
    bool truncated = false;
    int next_agent = 0;
};

inline int observation_size(int n) {
    int dim = 4 * n + 1;
    return dim * dim * 8;
}
inline int action_space_size(int n) {
    int dim = 4 * n + 1;
    return dim * dim * 12 + 1;
}

// Action integer in the canonical (rotated) frame:
//   a = ((i*(4N+1) + j)*6 + dir)*2 + is_jump, with i = q+2N, j = r+2N.
// The final index encodes EndTurn.
int encode_action(int q, int r, int dir, bool is_jump, int n);
int encode_end_turn(int n);

struct DecodedAction {
    bool end_turn = false;
    int q = 0, r = 0, dir = 0;
    bool is_jump = false;
};
DecodedAction decode_action(int a, int n);

// Rotates every coordinate (pegs and jump context) so that player p's home
// triangle lands on the canonical top corner. Player ids are untouched.
GameState canonicalize(const GameState& s, int p);

// 8 binary layers over the (4N+1)^2 grid in player p's canonical frame:
// 0 = p's pegs, 1..5 = players p+1..p+5 clockwise, 6 = jump origins,
// 7 = the active jumping peg. Layers 6 and 7 describe the current turn's
// jump chain, so they are zero unless p is the player to move.
// Flat index = layer*(4N+1)^2 + i*(4N+1) + j.
std::vector<float> encode_observation(const GameState& s, int p);

// mask[a] = 1 iff a decodes to a legal submove in the current player's
// canonical frame.
std::vector<uint8_t> action_mask(const GameState& s);

// Per-player rewards for the transition before --apply(m)--> after.
std::array<float, 6> compute_rewards(const GameState& before, const Submove& m,
                                     const GameState& after, const RewardScheme& scheme);

// Decodes `a` in the current player's canonical frame, de-rotates it into the
// absolute frame, applies it, and computes rewards. Throws on illegal actions.
StepResult step(GameState& s, int a, const RewardScheme& scheme);

// Convenience bundle of a board, a reward scheme, and a resettable state.
class Env {
public:
    explicit Env(int n, RewardScheme scheme = {}, int turn_limit = -1);

    void reset(int starting_player = 0);
    const GameState& state() const { return state_; }
    GameState& state() { return state_; }
    const Board& board() const { return board_; }
    const RewardScheme& scheme() const { return scheme_; }

    bool running() const { return state_.status() == Status::Running; }
    int current() const { return state_.current(); }
    int turn_limit() const { return turn_limit_; }
    int obs_dim() const { return observation_size(board_.size()); }
    int act_dim() const { return action_space_size(board_.size()); }

    std::vector<float> observation() const { return encode_observation(state_, state_.current()); }
    std::vector<float> observation(int p) const { return encode_observation(state_, p); }
    std::vector<uint8_t> mask() const { return action_mask(state_); }
    StepResult step(int action) { return checkers::step(state_, action, scheme_); }

private:
    Board board_;
    RewardScheme scheme_;
    int turn_limit_;
    GameState state_;
};

}  // namespace checkers
