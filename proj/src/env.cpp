#include "checkers/env.hpp"

#include <stdexcept>

namespace checkers {

const char* reward_variant_name(RewardVariant v) {
    switch (v) {
        case RewardVariant::Sparse: return "sparse";
        case RewardVariant::SparseGoal: return "sparse-goal";
        case RewardVariant::SparseMove: return "sparse-move";
        case RewardVariant::PositiveSum: return "positive-sum";
    }
    return "?";
}

RewardVariant parse_reward_variant(const std::string& name) {
    if (name == "sparse") return RewardVariant::Sparse;
    if (name == "sparse-goal") return RewardVariant::SparseGoal;
    if (name == "sparse-move") return RewardVariant::SparseMove;
    if (name == "positive-sum") return RewardVariant::PositiveSum;
    throw std::invalid_argument("unknown reward scheme: " + name);
}

int encode_action(int q, int r, int dir, bool is_jump, int n) {
    int dim = 4 * n + 1;
    int i = q + 2 * n, j = r + 2 * n;
    if (i < 0 || j < 0 || i >= dim || j >= dim)
        throw std::out_of_range("action coordinates outside the grid");
    if (dir < 0 || dir > 5) throw std::out_of_range("direction out of range");
    return ((i * dim + j) * 6 + dir) * 2 + (is_jump ? 1 : 0);
}

int encode_end_turn(int n) { return action_space_size(n) - 1; }

DecodedAction decode_action(int a, int n) {
    if (a < 0 || a >= action_space_size(n))
        throw std::out_of_range("action index out of range");
    DecodedAction d;
    if (a == encode_end_turn(n)) {
        d.end_turn = true;
        return d;
    }
    int dim = 4 * n + 1;
    d.is_jump = (a & 1) != 0;
    a >>= 1;
    d.dir = a % 6;
    a /= 6;
    d.q = a / dim - 2 * n;
    d.r = a % dim - 2 * n;
    return d;
}

GameState canonicalize(const GameState& s, int p) { return s.rotated((6 - p) % 6); }

std::vector<float> encode_observation(const GameState& s, int p) {
    const Board& b = s.board();
    int dim = b.grid_dim(), plane = dim * dim;
    int k = (6 - p) % 6;
    std::vector<float> out(static_cast<size_t>(plane) * 8, 0.0f);
    for (int c = 0; c < b.cell_count(); ++c) {
        int o = s.owner(c);
        if (o < 0) continue;
        auto [i, j] = b.grid_coords(b.cell(b.rotated_index(c, k)));
        int layer = (o - p + 6) % 6;
        out[static_cast<size_t>(layer) * plane + i * dim + j] = 1.0f;
    }
    if (p == s.current()) {
        for (int c : s.jump_origins()) {
            auto [i, j] = b.grid_coords(b.cell(b.rotated_index(c, k)));
            out[static_cast<size_t>(6) * plane + i * dim + j] = 1.0f;
        }
        if (s.active_peg() >= 0) {
            auto [i, j] = b.grid_coords(b.cell(b.rotated_index(s.active_peg(), k)));
            out[static_cast<size_t>(7) * plane + i * dim + j] = 1.0f;
        }
    }
    return out;
}

std::vector<uint8_t> action_mask(const GameState& s) {
    const Board& b = s.board();
    int n = b.size(), p = s.current(), k = (6 - p) % 6;
    std::vector<uint8_t> mask(action_space_size(n), 0);
    for (const Submove& m : s.legal_submoves()) {
        if (m.kind == SubmoveKind::EndTurn) {
            mask[encode_end_turn(n)] = 1;
            continue;
        }
        const Hex& h = b.cell(b.rotated_index(m.cell, k));
        int dir = (m.dir + p) % 6;
        mask[encode_action(h.q, h.r, dir, m.kind == SubmoveKind::Jump, n)] = 1;
    }
    return mask;
}

std::array<float, 6> compute_rewards(const GameState& before, const Submove& m,
                                     const GameState& after, const RewardScheme& scheme) {
    const Board& b = before.board();
    int n = b.size(), mover = before.current();
    std::array<float, 6> rewards{};
    if (m.kind != SubmoveKind::EndTurn) {
        int dst = m.kind == SubmoveKind::Move ? b.neighbor(m.cell, m.dir)
                                              : b.neighbor2(m.cell, m.dir);
        if (scheme.has_goal_bonus()) {
            bool was_in = b.is_target(mover, m.cell);
            bool now_in = b.is_target(mover, dst);
            if (now_in && !was_in) rewards[mover] += RewardScheme::kGoalBonus;
            if (was_in && !now_in) rewards[mover] -= RewardScheme::kGoalBonus;
        }
        if (scheme.has_move_bonus()) {
            int kr = (6 - mover) % 6;
            int dr = rotate60cw(b.cell(dst), kr).r - rotate60cw(b.cell(m.cell), kr).r;
            if (dr > 0) rewards[mover] += RewardScheme::kMoveBonus;
            if (dr < 0) rewards[mover] -= RewardScheme::kMoveBonus;
        }
    }
    if (after.status() == Status::Won) {
        rewards[after.winner()] += RewardScheme::win_reward(n);
        if (scheme.has_lose_penalty())
            for (int p = 0; p < 6; ++p)
                if (p != after.winner()) rewards[p] += RewardScheme::lose_penalty(n);
    }
    return rewards;
}

StepResult step(GameState& s, int a, const RewardScheme& scheme) {
    const Board& b = s.board();
    int p = s.current();
    DecodedAction d = decode_action(a, b.size());
    Submove m;
    if (!d.end_turn) {
        Hex abs = rotate60cw(Hex{d.q, d.r}, p);
        int cell = b.cell_index(abs);
        int dir = (d.dir - p + 6) % 6;
        if (cell < 0) throw std::invalid_argument("illegal action: cell off board");
        m = d.is_jump ? Submove::jump(cell, dir) : Submove::move(cell, dir);
    }
    GameState before = s;
    s.apply(m);
    StepResult res;
    res.rewards = compute_rewards(before, m, s, scheme);
    res.terminated = s.status() == Status::Won;
    res.truncated = s.status() == Status::Truncated;
    res.next_agent = s.current();
    return res;
}

Env::Env(int n, RewardScheme scheme, int turn_limit)
    : board_(n),
      scheme_(scheme),
      turn_limit_(turn_limit > 0 ? turn_limit : default_turn_limit(n)),
      state_(board_, turn_limit_) {}

void Env::reset(int starting_player) { state_ = GameState(board_, turn_limit_, starting_player); }

}  // namespace checkers
