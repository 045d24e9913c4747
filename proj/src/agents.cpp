#include "checkers/agents.hpp"

namespace checkers {

int random_action(const GameState& s, Rng& rng) {
    std::vector<uint8_t> mask = action_mask(s);
    int legal = 0;
    for (uint8_t b : mask) legal += b;
    int pick = rng.uniform_int(legal);
    for (size_t a = 0; a < mask.size(); ++a) {
        if (!mask[a]) continue;
        if (pick-- == 0) return static_cast<int>(a);
    }
    return -1;
}

int RandomAgent::act(const GameState& s, Rng& rng) { return random_action(s, rng); }

int greedy_action(const GameState& s) {
    const Board& b = s.board();
    const int n = b.size(), p = s.current();
    GameState cs = s.rotated((6 - p) % 6);

    bool has_goal = false;
    Hex goal{};
    for (const Hex& h : b.target_cells(0)) {
        if (cs.owner(b.cell_index(h)) == p) continue;
        if (!has_goal || h.r > goal.r || (h.r == goal.r && h.q < goal.q)) {
            goal = h;
            has_goal = true;
        }
    }

    auto subs = cs.legal_submoves();
    bool can_end = false;
    int best_jump = -1;
    int best_move = -1;
    int best_dist = 0;
    auto consider_move = [&](const Submove& m, bool allow_parked) {
        const Hex src = b.cell(m.cell);
        if (!allow_parked && b.is_target(0, m.cell) && src.r >= goal.r) return;
        const Hex dst = src + kDirections[m.dir];
        int dist = hex_distance(dst, goal);
        int idx = encode_action(src.q, src.r, m.dir, false, n);
        if (best_move < 0 || dist < best_dist || (dist == best_dist && idx < best_move)) {
            best_move = idx;
            best_dist = dist;
        }
    };
    for (const Submove& m : subs) {
        switch (m.kind) {
            case SubmoveKind::EndTurn:
                can_end = true;
                break;
            case SubmoveKind::Jump: {
                const Hex src = b.cell(m.cell);
                int idx = encode_action(src.q, src.r, m.dir, true, n);
                if (best_jump < 0 || idx < best_jump) best_jump = idx;
                break;
            }
            case SubmoveKind::Move:
                if (has_goal) consider_move(m, false);
                break;
        }
    }
    if (has_goal && best_move < 0)
        for (const Submove& m : subs)
            if (m.kind == SubmoveKind::Move) consider_move(m, true);

    if (best_move >= 0) return best_move;
    if (can_end) return encode_end_turn(n);
    return best_jump;
}

int GreedyForwardAgent::act(const GameState& s, Rng&) { return greedy_action(s); }

int PolicyAgent::act(const GameState& s, Rng& rng) {
    std::vector<float> obs = encode_observation(s, s.current());
    std::vector<uint8_t> mask = action_mask(s);
    Vec<float> logits;
    float value;
    policy_forward(*params_, route_, obs, logits, value);
    auto dist = MaskedCategorical<float>::make(logits, mask);
    return deterministic_ ? dist.argmax() : dist.sample(rng);
}

}  // namespace checkers
