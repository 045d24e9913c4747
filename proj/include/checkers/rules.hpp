#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "checkers/hexgrid.hpp"

namespace checkers {

enum class SubmoveKind : uint8_t { Move, Jump, EndTurn };

// A single action: step to an adjacent cell, jump over an occupied neighbor,
// or end the turn. cell/dir are meaningless for EndTurn.
struct Submove {
    SubmoveKind kind = SubmoveKind::EndTurn;
    int cell = -1;
    int dir = 0;

    static Submove move(int cell, int dir) { return {SubmoveKind::Move, cell, dir}; }
    static Submove jump(int cell, int dir) { return {SubmoveKind::Jump, cell, dir}; }
    static Submove end_turn() { return {SubmoveKind::EndTurn, -1, 0}; }

    bool operator==(const Submove& o) const {
        if (kind != o.kind) return false;
        if (kind == SubmoveKind::EndTurn) return true;
        return cell == o.cell && dir == o.dir;
    }
};

enum class Status : uint8_t { Running, Won, Truncated };

// Full game state. Copyable value; apply() mutates in place.
class GameState {
public:
    GameState(const Board& board, int turn_limit, int starting_player = 0);

    // Builds a state from an explicit occupancy (player per cell index, -1
    // empty). Validates peg counts. Used by tests, replay tooling, and the
    // stdio protocol.
    GameState(const Board& board, const std::vector<int8_t>& occupancy,
              int current, int turn_limit, int turn_count = 0);

    const Board& board() const { return *board_; }
    int current() const { return current_; }
    int turn_count() const { return turn_count_; }
    int submove_count() const { return submove_count_; }
    int turn_limit() const { return turn_limit_; }
    Status status() const { return status_; }
    int winner() const { return winner_; }

    int owner(int cell) const { return occupancy_[cell]; }
    const std::vector<int8_t>& occupancy() const { return occupancy_; }

    // Jump chain context, reset whenever a turn completes.
    int active_peg() const { return active_peg_; }
    const std::vector<int>& jump_origins() const { return origins_; }
    bool visited(int cell) const { return visited_[cell] != 0; }

    std::vector<Submove> legal_submoves() const;
    bool is_legal(const Submove& m) const;
    void apply(const Submove& m);

    bool is_winner(int p) const;

    // Copy with every coordinate (pegs, jump context) rotated k*60 degrees
    // clockwise. Player ids are untouched, so home/target semantics only hold
    // in the original frame; use for observation frames and rendering.
    GameState rotated(int k) const;

    // Number of legal submove sequences of exactly `depth` submoves.
    uint64_t perft(int depth) const;

private:
    void check_legal(const Submove& m) const;
    void complete_turn();

    const Board* board_;
    std::vector<int8_t> occupancy_;
    int current_;
    int turn_count_ = 0;
    int submove_count_ = 0;
    int turn_limit_;
    Status status_ = Status::Running;
    int winner_ = -1;
    int active_peg_ = -1;
    std::vector<int> origins_;
    std::vector<uint8_t> visited_;
};

// Default limits; both overridable everywhere a game is created.
inline int default_turn_limit(int n) { return n >= 4 ? 1000 : 200; }

// Game-log lines: "<player> <q> <r> <dir> <jump01>" for Move/Jump,
// "<player> end" for EndTurn. Replay feeds them back through apply().
std::string format_log_line(int player, const Board& board, const Submove& m);
Submove parse_log_line(const std::string& line, const Board& board, int* player_out);

std::string render_board(const GameState& s);

}  // namespace checkers
