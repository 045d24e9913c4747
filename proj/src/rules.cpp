#include "checkers/rules.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace checkers {

GameState::GameState(const Board& board, int turn_limit, int starting_player)
    : board_(&board), current_(starting_player), turn_limit_(turn_limit) {
    if (turn_limit < 1) throw std::invalid_argument("turn_limit must be >= 1");
    if (starting_player < 0 || starting_player > 5)
        throw std::invalid_argument("starting player out of range");
    occupancy_.assign(board.cell_count(), -1);
    visited_.assign(board.cell_count(), 0);
    for (int p = 0; p < 6; ++p)
        for (const Hex& h : board.home_cells(p))
            occupancy_[board.cell_index(h)] = static_cast<int8_t>(p);
}

GameState::GameState(const Board& board, const std::vector<int8_t>& occupancy,
                     int current, int turn_limit, int turn_count)
    : board_(&board),
      occupancy_(occupancy),
      current_(current),
      turn_count_(turn_count),
      turn_limit_(turn_limit) {
    if (static_cast<int>(occupancy.size()) != board.cell_count())
        throw std::invalid_argument("occupancy size mismatch");
    if (current < 0 || current > 5) throw std::invalid_argument("current player out of range");
    if (turn_limit < 1) throw std::invalid_argument("turn_limit must be >= 1");
    if (turn_count < 0 || turn_count >= turn_limit)
        throw std::invalid_argument("turn_count out of range");
    std::array<int, 6> counts{};
    for (int8_t o : occupancy) {
        if (o < -1 || o > 5) throw std::invalid_argument("bad occupancy value");
        if (o >= 0) counts[o]++;
    }
    for (int p = 0; p < 6; ++p)
        if (counts[p] != board.pegs_per_player())
            throw std::invalid_argument("player peg count mismatch");
    visited_.assign(board.cell_count(), 0);
}

std::vector<Submove> GameState::legal_submoves() const {
    if (status_ != Status::Running)
        throw std::logic_error("legal_submoves called on terminal state");
    std::vector<Submove> out;
    const Board& b = *board_;
    if (active_peg_ < 0) {
        for (int c = 0; c < b.cell_count(); ++c) {
            if (occupancy_[c] != current_) continue;
            for (int d = 0; d < 6; ++d) {
                int n1 = b.neighbor(c, d);
                if (n1 < 0) continue;
                if (occupancy_[n1] < 0) {
                    out.push_back(Submove::move(c, d));
                } else {
                    int n2 = b.neighbor2(c, d);
                    if (n2 >= 0 && occupancy_[n2] < 0) out.push_back(Submove::jump(c, d));
                }
            }
        }
        if (out.empty()) out.push_back(Submove::end_turn());
    } else {
        for (int d = 0; d < 6; ++d) {
            int n1 = b.neighbor(active_peg_, d);
            if (n1 < 0 || occupancy_[n1] < 0) continue;
            int n2 = b.neighbor2(active_peg_, d);
            if (n2 >= 0 && occupancy_[n2] < 0 && !visited_[n2])
                out.push_back(Submove::jump(active_peg_, d));
        }
        out.push_back(Submove::end_turn());
    }
    return out;
}

bool GameState::is_legal(const Submove& m) const {
    if (status_ != Status::Running) return false;
    const Board& b = *board_;
    if (m.kind == SubmoveKind::EndTurn) {
        if (active_peg_ >= 0) return true;
        auto ms = legal_submoves();
        return ms.size() == 1 && ms[0].kind == SubmoveKind::EndTurn;
    }
    if (m.cell < 0 || m.cell >= b.cell_count() || m.dir < 0 || m.dir > 5) return false;
    if (occupancy_[m.cell] != current_) return false;
    int n1 = b.neighbor(m.cell, m.dir);
    if (m.kind == SubmoveKind::Move) {
        if (active_peg_ >= 0) return false;
        return n1 >= 0 && occupancy_[n1] < 0;
    }
    if (active_peg_ >= 0 && m.cell != active_peg_) return false;
    if (n1 < 0 || occupancy_[n1] < 0) return false;
    int n2 = b.neighbor2(m.cell, m.dir);
    return n2 >= 0 && occupancy_[n2] < 0 && !visited_[n2];
}

void GameState::check_legal(const Submove& m) const {
    if (status_ != Status::Running)
        throw std::logic_error("submove applied to terminal state");
    if (is_legal(m)) return;
    const Board& b = *board_;
    std::string why;
    if (m.kind == SubmoveKind::EndTurn) {
        why = "EndTurn is a pass, only legal with no moves or jumps available";
    } else if (m.cell < 0 || m.cell >= b.cell_count() || m.dir < 0 || m.dir > 5) {
        why = "source cell or direction out of range";
    } else if (occupancy_[m.cell] != current_) {
        why = "source cell not occupied by the current player";
    } else if (active_peg_ >= 0 && (m.kind == SubmoveKind::Move || m.cell != active_peg_)) {
        why = "only the active jumping peg may continue, and only by jumping";
    } else if (m.kind == SubmoveKind::Move) {
        why = "move target off board or occupied";
    } else {
        int n2 = b.neighbor2(m.cell, m.dir);
        if (n2 >= 0 && occupancy_[n2] < 0 && visited_[n2])
            why = "jump landing revisits a cell this peg already occupied this turn";
        else
            why = "jump needs an adjacent peg and an empty landing cell";
    }
    throw std::invalid_argument("illegal submove: " + why);
}

void GameState::apply(const Submove& m) {
    check_legal(m);
    const Board& b = *board_;
    ++submove_count_;
    switch (m.kind) {
        case SubmoveKind::Move: {
            int dst = b.neighbor(m.cell, m.dir);
            occupancy_[dst] = occupancy_[m.cell];
            occupancy_[m.cell] = -1;
            complete_turn();
            break;
        }
        case SubmoveKind::Jump: {
            int dst = b.neighbor2(m.cell, m.dir);
            occupancy_[dst] = occupancy_[m.cell];
            occupancy_[m.cell] = -1;
            origins_.push_back(m.cell);
            visited_[m.cell] = 1;
            visited_[dst] = 1;
            active_peg_ = dst;
            break;
        }
        case SubmoveKind::EndTurn:
            complete_turn();
            break;
    }
}

void GameState::complete_turn() {
    int mover = current_;
    active_peg_ = -1;
    origins_.clear();
    std::fill(visited_.begin(), visited_.end(), 0);
    ++turn_count_;
    current_ = (current_ + 1) % 6;
    if (is_winner(mover)) {
        status_ = Status::Won;
        winner_ = mover;
    } else if (turn_count_ >= turn_limit_) {
        status_ = Status::Truncated;
    }
}

bool GameState::is_winner(int p) const {
    for (const Hex& h : board_->target_cells(p))
        if (occupancy_[board_->cell_index(h)] != p) return false;
    return true;
}

GameState GameState::rotated(int k) const {
    const Board& b = *board_;
    GameState out = *this;
    for (int c = 0; c < b.cell_count(); ++c) {
        int rc = b.rotated_index(c, k);
        out.occupancy_[rc] = occupancy_[c];
        out.visited_[rc] = visited_[c];
    }
    if (active_peg_ >= 0) out.active_peg_ = b.rotated_index(active_peg_, k);
    for (size_t i = 0; i < origins_.size(); ++i)
        out.origins_[i] = b.rotated_index(origins_[i], k);
    return out;
}

uint64_t GameState::perft(int depth) const {
    if (depth == 0) return 1;
    if (status_ != Status::Running) return 0;
    uint64_t total = 0;
    for (const Submove& m : legal_submoves()) {
        GameState next = *this;
        next.apply(m);
        total += next.perft(depth - 1);
    }
    return total;
}

std::string format_log_line(int player, const Board& board, const Submove& m) {
    std::ostringstream os;
    os << player << ' ';
    if (m.kind == SubmoveKind::EndTurn) {
        os << "end";
    } else {
        const Hex& h = board.cell(m.cell);
        os << h.q << ' ' << h.r << ' ' << m.dir << ' '
           << (m.kind == SubmoveKind::Jump ? 1 : 0);
    }
    return os.str();
}

Submove parse_log_line(const std::string& line, const Board& board, int* player_out) {
    std::istringstream is(line);
    int player;
    std::string tok;
    if (!(is >> player >> tok)) throw std::invalid_argument("bad log line: " + line);
    if (player_out) *player_out = player;
    if (tok == "end") return Submove::end_turn();
    int q = std::stoi(tok), r, dir, jump;
    if (!(is >> r >> dir >> jump)) throw std::invalid_argument("bad log line: " + line);
    int cell = board.cell_index({q, r});
    if (cell < 0) throw std::invalid_argument("log line names an off-board cell: " + line);
    return jump ? Submove::jump(cell, dir) : Submove::move(cell, dir);
}

std::string render_board(const GameState& s) {
    const Board& b = s.board();
    int n = b.size();
    int min_col = 0;
    for (const Hex& h : b.cells()) min_col = std::min(min_col, 2 * h.q + h.r);
    std::ostringstream os;
    for (int r = -2 * n; r <= 2 * n; ++r) {
        std::string row;
        for (int q = -2 * n; q <= 2 * n; ++q) {
            int c = b.cell_index({q, r});
            if (c < 0) continue;
            size_t col = static_cast<size_t>(2 * q + r - min_col);
            if (row.size() <= col) row.resize(col + 1, ' ');
            int o = s.owner(c);
            row[col] = o < 0 ? '.' : static_cast<char>('a' + o);
        }
        if (!row.empty()) os << row << '\n';
    }
    return os.str();
}

}  // namespace checkers
