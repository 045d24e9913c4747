#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace checkers {

// Cube coordinate on the hex grid, s = -q - r kept implicit.
struct Hex {
    int q = 0;
    int r = 0;

    int s() const { return -q - r; }
    bool operator==(const Hex& o) const { return q == o.q && r == o.r; }
    bool operator!=(const Hex& o) const { return !(*this == o); }
    Hex operator+(const Hex& o) const { return {q + o.q, r + o.r}; }
    Hex operator-(const Hex& o) const { return {q - o.q, r - o.r}; }
};

// Six neighbor directions, counterclockwise starting due right.
// r grows downward, so directions 4 and 5 point toward larger r.
inline constexpr std::array<Hex, 6> kDirections = {{
    {+1, 0}, {+1, -1}, {0, -1}, {-1, 0}, {-1, +1}, {0, +1},
}};

inline int hex_distance(const Hex& a, const Hex& b) {
    int dq = a.q - b.q, dr = a.r - b.r, ds = a.s() - b.s();
    return std::max(std::abs(dq), std::max(std::abs(dr), std::abs(ds)));
}

// One 60-degree clockwise rotation about the origin: (q,r,s) -> (-r,-s,-q).
inline Hex rotate60cw(const Hex& h) { return {-h.r, -h.s()}; }

inline Hex rotate60cw(Hex h, int times) {
    times %= 6;
    if (times < 0) times += 6;
    for (int i = 0; i < times; ++i) h = rotate60cw(h);
    return h;
}

// Six-pointed star board of size N: a hexagon of radius N plus six corner
// triangles of side N. Membership is the union of two half-space triples.
class Board {
public:
    explicit Board(int n);

    int size() const { return n_; }
    int grid_dim() const { return 4 * n_ + 1; }
    int cell_count() const { return static_cast<int>(cells_.size()); }
    int pegs_per_player() const { return n_ * (n_ + 1) / 2; }

    bool contains(const Hex& h) const {
        int q = h.q, r = h.r, s = h.s();
        bool neg = q <= n_ && r <= n_ && s <= n_;
        bool pos = q >= -n_ && r >= -n_ && s >= -n_;
        return (neg || pos) && std::abs(q) <= 2 * n_ && std::abs(r) <= 2 * n_ &&
               std::abs(s) <= 2 * n_;
    }

    // Dense index into grid_dim() x grid_dim() row-major storage, or -1 off board.
    int cell_index(const Hex& h) const {
        int i = h.q + 2 * n_, j = h.r + 2 * n_;
        if (i < 0 || j < 0 || i >= grid_dim() || j >= grid_dim()) return -1;
        return index_[i * grid_dim() + j];
    }

    // (i, j) grid coordinates used by observations and the action codec.
    std::pair<int, int> grid_coords(const Hex& h) const {
        return {h.q + 2 * n_, h.r + 2 * n_};
    }
    Hex from_grid(int i, int j) const { return {i - 2 * n_, j - 2 * n_}; }

    const std::vector<Hex>& cells() const { return cells_; }
    const Hex& cell(int idx) const { return cells_[idx]; }

    // Corner triangle occupied by player p at game start. Player 0 owns the
    // top corner (r <= -(N+1)); players 1..5 proceed clockwise.
    const std::vector<Hex>& home_cells(int player) const { return homes_[player]; }
    // Opposite corner, the player's goal.
    const std::vector<Hex>& target_cells(int player) const {
        return homes_[(player + 3) % 6];
    }

    // Neighbor cell index in direction d, or -1 off board. Precomputed.
    int neighbor(int cell_idx, int dir) const { return neighbors_[cell_idx][dir]; }
    // Cell two steps away in direction d (jump landing), or -1 off board.
    int neighbor2(int cell_idx, int dir) const { return neighbors2_[cell_idx][dir]; }

    // Index of the cell rotated k*60 degrees clockwise. The star is closed
    // under rotation, so this is a permutation.
    int rotated_index(int cell_idx, int k) const { return rotated_[k % 6][cell_idx]; }

    bool is_home(int player, int cell_idx) const {
        return corner_of_[cell_idx] == player;
    }
    bool is_target(int player, int cell_idx) const {
        return corner_of_[cell_idx] == (player + 3) % 6;
    }

private:
    int n_;
    std::vector<Hex> cells_;
    std::vector<int> index_;
    std::array<std::vector<Hex>, 6> homes_;
    std::vector<std::array<int, 6>> neighbors_;
    std::vector<std::array<int, 6>> neighbors2_;
    std::array<std::vector<int>, 6> rotated_;
    std::vector<int8_t> corner_of_;
};

}  // namespace checkers
