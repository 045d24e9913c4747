#include "checkers/hexgrid.hpp"

#include <algorithm>

namespace checkers {

Board::Board(int n) : n_(n) {
    const int dim = grid_dim();
    index_.assign(dim * dim, -1);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            Hex h = from_grid(i, j);
            if (!contains(h)) continue;
            index_[i * dim + j] = static_cast<int>(cells_.size());
            cells_.push_back(h);
        }
    }

    std::vector<Hex> top;
    for (const Hex& h : cells_)
        if (h.r <= -(n_ + 1)) top.push_back(h);
    for (int p = 0; p < 6; ++p) {
        homes_[p].clear();
        for (const Hex& h : top) homes_[p].push_back(rotate60cw(h, p));
        std::sort(homes_[p].begin(), homes_[p].end(), [](const Hex& a, const Hex& b) {
            return a.r != b.r ? a.r < b.r : a.q < b.q;
        });
    }

    neighbors_.resize(cells_.size());
    neighbors2_.resize(cells_.size());
    for (size_t c = 0; c < cells_.size(); ++c) {
        for (int d = 0; d < 6; ++d) {
            Hex step = kDirections[d];
            neighbors_[c][d] = cell_index(cells_[c] + step);
            neighbors2_[c][d] = cell_index(cells_[c] + step + step);
        }
    }

    for (int k = 0; k < 6; ++k) {
        rotated_[k].resize(cells_.size());
        for (size_t c = 0; c < cells_.size(); ++c)
            rotated_[k][c] = cell_index(rotate60cw(cells_[c], k));
    }

    corner_of_.assign(cells_.size(), -1);
    for (int p = 0; p < 6; ++p)
        for (const Hex& h : homes_[p]) corner_of_[cell_index(h)] = static_cast<int8_t>(p);
}

}  // namespace checkers
