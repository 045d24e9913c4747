#include "checkers/eval.hpp"

#include <fstream>

namespace checkers {

MatchOutcome play_game(const Board& board, const std::array<Agent*, 6>& agents, int turn_limit,
                       const RewardScheme& scheme, Rng& rng,
                       const std::function<void(const GameState&, int, int)>& on_turn_complete) {
    GameState s(board, turn_limit);
    MatchOutcome out;
    while (s.status() == Status::Running) {
        int p = s.current();
        int a = agents[p]->act(s, rng);
        int turns_before = s.turn_count();
        StepResult res = step(s, a, scheme);
        for (int q = 0; q < 6; ++q) out.reward_sum[q] += res.rewards[q];
        if (s.turn_count() > turns_before) {
            ++out.player_turns[p];
            if (on_turn_complete) on_turn_complete(s, p, out.player_turns[p]);
        }
    }
    out.winner = s.status() == Status::Won ? s.winner() : -1;
    out.total_turns = s.turn_count();
    return out;
}

EvalReport evaluate_vs_random(const Board& board, const PolicySet<float>& params, int games,
                              int turn_limit, uint64_t seed, const RewardScheme& scheme,
                              bool deterministic) {
    EvalReport rep;
    rep.games = games;
    double reward_total = 0, length_total = 0, winning_length_total = 0;
    for (int g = 0; g < games; ++g) {
        int seat = g % 6;
        int head = g % 6;
        Rng rng(derive_seed(seed, static_cast<uint64_t>(g)));
        PolicyAgent evaluated(params, head, deterministic);
        RandomAgent random_agent;
        std::array<Agent*, 6> agents;
        for (int q = 0; q < 6; ++q) agents[q] = &random_agent;
        agents[seat] = &evaluated;
        MatchOutcome out = play_game(board, agents, turn_limit, scheme, rng);

        GameRecord rec;
        rec.seed = derive_seed(seed, static_cast<uint64_t>(g));
        rec.seats.fill(-1);
        rec.seats[seat] = 0;
        rec.winner = out.winner;
        rec.total_turns = out.total_turns;
        rec.eval_turns = out.player_turns[seat];
        rep.records.push_back(rec);

        rep.lengths.push_back(out.player_turns[seat]);
        length_total += out.player_turns[seat];
        reward_total += out.reward_sum[seat];
        if (out.winner < 0) {
            ++rep.truncations;
        } else {
            ++rep.wins_by_seat[out.winner];
            if (out.winner == seat) {
                ++rep.wins;
                winning_length_total += out.player_turns[seat];
            }
        }
    }
    rep.win_rate_incl = games ? static_cast<double>(rep.wins) / games : 0;
    int decided = games - rep.truncations;
    rep.win_rate_decided = decided ? static_cast<double>(rep.wins) / decided : 0;
    rep.mean_length = games ? length_total / games : 0;
    rep.mean_winning_length = rep.wins ? winning_length_total / rep.wins : -1;
    rep.mean_reward = games ? reward_total / games : 0;
    return rep;
}

HeadToHeadReport head_to_head(const Board& board,
                              const std::array<const PolicySet<float>*, 3>& archs, int games,
                              int turn_limit, uint64_t seed, const RewardScheme& scheme,
                              bool deterministic) {
    HeadToHeadReport rep;
    rep.games = games;
    for (int g = 0; g < games; ++g) {
        uint64_t game_seed = derive_seed(seed, static_cast<uint64_t>(g));
        Rng rng(game_seed);
        std::array<int8_t, 6> seat_arch = {0, 0, 1, 1, 2, 2};
        for (int i = 5; i > 0; --i)
            std::swap(seat_arch[i], seat_arch[rng.uniform_int(i + 1)]);

        std::vector<PolicyAgent> agents_store;
        agents_store.reserve(6);
        std::array<Agent*, 6> agents{};
        for (int q = 0; q < 6; ++q) {
            agents_store.emplace_back(*archs[seat_arch[q]], q, deterministic);
            agents[q] = &agents_store.back();
        }
        MatchOutcome out = play_game(board, agents, turn_limit, scheme, rng);

        GameRecord rec;
        rec.seed = game_seed;
        rec.seats = seat_arch;
        rec.winner = out.winner;
        rec.total_turns = out.total_turns;
        rep.records.push_back(rec);
        if (out.winner < 0)
            ++rep.truncations;
        else
            ++rep.wins[seat_arch[out.winner]];
    }
    for (int a = 0; a < 3; ++a)
        rep.win_share[a] = games ? static_cast<double>(rep.wins[a]) / games : 0;
    return rep;
}

HeatmapGrid collect_heatmaps(const Board& board, const PolicySet<float>& params, int games,
                             const std::vector<int>& snapshot_turns, int turn_limit,
                             uint64_t seed, const RewardScheme& scheme, bool deterministic) {
    HeatmapGrid grid;
    grid.n = board.size();
    grid.games = games;
    grid.snapshot_turns = snapshot_turns;
    int dim = board.grid_dim();
    grid.counts.assign(snapshot_turns.size(), std::vector<int64_t>(dim * dim, 0));

    for (int g = 0; g < games; ++g) {
        int seat = g % 6;
        int head = g % 6;
        int k = (6 - seat) % 6;
        Rng rng(derive_seed(seed, static_cast<uint64_t>(g)));
        PolicyAgent evaluated(params, head, deterministic);
        RandomAgent random_agent;
        std::array<Agent*, 6> agents;
        for (int q = 0; q < 6; ++q) agents[q] = &random_agent;
        agents[seat] = &evaluated;

        auto snapshot = [&](const GameState& s, size_t snap_idx) {
            for (int c = 0; c < board.cell_count(); ++c) {
                if (s.owner(c) != seat) continue;
                auto [i, j] = board.grid_coords(board.cell(board.rotated_index(c, k)));
                ++grid.counts[snap_idx][i * dim + j];
            }
        };

        size_t next_snap = 0;
        GameState initial(board, turn_limit);
        while (next_snap < snapshot_turns.size() && snapshot_turns[next_snap] == 0) {
            snapshot(initial, next_snap);
            ++next_snap;
        }
        GameState final_state(board, turn_limit);
        play_game(board, agents, turn_limit, scheme, rng,
                  [&](const GameState& s, int mover, int mover_turns) {
                      final_state = s;
                      if (mover != seat) return;
                      while (next_snap < snapshot_turns.size() &&
                             snapshot_turns[next_snap] == mover_turns) {
                          snapshot(s, next_snap);
                          ++next_snap;
                      }
                  });
        for (; next_snap < snapshot_turns.size(); ++next_snap)
            snapshot(final_state, next_snap);
    }
    return grid;
}

int64_t mass_in_target(const Board& board, const HeatmapGrid& grid, int snapshot_idx) {
    int dim = board.grid_dim();
    int64_t total = 0;
    for (const Hex& h : board.target_cells(0)) {
        auto [i, j] = board.grid_coords(h);
        total += grid.counts[snapshot_idx][i * dim + j];
    }
    return total;
}

namespace {

void write_records(std::ofstream& os, const std::vector<GameRecord>& records) {
    os << "# game\tseed\tseats\twinner\ttotal_turns\teval_turns\n";
    for (size_t g = 0; g < records.size(); ++g) {
        const GameRecord& r = records[g];
        os << g << '\t' << r.seed << '\t';
        for (int q = 0; q < 6; ++q) os << (q ? "," : "") << static_cast<int>(r.seats[q]);
        os << '\t' << r.winner << '\t' << r.total_turns << '\t' << r.eval_turns << '\n';
    }
}

}  // namespace

void write_eval_report(const std::string& path, const EvalReport& rep) {
    std::ofstream os(path);
    os << "# games\twins\ttruncations\twin_rate_incl\twin_rate_decided\tmean_length\t"
          "mean_winning_length\tmean_reward\n";
    os << rep.games << '\t' << rep.wins << '\t' << rep.truncations << '\t'
       << rep.win_rate_incl << '\t' << rep.win_rate_decided << '\t' << rep.mean_length << '\t'
       << rep.mean_winning_length << '\t' << rep.mean_reward << "\n\n";
    write_records(os, rep.records);
}

void write_h2h_report(const std::string& path, const HeadToHeadReport& rep,
                      const std::array<std::string, 3>& labels) {
    std::ofstream os(path);
    os << "# arch\tlabel\twins\twin_share\n";
    for (int a = 0; a < 3; ++a)
        os << a << '\t' << labels[a] << '\t' << rep.wins[a] << '\t' << rep.win_share[a] << '\n';
    os << "truncations\t" << rep.truncations << "\tof\t" << rep.games << "\n\n";
    write_records(os, rep.records);
}

void write_heatmaps(const std::string& path, const HeatmapGrid& grid) {
    std::ofstream os(path);
    int dim = 4 * grid.n + 1;
    for (size_t snap = 0; snap < grid.snapshot_turns.size(); ++snap) {
        os << "# turn " << grid.snapshot_turns[snap] << '\n';
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j)
                os << (j ? "," : "") << grid.counts[snap][i * dim + j];
            os << '\n';
        }
        os << '\n';
    }
}

}  // namespace checkers
