#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "checkers/env.hpp"
#include "checkers/rng.hpp"

using namespace checkers;

namespace {

GameState random_playout_state(const Board& b, int submoves, Rng& rng) {
    GameState s(b, 10000);
    for (int i = 0; i < submoves && s.status() == Status::Running; ++i) {
        auto legal = s.legal_submoves();
        s.apply(legal[rng.uniform_int(static_cast<int>(legal.size()))]);
    }
    return s;
}

int popcount(const std::vector<float>& v, int from, int len) {
    int c = 0;
    for (int i = from; i < from + len; ++i)
        if (v[i] != 0.0f) ++c;
    return c;
}

}  // namespace

TEST_CASE("observation and action space sizes") {
    CHECK(observation_size(2) == 648);
    CHECK(action_space_size(2) == 973);
    CHECK(observation_size(1) == 200);
    CHECK(action_space_size(1) == 301);
    CHECK(observation_size(4) == 2312);
    CHECK(action_space_size(4) == 3469);
    for (int n = 1; n <= 4; ++n) {
        int dim = 4 * n + 1;
        CHECK(observation_size(n) == dim * dim * 8);
        CHECK(action_space_size(n) == dim * dim * 12 + 1);
    }
}

TEST_CASE("action codec roundtrips over every index") {
    for (int n : {1, 2}) {
        Board b(n);
        CHECK(decode_action(encode_end_turn(n), n).end_turn);
        CHECK(encode_end_turn(n) == action_space_size(n) - 1);
        for (int a = 0; a < action_space_size(n) - 1; ++a) {
            DecodedAction d = decode_action(a, n);
            CHECK_FALSE(d.end_turn);
            CHECK(d.dir >= 0);
            CHECK(d.dir < 6);
            if (b.contains({d.q, d.r}))
                CHECK(encode_action(d.q, d.r, d.dir, d.is_jump, n) == a);
        }
        for (const Hex& h : b.cells())
            for (int d = 0; d < 6; ++d)
                for (bool j : {false, true}) {
                    int a = encode_action(h.q, h.r, d, j, n);
                    CHECK(a >= 0);
                    CHECK(a < action_space_size(n) - 1);
                    DecodedAction dec = decode_action(a, n);
                    CHECK(dec.q == h.q);
                    CHECK(dec.r == h.r);
                    CHECK(dec.dir == d);
                    CHECK(dec.is_jump == j);
                }
        CHECK_THROWS_AS(encode_action(5 * n, 5 * n, 0, false, n), std::out_of_range);
    }
}

TEST_CASE("mask popcount equals the number of legal submoves") {
    for (int n : {1, 2}) {
        Board b(n);
        Rng rng(1000 + n);
        int states = 0;
        while (states < 3000) {
            GameState s(b, 10000);
            while (s.status() == Status::Running && states < 3000) {
                std::vector<uint8_t> mask = action_mask(s);
                REQUIRE(static_cast<int>(mask.size()) == action_space_size(n));
                int bits = 0;
                for (uint8_t m : mask) bits += m;
                auto legal = s.legal_submoves();
                CHECK(bits == static_cast<int>(legal.size()));
                ++states;
                s.apply(legal[rng.uniform_int(static_cast<int>(legal.size()))]);
            }
        }
    }
}

TEST_CASE("every legal submove maps to a set mask bit that steps cleanly") {
    Board b(2);
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        GameState s = random_playout_state(b, trial % 60, rng);
        if (s.status() != Status::Running) continue;
        std::vector<uint8_t> mask = action_mask(s);
        for (int a = 0; a < action_space_size(2); ++a) {
            if (!mask[a]) continue;
            GameState copy = s;
            StepResult res = step(copy, a, RewardScheme{});
            CHECK(res.next_agent == copy.current());
        }
        int illegal = 0;
        for (int a = 0; a < action_space_size(2) && illegal < 5; ++a) {
            if (mask[a]) continue;
            GameState copy = s;
            CHECK_THROWS_AS(step(copy, a, RewardScheme{}), std::invalid_argument);
            CHECK(copy.occupancy() == s.occupancy());
            CHECK(copy.current() == s.current());
            ++illegal;
        }
    }
}

TEST_CASE("initial observation puts each player's pegs on the canonical home") {
    Board b(2);
    GameState s(b, 200);
    int plane = b.grid_dim() * b.grid_dim();
    std::set<int> home_flat;
    for (const Hex& h : b.home_cells(0)) {
        auto [i, j] = b.grid_coords(h);
        home_flat.insert(i * b.grid_dim() + j);
    }
    for (int p = 0; p < 6; ++p) {
        std::vector<float> obs = encode_observation(s, p);
        REQUIRE(static_cast<int>(obs.size()) == observation_size(2));
        for (int layer = 0; layer < 6; ++layer)
            CHECK(popcount(obs, layer * plane, plane) == b.pegs_per_player());
        CHECK(popcount(obs, 6 * plane, 2 * plane) == 0);
        for (int f : home_flat) CHECK(obs[f] == 1.0f);
    }
}

TEST_CASE("observation layers track ownership through the canonical rotation") {
    Board b(2);
    Rng rng(3);
    int plane = b.grid_dim() * b.grid_dim();
    for (int trial = 0; trial < 120; ++trial) {
        GameState s = random_playout_state(b, 5 + trial % 50, rng);
        if (s.status() != Status::Running) continue;
        for (int p = 0; p < 6; ++p) {
            GameState cs = canonicalize(s, p);
            std::vector<float> obs = encode_observation(s, p);
            for (int c = 0; c < b.cell_count(); ++c) {
                int o = cs.owner(c);
                auto [i, j] = b.grid_coords(b.cell(c));
                int flat = i * b.grid_dim() + j;
                for (int layer = 0; layer < 6; ++layer) {
                    bool expect = o >= 0 && (o - p + 6) % 6 == layer;
                    CHECK(obs[layer * plane + flat] == (expect ? 1.0f : 0.0f));
                }
            }
        }
    }
}

TEST_CASE("jump context layers are visible only to the mover") {
    Board b(2);
    Rng rng(41);
    int plane = b.grid_dim() * b.grid_dim();
    int seen = 0;
    while (seen < 60) {
        GameState s(b, 10000);
        while (s.status() == Status::Running && seen < 60) {
            auto legal = s.legal_submoves();
            Submove pick = legal[rng.uniform_int(static_cast<int>(legal.size()))];
            s.apply(pick);
            if (s.status() != Status::Running || s.active_peg() < 0) continue;
            ++seen;
            int mover = s.current();
            std::vector<float> obs = encode_observation(s, mover);
            CHECK(popcount(obs, 6 * plane, plane) ==
                  static_cast<int>(s.jump_origins().size()));
            CHECK(popcount(obs, 7 * plane, plane) == 1);
            std::vector<float> other = encode_observation(s, (mover + 1) % 6);
            CHECK(popcount(other, 6 * plane, 2 * plane) == 0);
        }
    }
}

TEST_CASE("identical canonical actions preserve sixfold symmetry") {
    Board b(2);
    GameState s(b, 200);
    int forward = encode_action(1, -3, 5, false, 2);
    for (int p = 0; p < 6; ++p) {
        CHECK(s.current() == p);
        StepResult res = step(s, forward, RewardScheme{});
        CHECK(res.rewards[p] == doctest::Approx(0.001f));
    }
    for (int c = 0; c < b.cell_count(); ++c) {
        int o = s.owner(c);
        int rc = b.rotated_index(c, 1);
        int ro = s.owner(rc);
        CHECK((o < 0) == (ro < 0));
        if (o >= 0) CHECK(ro == (o + 1) % 6);
    }
}

TEST_CASE("move bonus follows canonical forward progress") {
    Board b(2);
    RewardScheme ps{RewardVariant::PositiveSum};
    GameState s(b, 200);
    StepResult res = step(s, encode_action(1, -3, 5, false, 2), ps);
    CHECK(res.rewards[0] == doctest::Approx(0.001f));
    for (int q = 1; q < 6; ++q) CHECK(res.rewards[q] == 0.0f);

    std::vector<int8_t> occ(b.cell_count(), -1);
    auto place = [&](int q, int r, int p) { occ[b.cell_index({q, r})] = static_cast<int8_t>(p); };
    place(1, -2, 0);
    place(2, -4, 0);
    place(2, -3, 0);
    for (int p = 1; p < 6; ++p)
        for (const Hex& h : b.home_cells(p)) place(h.q, h.r, p);

    GameState back(b, occ, 0, 200);
    StepResult res2 = step(back, encode_action(1, -2, 2, false, 2), ps);
    CHECK(res2.rewards[0] == doctest::Approx(-0.001f));

    GameState side(b, occ, 0, 200);
    StepResult res3 = step(side, encode_action(1, -2, 3, false, 2), ps);
    CHECK(res3.rewards[0] == 0.0f);

    // The same canonical action from another seat scores that seat instead.
    GameState rot(b, 200, 2);
    StepResult res4 = step(rot, encode_action(1, -3, 5, false, 2), ps);
    CHECK(res4.rewards[2] == doctest::Approx(0.001f));
    CHECK(rot.owner(b.rotated_index(b.cell_index({1, -2}), 2)) == 2);
}

TEST_CASE("goal bonus fires on entering and leaving the target") {
    Board b(2);
    std::vector<int8_t> occ(b.cell_count(), -1);
    auto place = [&](int q, int r, int p) { occ[b.cell_index({q, r})] = static_cast<int8_t>(p); };
    place(-1, 2, 0);
    place(0, 0, 0);
    place(1, 0, 0);
    place(2, -3, 1);
    place(2, -4, 1);
    place(1, -3, 1);
    const std::pair<int, int> rest[] = {{0, -2}, {1, -2}, {2, -2},  {0, 2},   {1, 1},   {0, 1},
                                        {-3, 2}, {-4, 2}, {-3, 1},  {-2, -1}, {-2, -2}, {-1, -2}};
    for (int i = 0; i < 12; ++i)
        occ[b.cell_index({rest[i].first, rest[i].second})] = static_cast<int8_t>(2 + i / 3);

    std::vector<int8_t> occ_in = occ;
    occ_in[b.cell_index({-1, 2})] = -1;
    occ_in[b.cell_index({-1, 3})] = 0;

    for (RewardVariant v : {RewardVariant::PositiveSum, RewardVariant::SparseGoal,
                            RewardVariant::SparseMove, RewardVariant::Sparse}) {
        RewardScheme scheme{v};
        float expect = 0.0f;
        if (scheme.has_goal_bonus()) expect += 0.1f;
        if (scheme.has_move_bonus()) expect += 0.001f;

        GameState s(b, occ, 0, 200);
        StepResult in = step(s, encode_action(-1, 2, 5, false, 2), scheme);
        CHECK(in.rewards[0] == doctest::Approx(expect));

        GameState t(b, occ_in, 0, 200);
        StepResult outr = step(t, encode_action(-1, 3, 2, false, 2), scheme);
        CHECK(outr.rewards[0] == doctest::Approx(-expect));
    }
}

TEST_CASE("win rewards by scheme") {
    Board b(2);
    std::vector<int8_t> occ(b.cell_count(), -1);
    auto place = [&](int q, int r, int p) { occ[b.cell_index({q, r})] = static_cast<int8_t>(p); };
    place(-2, 3, 0);
    place(-2, 4, 0);
    place(-1, 2, 0);
    place(2, -3, 1);
    place(2, -4, 1);
    place(1, -3, 1);
    const std::pair<int, int> rest[] = {{0, -2}, {1, -2}, {2, -2},  {0, 2},   {1, 1},   {0, 1},
                                        {-3, 2}, {-4, 2}, {-3, 1},  {-2, -1}, {-2, -2}, {-1, -2}};
    for (int i = 0; i < 12; ++i)
        occ[b.cell_index({rest[i].first, rest[i].second})] = static_cast<int8_t>(2 + i / 3);

    SUBCASE("positive sum pays the winner only") {
        GameState s(b, occ, 0, 200);
        StepResult res = step(s, encode_action(-1, 2, 5, false, 2), RewardScheme{});
        CHECK(res.terminated);
        CHECK_FALSE(res.truncated);
        CHECK(res.rewards[0] == doctest::Approx(10.0f + 0.1f + 0.001f));
        for (int q = 1; q < 6; ++q) CHECK(res.rewards[q] == 0.0f);
    }
    SUBCASE("sparse penalizes the losers") {
        GameState s(b, occ, 0, 200);
        StepResult res = step(s, encode_action(-1, 2, 5, false, 2),
                              RewardScheme{RewardVariant::Sparse});
        CHECK(res.terminated);
        CHECK(res.rewards[0] == doctest::Approx(10.0f));
        for (int q = 1; q < 6; ++q) CHECK(res.rewards[q] == doctest::Approx(-2.0f));
    }
    SUBCASE("truncation pays nobody") {
        GameState s(b, occ, 1, 200, 199);
        s.apply(Submove::jump(b.cell_index({1, -3}), 4));
        CHECK(s.status() == Status::Running);
        StepResult res = step(s, encode_end_turn(2), RewardScheme{RewardVariant::Sparse});
        CHECK(res.truncated);
        CHECK_FALSE(res.terminated);
        for (int q = 0; q < 6; ++q) CHECK(res.rewards[q] == 0.0f);
    }
}

TEST_CASE("env bundle resets and steps") {
    Env env(1, RewardScheme{}, -1);
    CHECK(env.turn_limit() == 200);
    CHECK(env.obs_dim() == 200);
    CHECK(env.act_dim() == 301);
    env.reset(2);
    CHECK(env.current() == 2);
    CHECK(env.running());
    std::vector<uint8_t> mask = env.mask();
    int first = -1;
    for (int a = 0; a < env.act_dim(); ++a)
        if (mask[a]) {
            first = a;
            break;
        }
    REQUIRE(first >= 0);
    StepResult res = env.step(first);
    CHECK(res.next_agent == env.current());
    env.reset(0);
    CHECK(env.current() == 0);
    CHECK(env.state().turn_count() == 0);

    Env big(4);
    CHECK(big.turn_limit() == 1000);
}

TEST_CASE("observation encoding is deterministic") {
    Board b(2);
    Rng rng(4);
    GameState s = random_playout_state(b, 23, rng);
    CHECK(encode_observation(s, 3) == encode_observation(s, 3));
    CHECK(action_mask(s) == action_mask(s));
}

TEST_CASE("reward variant names roundtrip") {
    for (RewardVariant v : {RewardVariant::Sparse, RewardVariant::SparseGoal,
                            RewardVariant::SparseMove, RewardVariant::PositiveSum})
        CHECK(parse_reward_variant(reward_variant_name(v)) == v);
    CHECK_THROWS(parse_reward_variant("bogus"));
}
