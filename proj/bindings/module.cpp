#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "checkers/eval.hpp"
#include "checkers/run.hpp"

namespace py = pybind11;
using namespace checkers;

namespace {

py::array_t<float> to_array(const std::vector<float>& v) {
    py::array_t<float> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<uint8_t> to_array(const std::vector<uint8_t>& v) {
    py::array_t<uint8_t> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Six-player Chinese Checkers engine, PPO self-play training and evaluation";

    py::class_<Hex>(m, "Hex")
        .def(py::init<int, int>(), py::arg("q"), py::arg("r"))
        .def_readonly("q", &Hex::q)
        .def_readonly("r", &Hex::r)
        .def_property_readonly("s", &Hex::s)
        .def("__eq__", [](const Hex& a, const Hex& b) { return a == b; })
        .def("__hash__", [](const Hex& h) { return h.q * 1000003 + h.r; })
        .def("__repr__", [](const Hex& h) {
            return "Hex(" + std::to_string(h.q) + ", " + std::to_string(h.r) + ")";
        });

    m.def("hex_distance", &hex_distance);
    m.def("rotate60cw", py::overload_cast<const Hex&>(&rotate60cw));
    m.def("rotate60cw", py::overload_cast<Hex, int>(&rotate60cw));

    py::class_<Board>(m, "Board")
        .def(py::init<int>(), py::arg("n"))
        .def_property_readonly("n", &Board::size)
        .def_property_readonly("cell_count", &Board::cell_count)
        .def_property_readonly("grid_dim", &Board::grid_dim)
        .def_property_readonly("pegs_per_player", &Board::pegs_per_player)
        .def("contains", &Board::contains)
        .def("cell_index", &Board::cell_index)
        .def("cell", &Board::cell)
        .def("cells", &Board::cells)
        .def("grid_coords", &Board::grid_coords)
        .def("from_grid", &Board::from_grid)
        .def("home_cells", &Board::home_cells)
        .def("target_cells", &Board::target_cells)
        .def("is_home", &Board::is_home)
        .def("is_target", &Board::is_target)
        .def("neighbor", &Board::neighbor)
        .def("neighbor2", &Board::neighbor2)
        .def("rotated_index", &Board::rotated_index);

    py::enum_<SubmoveKind>(m, "SubmoveKind")
        .value("Move", SubmoveKind::Move)
        .value("Jump", SubmoveKind::Jump)
        .value("EndTurn", SubmoveKind::EndTurn);

    py::class_<Submove>(m, "Submove")
        .def_static("move", &Submove::move)
        .def_static("jump", &Submove::jump)
        .def_static("end_turn", &Submove::end_turn)
        .def_readonly("kind", &Submove::kind)
        .def_readonly("cell", &Submove::cell)
        .def_readonly("dir", &Submove::dir)
        .def("__eq__", [](const Submove& a, const Submove& b) { return a == b; });

    py::enum_<Status>(m, "Status")
        .value("Running", Status::Running)
        .value("Won", Status::Won)
        .value("Truncated", Status::Truncated);

    py::class_<GameState>(m, "GameState")
        .def(py::init<const Board&, int>(), py::arg("board"), py::arg("turn_limit"),
             py::keep_alive<1, 2>())
        .def_property_readonly("current", &GameState::current)
        .def_property_readonly("turn_count", &GameState::turn_count)
        .def_property_readonly("turn_limit", &GameState::turn_limit)
        .def_property_readonly("status", &GameState::status)
        .def_property_readonly("winner", &GameState::winner)
        .def_property_readonly("active_peg", &GameState::active_peg)
        .def("owner", &GameState::owner)
        .def("occupancy", &GameState::occupancy)
        .def("legal_submoves", &GameState::legal_submoves)
        .def("is_legal", &GameState::is_legal)
        .def("apply", &GameState::apply)
        .def("is_winner", &GameState::is_winner)
        .def("rotated", &GameState::rotated)
        .def("perft", &GameState::perft);

    m.def("default_turn_limit", &default_turn_limit);
    m.def("format_log_line", &format_log_line);
    m.def("render_board", &render_board);

    py::class_<RewardScheme>(m, "RewardScheme")
        .def(py::init([](const std::string& name) {
                 return RewardScheme{parse_reward_variant(name)};
             }),
             py::arg("variant") = "positive-sum")
        .def_property_readonly(
            "variant", [](const RewardScheme& s) { return reward_variant_name(s.variant); })
        .def("win_reward", &RewardScheme::win_reward)
        .def("lose_penalty", &RewardScheme::lose_penalty);

    m.def("observation_size", &observation_size);
    m.def("action_space_size", &action_space_size);
    m.def("encode_action", &encode_action);
    m.def("encode_end_turn", &encode_end_turn);
    m.def("decode_action",
          [](int a, int n) {
              DecodedAction d = decode_action(a, n);
              return py::make_tuple(d.end_turn, d.q, d.r, d.dir, d.is_jump);
          },
          "Returns (end_turn, q, r, dir, is_jump) in the canonical frame");
    // math.h also declares a global canonicalize
    m.def("canonicalize", &checkers::canonicalize);
    m.def("encode_observation", [](const GameState& s, int perspective) {
        return to_array(encode_observation(s, perspective));
    });
    m.def("action_mask",
          [](const GameState& s) { return to_array(action_mask(s)); });

    py::class_<StepResult>(m, "StepResult")
        .def_property_readonly("rewards",
                               [](const StepResult& r) {
                                   return std::vector<float>(r.rewards.begin(), r.rewards.end());
                               })
        .def_readonly("terminated", &StepResult::terminated)
        .def_readonly("truncated", &StepResult::truncated)
        .def_readonly("next_agent", &StepResult::next_agent);

    py::class_<Env>(m, "Env")
        .def(py::init<int, RewardScheme, int>(), py::arg("n"),
             py::arg("scheme") = RewardScheme{}, py::arg("turn_limit") = -1)
        .def_property_readonly("board", &Env::board, py::return_value_policy::reference_internal)
        .def_property_readonly(
            "state", [](const Env& e) -> const GameState& { return e.state(); },
            py::return_value_policy::reference_internal)
        .def_property_readonly("turn_limit", &Env::turn_limit)
        .def("reset", &Env::reset, py::arg("starting_player") = 0)
        .def("observation", [](const Env& e) { return to_array(e.observation()); })
        .def("observation",
             [](const Env& e, int p) { return to_array(e.observation(p)); })
        .def("mask", [](const Env& e) { return to_array(e.mask()); })
        .def("step", &Env::step);

    py::class_<Rng>(m, "Rng")
        .def(py::init<uint64_t>())
        .def("u64", &Rng::u64)
        .def("uniform", &Rng::uniform)
        .def("uniform_int", &Rng::uniform_int);
    m.def("derive_seed", &derive_seed);

    m.def("random_action", &random_action);
    m.def("greedy_action", &greedy_action);

    py::enum_<Sharing>(m, "Sharing")
        .value("FullyIndependent", Sharing::FullyIndependent)
        .value("SharedEncoder", Sharing::SharedEncoder)
        .value("FullyShared", Sharing::FullyShared);
    m.def("parse_sharing", &parse_sharing);
    m.def("sharing_name", &sharing_name);

    py::class_<PolicySet<float>>(m, "PolicySet")
        .def_property_readonly("sharing", [](const PolicySet<float>& p) { return p.sharing; })
        .def_property_readonly("n", [](const PolicySet<float>& p) { return p.n; })
        .def("enc_index", &PolicySet<float>::enc_index)
        .def("head_index", &PolicySet<float>::head_index)
        .def("tensor_names", [](PolicySet<float>& p) {
            std::vector<std::string> names;
            for (auto& t : named_tensors(p)) names.push_back(t.name);
            return names;
        });

    m.def("policy_forward", [](const PolicySet<float>& ps, int seat,
                               const std::vector<float>& obs) {
        Vec<float> logits;
        float value = 0;
        policy_forward(ps, seat, obs, logits, value);
        std::vector<float> lv(logits.data(), logits.data() + logits.size());
        return py::make_tuple(to_array(lv), value);
    });

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_readonly("n", &Checkpoint::n)
        .def_property_readonly("sharing",
                               [](const Checkpoint& c) { return sharing_name(c.sharing); })
        .def_readonly("iteration", &Checkpoint::iteration)
        .def_readonly("env_steps", &Checkpoint::env_steps)
        .def_readonly("seed", &Checkpoint::seed)
        .def_readonly("has_adam", &Checkpoint::has_adam)
        .def_property_readonly("params",
                               [](Checkpoint& c) -> PolicySet<float>& { return c.params; },
                               py::return_value_policy::reference_internal);
    m.def("load_checkpoint", &load_checkpoint);
    m.def("save_checkpoint", &save_checkpoint);

    py::class_<PpoConfig>(m, "PpoConfig")
        .def(py::init<>())
        .def_readwrite("clip", &PpoConfig::clip)
        .def_readwrite("gamma", &PpoConfig::gamma)
        .def_readwrite("lam", &PpoConfig::lam)
        .def_readwrite("entropy_coef", &PpoConfig::entropy_coef)
        .def_readwrite("value_coef", &PpoConfig::value_coef)
        .def_readwrite("epochs", &PpoConfig::epochs)
        .def_readwrite("minibatch", &PpoConfig::minibatch)
        .def_readwrite("steps_per_iter", &PpoConfig::steps_per_iter)
        .def_readwrite("iterations", &PpoConfig::iterations);

    py::class_<Trainer::Options>(m, "TrainerOptions")
        .def(py::init<>())
        .def_readwrite("n", &Trainer::Options::n)
        .def_readwrite("sharing", &Trainer::Options::sharing)
        .def_readwrite("scheme", &Trainer::Options::scheme)
        .def_readwrite("ppo", &Trainer::Options::ppo)
        .def_readwrite("turn_limit", &Trainer::Options::turn_limit)
        .def_readwrite("seed", &Trainer::Options::seed)
        .def_readwrite("out_dir", &Trainer::Options::out_dir)
        .def_readwrite("checkpoint_every", &Trainer::Options::checkpoint_every)
        .def_readwrite("eval_every", &Trainer::Options::eval_every);

    py::class_<IterationMetrics>(m, "IterationMetrics")
        .def_readonly("iteration", &IterationMetrics::iteration)
        .def_readonly("env_steps", &IterationMetrics::env_steps)
        .def_readonly("episodes", &IterationMetrics::episodes)
        .def_property_readonly("mean_return",
                               [](const IterationMetrics& m_) {
                                   return std::vector<double>(m_.mean_return.begin(),
                                                              m_.mean_return.end());
                               })
        .def_readonly("policy_loss", &IterationMetrics::policy_loss)
        .def_readonly("value_loss", &IterationMetrics::value_loss)
        .def_readonly("entropy", &IterationMetrics::entropy)
        .def_readonly("total_loss", &IterationMetrics::total_loss);

    py::class_<Trainer>(m, "Trainer")
        .def(py::init<Trainer::Options>())
        .def("run", &Trainer::run, py::call_guard<py::gil_scoped_release>())
        .def("collect", &Trainer::collect, py::call_guard<py::gil_scoped_release>())
        .def_property_readonly("iteration", &Trainer::iteration)
        .def_property_readonly("env_steps", &Trainer::env_steps)
        .def_property_readonly("params",
                               [](Trainer& t) -> PolicySet<float>& { return t.params(); },
                               py::return_value_policy::reference_internal)
        .def("save", &Trainer::save);

    py::class_<RunOptions>(m, "RunOptions")
        .def(py::init<>())
        .def_readwrite("trainer", &RunOptions::trainer)
        .def_readwrite("eval_games", &RunOptions::eval_games)
        .def_readwrite("eval_turn_limit", &RunOptions::eval_turn_limit)
        .def_readwrite("eval_deterministic", &RunOptions::eval_deterministic);
    m.def("run_training", &run_training, py::call_guard<py::gil_scoped_release>());

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("games", &EvalReport::games)
        .def_readonly("wins", &EvalReport::wins)
        .def_readonly("truncations", &EvalReport::truncations)
        .def_readonly("win_rate_incl", &EvalReport::win_rate_incl)
        .def_readonly("win_rate_decided", &EvalReport::win_rate_decided)
        .def_readonly("lengths", &EvalReport::lengths)
        .def_readonly("mean_length", &EvalReport::mean_length)
        .def_readonly("mean_winning_length", &EvalReport::mean_winning_length)
        .def_readonly("mean_reward", &EvalReport::mean_reward);

    m.def("evaluate_vs_random",
          [](const Board& b, const PolicySet<float>& ps, int games, int turn_limit,
             uint64_t seed, const RewardScheme& scheme, bool deterministic) {
              return evaluate_vs_random(b, ps, games, turn_limit, seed, scheme, deterministic);
          },
          py::arg("board"), py::arg("params"), py::arg("games") = 30,
          py::arg("turn_limit") = 150, py::arg("seed") = 1,
          py::arg("scheme") = RewardScheme{}, py::arg("deterministic") = false,
          py::call_guard<py::gil_scoped_release>());

    py::class_<HeadToHeadReport>(m, "HeadToHeadReport")
        .def_readonly("games", &HeadToHeadReport::games)
        .def_readonly("truncations", &HeadToHeadReport::truncations)
        .def_property_readonly("wins",
                               [](const HeadToHeadReport& r) {
                                   return std::vector<int>(r.wins.begin(), r.wins.end());
                               })
        .def_property_readonly("win_share", [](const HeadToHeadReport& r) {
            return std::vector<double>(r.win_share.begin(), r.win_share.end());
        });

    m.def("head_to_head",
          [](const Board& b, const PolicySet<float>& a0, const PolicySet<float>& a1,
             const PolicySet<float>& a2, int games, int turn_limit, uint64_t seed,
             const RewardScheme& scheme, bool deterministic) {
              return head_to_head(b, {&a0, &a1, &a2}, games, turn_limit, seed, scheme,
                                  deterministic);
          },
          py::arg("board"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("games") = 20,
          py::arg("turn_limit") = 200, py::arg("seed") = 1,
          py::arg("scheme") = RewardScheme{}, py::arg("deterministic") = false,
          py::call_guard<py::gil_scoped_release>());

    py::class_<HeatmapGrid>(m, "HeatmapGrid")
        .def_readonly("n", &HeatmapGrid::n)
        .def_readonly("games", &HeatmapGrid::games)
        .def_readonly("snapshot_turns", &HeatmapGrid::snapshot_turns)
        .def("grid",
             [](const HeatmapGrid& g, int snapshot_idx) {
                 const auto& c = g.counts.at(snapshot_idx);
                 int dim = 4 * g.n + 1;
                 py::array_t<int64_t> out({dim, dim});
                 std::copy(c.begin(), c.end(), out.mutable_data());
                 return out;
             });

    m.def("collect_heatmaps", &collect_heatmaps, py::arg("board"), py::arg("params"),
          py::arg("games"), py::arg("snapshot_turns"), py::arg("turn_limit") = 150,
          py::arg("seed") = 1, py::arg("scheme") = RewardScheme{},
          py::arg("deterministic") = false, py::call_guard<py::gil_scoped_release>());
    m.def("mass_in_target", &mass_in_target);
}
