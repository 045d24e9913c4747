#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "checkers/eval.hpp"
#include "checkers/run.hpp"
#include "checkers/serve.hpp"

using namespace checkers;

namespace {

void write_metadata(const std::string& out_dir, const std::string& what) {
    std::ofstream os(out_dir + "/metadata.txt", std::ios::app);
    auto now = std::chrono::system_clock::now();
    os << what << ' '
       << std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()
       << '\n';
}

Checkpoint load_for_play(const std::string& path) {
    Checkpoint ck = load_checkpoint(path);
    return ck;
}

std::vector<int> parse_turn_list(const std::string& csv) {
    std::vector<int> turns;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) turns.push_back(std::stoi(tok));
    return turns;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Six-player Chinese Checkers engine with PPO self-play training"};
    app.require_subcommand(1);

    RunOptions run;
    std::string sharing = "fully-shared", scheme = "positive-sum";
    auto* train = app.add_subcommand("train", "Run PPO self-play training");
    train->set_config("--config", "", "Flat key=value config file; flags override it");
    train->add_option("--n", run.trainer.n, "Board size N")->capture_default_str();
    train->add_option("--sharing", sharing,
                      "Parameter sharing: independent | shared-encoder | fully-shared")
        ->capture_default_str();
    train->add_option("--scheme", scheme,
                      "Rewards: sparse | sparse-goal | sparse-move | positive-sum")
        ->capture_default_str();
    train->add_option("--iterations", run.trainer.ppo.iterations)->capture_default_str();
    train->add_option("--steps", run.trainer.ppo.steps_per_iter, "Env steps per iteration")
        ->capture_default_str();
    train->add_option("--seed", run.trainer.seed)->capture_default_str();
    train->add_option("--out", run.trainer.out_dir, "Run output directory")->required();
    train->add_option("--turn-limit", run.trainer.turn_limit,
                      "Completed-turn limit per game (default 200, 1000 for N>=4)");
    train->add_option("--clip", run.trainer.ppo.clip)->capture_default_str();
    train->add_option("--gamma", run.trainer.ppo.gamma)->capture_default_str();
    train->add_option("--lam", run.trainer.ppo.lam)->capture_default_str();
    train->add_option("--entropy-coef", run.trainer.ppo.entropy_coef)->capture_default_str();
    train->add_option("--value-coef", run.trainer.ppo.value_coef)->capture_default_str();
    train->add_option("--epochs", run.trainer.ppo.epochs)->capture_default_str();
    train->add_option("--minibatch", run.trainer.ppo.minibatch)->capture_default_str();
    train->add_option("--lr", run.trainer.ppo.adam.lr)->capture_default_str();
    train->add_option("--checkpoint-every", run.trainer.checkpoint_every)->capture_default_str();
    train->add_option("--eval-every", run.trainer.eval_every)->capture_default_str();
    train->add_option("--eval-games", run.eval_games, "Evaluation games per cadence (0 disables)")
        ->capture_default_str();
    train->add_option("--eval-turn-limit", run.eval_turn_limit)->capture_default_str();

    std::string ckpt_path, out_path;
    int games = 30, turn_limit = 150;
    uint64_t seed = 1;
    bool deterministic = false;
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint against 5 random agents");
    eval->add_option("--checkpoint", ckpt_path)->required();
    eval->add_option("--games", games)->capture_default_str();
    eval->add_option("--turn-limit", turn_limit)->capture_default_str();
    eval->add_option("--seed", seed)->capture_default_str();
    eval->add_flag("--deterministic", deterministic, "Argmax actions instead of sampling");
    eval->add_option("--out", out_path, "Report file (stdout summary either way)");

    std::string ckpt_a, ckpt_b, ckpt_c;
    int match_games = 20, match_turn_limit = 200;
    auto* match = app.add_subcommand("match", "Three-way head-to-head match, 2 seats each");
    match->add_option("--a", ckpt_a)->required();
    match->add_option("--b", ckpt_b)->required();
    match->add_option("--c", ckpt_c)->required();
    match->add_option("--games", match_games)->capture_default_str();
    match->add_option("--turn-limit", match_turn_limit)->capture_default_str();
    match->add_option("--seed", seed)->capture_default_str();
    match->add_flag("--deterministic", deterministic);
    match->add_option("--out", out_path);

    std::string turns_csv = "5,10,15,20";
    int heat_games = 100, heat_turn_limit = 150;
    auto* heatmap = app.add_subcommand("heatmap", "Peg-location frequency grids vs randoms");
    heatmap->add_option("--checkpoint", ckpt_path)->required();
    heatmap->add_option("--games", heat_games)->capture_default_str();
    heatmap->add_option("--turns", turns_csv, "Comma-separated snapshot turns")
        ->capture_default_str();
    heatmap->add_option("--turn-limit", heat_turn_limit)->capture_default_str();
    heatmap->add_option("--seed", seed)->capture_default_str();
    heatmap->add_flag("--deterministic", deterministic);
    heatmap->add_option("--out", out_path)->required();

    int perft_n = 2, perft_depth = 3;
    auto* perft = app.add_subcommand("perft", "Count legal submove sequences per depth");
    perft->add_option("--n", perft_n)->capture_default_str();
    perft->add_option("--depth", perft_depth)->capture_default_str();

    std::string log_path;
    int render_n = 2;
    auto* render = app.add_subcommand("render", "Replay a game log as text boards");
    render->add_option("--log", log_path)->required();
    render->add_option("--n", render_n)->capture_default_str();

    auto* serve = app.add_subcommand("serve", "Speak the JSON-lines env protocol on stdio");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            run.trainer.sharing = parse_sharing(sharing);
            run.trainer.scheme.variant = parse_reward_variant(scheme);
            std::filesystem::create_directories(run.trainer.out_dir);
            write_metadata(run.trainer.out_dir, "train-start");
            bool trained = run_training(run);
            write_metadata(run.trainer.out_dir, trained ? "train-end" : "train-cached");
            std::cout << (trained ? "training complete: " : "already complete: ")
                      << run.trainer.out_dir << '\n';
        } else if (*eval) {
            Checkpoint ck = load_for_play(ckpt_path);
            Board board(ck.n);
            EvalReport rep = evaluate_vs_random(board, ck.params, games, turn_limit, seed, {},
                                                deterministic);
            if (!out_path.empty()) write_eval_report(out_path, rep);
            std::cout << "games " << rep.games << "  wins " << rep.wins << "  truncations "
                      << rep.truncations << "  win_rate_incl " << rep.win_rate_incl
                      << "  win_rate_decided " << rep.win_rate_decided << "  mean_length "
                      << rep.mean_length << "  mean_reward " << rep.mean_reward << '\n';
        } else if (*match) {
            Checkpoint a = load_for_play(ckpt_a), b = load_for_play(ckpt_b),
                       c = load_for_play(ckpt_c);
            if (a.n != b.n || a.n != c.n)
                throw std::runtime_error("checkpoints disagree on board size");
            Board board(a.n);
            HeadToHeadReport rep = head_to_head(board, {&a.params, &b.params, &c.params},
                                                match_games, match_turn_limit, seed, {},
                                                deterministic);
            if (!out_path.empty())
                write_h2h_report(out_path, rep, {ckpt_a, ckpt_b, ckpt_c});
            for (int i = 0; i < 3; ++i)
                std::cout << static_cast<char>('a' + i) << " wins " << rep.wins[i] << " share "
                          << rep.win_share[i] << '\n';
            std::cout << "truncations " << rep.truncations << " of " << rep.games << '\n';
        } else if (*heatmap) {
            Checkpoint ck = load_for_play(ckpt_path);
            Board board(ck.n);
            HeatmapGrid grid = collect_heatmaps(board, ck.params, heat_games,
                                                parse_turn_list(turns_csv), heat_turn_limit,
                                                seed, {}, deterministic);
            write_heatmaps(out_path, grid);
            std::cout << "heatmaps written: " << out_path << '\n';
        } else if (*perft) {
            Board board(perft_n);
            GameState s(board, 1000000);
            for (int d = 1; d <= perft_depth; ++d)
                std::cout << "depth " << d << ": " << s.perft(d) << '\n';
        } else if (*render) {
            Board board(render_n);
            GameState s(board, 1000000);
            std::cout << render_board(s) << '\n';
            std::ifstream is(log_path);
            if (!is) throw std::runtime_error("cannot open log: " + log_path);
            std::string line;
            int lineno = 0;
            while (std::getline(is, line)) {
                ++lineno;
                if (line.empty() || line[0] == '#') continue;
                try {
                    int player = -1;
                    Submove m = parse_log_line(line, board, &player);
                    if (player != s.current())
                        throw std::invalid_argument("log player out of order");
                    s.apply(m);
                } catch (const std::exception& e) {
                    throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
                }
                std::cout << line << '\n' << render_board(s) << '\n';
                if (s.status() != Status::Running) break;
            }
            if (s.status() == Status::Won)
                std::cout << "winner: " << static_cast<char>('a' + s.winner()) << '\n';
        } else if (*serve) {
            return serve_session(std::cin, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
