#include "checkers/run.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace checkers {

namespace fs = std::filesystem;

std::string describe_config(const RunOptions& opt) {
    const Trainer::Options& t = opt.trainer;
    std::ostringstream os;
    os << std::setprecision(9);
    os << "n=" << t.n << '\n'
       << "sharing=" << sharing_name(t.sharing) << '\n'
       << "scheme=" << reward_variant_name(t.scheme.variant) << '\n'
       << "iterations=" << t.ppo.iterations << '\n'
       << "steps=" << t.ppo.steps_per_iter << '\n'
       << "seed=" << t.seed << '\n'
       << "turn-limit=" << (t.turn_limit > 0 ? t.turn_limit : default_turn_limit(t.n)) << '\n'
       << "clip=" << t.ppo.clip << '\n'
       << "gamma=" << t.ppo.gamma << '\n'
       << "lam=" << t.ppo.lam << '\n'
       << "entropy-coef=" << t.ppo.entropy_coef << '\n'
       << "value-coef=" << t.ppo.value_coef << '\n'
       << "epochs=" << t.ppo.epochs << '\n'
       << "minibatch=" << t.ppo.minibatch << '\n'
       << "lr=" << t.ppo.adam.lr << '\n'
       << "checkpoint-every=" << t.checkpoint_every << '\n'
       << "eval-every=" << t.eval_every << '\n'
       << "eval-games=" << opt.eval_games << '\n'
       << "eval-turn-limit=" << opt.eval_turn_limit << '\n'
       << "eval-deterministic=" << (opt.eval_deterministic ? 1 : 0) << '\n';
    return os.str();
}

bool run_training(const RunOptions& opt) {
    const std::string& dir = opt.trainer.out_dir;
    if (dir.empty()) throw std::invalid_argument("run_training needs an output directory");
    std::string config = describe_config(opt);

    fs::create_directories(dir);
    std::string done_path = dir + "/DONE";
    if (fs::exists(done_path)) {
        std::ifstream is(done_path);
        std::stringstream buf;
        buf << is.rdbuf();
        if (buf.str() == config) return false;
        throw std::runtime_error("output directory holds a completed run with a different "
                                 "configuration: " + dir);
    }
    {
        std::ofstream os(dir + "/config.ini");
        os << config;
    }
    fs::create_directories(dir + "/eval");
    fs::create_directories(dir + "/heatmaps");

    Trainer trainer(opt.trainer);
    if (opt.eval_games > 0) {
        std::string summary = dir + "/eval/summary.tsv";
        uint64_t seed = opt.trainer.seed;
        int games = opt.eval_games, limit = opt.eval_turn_limit;
        bool det = opt.eval_deterministic;
        RewardScheme scheme = opt.trainer.scheme;
        trainer.set_eval_hook([summary, seed, games, limit, det, scheme,
                               board = Board(opt.trainer.n)](int iter, int64_t steps,
                                                             const PolicySet<float>& ps) {
            EvalReport rep = evaluate_vs_random(
                board, ps, games, limit, derive_seed(seed, 0xEA10000ull + iter), scheme, det);
            append_eval_summary(summary, iter, steps, rep);
        });
    }
    trainer.run();

    std::ofstream os(done_path);
    os << config;
    return true;
}

void append_eval_summary(const std::string& path, int iteration, int64_t env_steps,
                         const EvalReport& rep) {
    bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
    std::ofstream os(path, std::ios::app);
    if (fresh)
        os << "# iteration\tenv_steps\tgames\twins\ttruncations\twin_rate_incl\t"
              "win_rate_decided\tmean_length\tmean_winning_length\tmean_reward\n";
    os << std::setprecision(9) << iteration << '\t' << env_steps << '\t' << rep.games << '\t'
       << rep.wins << '\t' << rep.truncations << '\t' << rep.win_rate_incl << '\t'
       << rep.win_rate_decided << '\t' << rep.mean_length << '\t' << rep.mean_winning_length
       << '\t' << rep.mean_reward << '\n';
}

std::vector<EvalSummaryRow> read_eval_summary(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read eval summary: " + path);
    std::vector<EvalSummaryRow> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        EvalSummaryRow r;
        ls >> r.iteration >> r.env_steps >> r.games >> r.wins >> r.truncations >>
            r.win_rate_incl >> r.win_rate_decided >> r.mean_length >> r.mean_winning_length >>
            r.mean_reward;
        if (!ls.fail()) rows.push_back(r);
    }
    return rows;
}

}  // namespace checkers
