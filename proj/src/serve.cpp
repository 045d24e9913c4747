#include "checkers/serve.hpp"

#include <json.hpp>

#include <istream>
#include <memory>
#include <ostream>
#include <string>

#include "checkers/env.hpp"

namespace checkers {

namespace {

using nlohmann::json;

constexpr int kProtocolVersion = 1;

json hex_json(const Hex& h) { return json{{"q", h.q}, {"r", h.r}}; }

json obs_json(const Env& env) {
    json arr = json::array();
    for (float v : env.observation()) arr.push_back(static_cast<int>(v));
    return arr;
}

json mask_json(const Env& env) {
    json arr = json::array();
    for (uint8_t b : env.mask()) arr.push_back(static_cast<int>(b));
    return arr;
}

const char* status_name(Status s) {
    switch (s) {
        case Status::Running: return "running";
        case Status::Won: return "won";
        case Status::Truncated: return "truncated";
    }
    return "?";
}

void attach_view(json& res, const Env& env) {
    res["agent"] = env.current();
    res["status"] = status_name(env.state().status());
    if (env.running()) {
        res["obs"] = obs_json(env);
        res["mask"] = mask_json(env);
    }
    if (env.state().status() == Status::Won) res["winner"] = env.state().winner();
}

json handle(std::unique_ptr<Env>& env, const json& req) {
    std::string cmd = req.at("cmd").get<std::string>();
    json res{{"ok", true}};
    if (cmd == "reset") {
        int n = req.value("n", 2);
        if (n < 1 || n > 10) throw std::invalid_argument("n out of range");
        RewardScheme scheme{parse_reward_variant(req.value("scheme", "positive-sum"))};
        int turn_limit = req.value("turn_limit", default_turn_limit(n));
        env = std::make_unique<Env>(n, scheme, turn_limit);
        res["protocol"] = kProtocolVersion;
        res["n"] = n;
        res["seed"] = req.value("seed", 0);
        res["obs_dim"] = env->obs_dim();
        res["act_dim"] = env->act_dim();
        res["turn_limit"] = turn_limit;
        attach_view(res, *env);
        return res;
    }
    if (!env) throw std::logic_error("no environment; send reset first");
    if (cmd == "step") {
        StepResult sr = env->step(req.at("action").get<int>());
        res["rewards"] = sr.rewards;
        res["terminated"] = sr.terminated;
        res["truncated"] = sr.truncated;
        attach_view(res, *env);
    } else if (cmd == "observe") {
        res["agent"] = env->current();
        res["obs"] = obs_json(*env);
    } else if (cmd == "mask") {
        res["agent"] = env->current();
        res["mask"] = mask_json(*env);
    } else if (cmd == "state") {
        const GameState& s = env->state();
        const Board& b = s.board();
        res["n"] = b.size();
        res["current"] = s.current();
        res["turn_count"] = s.turn_count();
        res["submove_count"] = s.submove_count();
        res["turn_limit"] = s.turn_limit();
        res["status"] = status_name(s.status());
        if (s.status() == Status::Won) res["winner"] = s.winner();
        json occ = json::array();
        for (int c = 0; c < b.cell_count(); ++c)
            if (s.owner(c) >= 0) {
                json e = hex_json(b.cell(c));
                e["player"] = s.owner(c);
                occ.push_back(e);
            }
        res["occupancy"] = occ;
        res["active"] = s.active_peg() >= 0 ? hex_json(b.cell(s.active_peg())) : json();
        json origins = json::array();
        for (int c : s.jump_origins()) origins.push_back(hex_json(b.cell(c)));
        res["origins"] = origins;
    } else {
        throw std::invalid_argument("unknown cmd: " + cmd);
    }
    return res;
}

}  // namespace

int serve_session(std::istream& in, std::ostream& out) {
    std::unique_ptr<Env> env;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json res;
        try {
            res = handle(env, json::parse(line));
        } catch (const std::exception& e) {
            res = json{{"ok", false}, {"error", e.what()}};
        }
        out << res.dump() << '\n' << std::flush;
    }
    return 0;
}

}  // namespace checkers
