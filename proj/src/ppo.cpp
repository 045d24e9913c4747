#include "checkers/ppo.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>

namespace checkers {

std::pair<std::vector<float>, std::vector<float>> compute_gae(
    const std::vector<float>& rewards, const std::vector<float>& values,
    const std::vector<uint8_t>& dones, float gamma, float lam, float tail_value) {
    const int n = static_cast<int>(rewards.size());
    std::vector<float> adv(n), ret(n);
    float next_adv = 0;
    for (int t = n - 1; t >= 0; --t) {
        bool boundary = dones[t] || t == n - 1;
        float nv = dones[t] ? 0.0f : (t == n - 1 ? tail_value : values[t + 1]);
        float delta = rewards[t] + gamma * nv - values[t];
        adv[t] = boundary ? delta : delta + gamma * lam * next_adv;
        ret[t] = adv[t] + values[t];
        next_adv = adv[t];
    }
    return {adv, ret};
}

namespace {

std::string checkpoint_path(const std::string& out_dir, int iteration) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "iter_%04d.ckpt", iteration);
    return out_dir + "/checkpoints/" + buf;
}

}  // namespace

Trainer::Trainer(Options opt)
    : opt_(std::move(opt)),
      env_(opt_.n, opt_.scheme, opt_.turn_limit > 0 ? opt_.turn_limit : -1) {
    Rng init_rng(derive_seed(opt_.seed, 0xA11));
    params_.init(opt_.n, opt_.sharing, env_.obs_dim(), env_.act_dim(), init_rng);
    auto ts = named_tensors(params_);
    adam_.resize(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) adam_[i].init_like(*ts[i].data);
}

std::vector<Transition> Trainer::collect(int iteration) {
    Rng rng(derive_seed(opt_.seed, 0x100000ull + static_cast<uint64_t>(iteration)));
    std::vector<Transition> batch;
    batch.reserve(opt_.ppo.steps_per_iter);
    std::array<int, 6> last_index;
    last_index.fill(-1);
    std::array<double, 6> ep_return{};
    last_episodes_ = 0;
    last_returns_ = {};
    env_.reset(0);

    auto bootstrap_value = [&](int agent) {
        Vec<float> logits;
        float v;
        policy_forward(params_, agent, env_.observation(agent), logits, v);
        return v;
    };

    for (int step_i = 0; step_i < opt_.ppo.steps_per_iter; ++step_i) {
        int p = env_.current();
        Transition tr;
        tr.agent = static_cast<int8_t>(p);
        tr.obs = env_.observation();
        tr.mask = env_.mask();
        Vec<float> logits;
        float value;
        policy_forward(params_, p, tr.obs, logits, value);
        auto dist = MaskedCategorical<float>::make(logits, tr.mask);
        int a = dist.sample(rng);
        tr.action = a;
        tr.logprob = dist.logp[a];
        tr.value = value;
        StepResult res = env_.step(a);
        tr.reward = res.rewards[p];
        ep_return[p] += res.rewards[p];
        batch.push_back(std::move(tr));
        last_index[p] = static_cast<int>(batch.size()) - 1;
        for (int q = 0; q < 6; ++q) {
            if (q == p || res.rewards[q] == 0) continue;
            ep_return[q] += res.rewards[q];
            if (last_index[q] >= 0) batch[last_index[q]].reward += res.rewards[q];
        }
        if (res.terminated || res.truncated) {
            for (int q = 0; q < 6; ++q) {
                if (last_index[q] < 0) continue;
                Transition& lt = batch[last_index[q]];
                lt.done = true;
                lt.boundary = true;
                lt.next_value = res.truncated ? bootstrap_value(q) : 0.0f;
            }
            ++last_episodes_;
            for (int q = 0; q < 6; ++q) last_returns_[q] += ep_return[q];
            ep_return = {};
            last_index.fill(-1);
            env_.reset(0);
        }
    }
    for (int q = 0; q < 6; ++q) {
        if (last_index[q] < 0 || batch[last_index[q]].boundary) continue;
        Transition& lt = batch[last_index[q]];
        lt.boundary = true;
        lt.next_value = bootstrap_value(q);
    }
    return batch;
}

IterationMetrics Trainer::update(std::vector<Transition>& batch, int iteration) {
    for (int q = 0; q < 6; ++q) {
        std::vector<Transition*> stream;
        for (auto& t : batch)
            if (t.agent == q) stream.push_back(&t);
        compute_gae(stream, opt_.ppo.gamma, opt_.ppo.lam);
    }

    Rng rng(derive_seed(opt_.seed, 0x200000ull + static_cast<uint64_t>(iteration)));
    std::vector<int> order(batch.size());
    std::iota(order.begin(), order.end(), 0);

    PolicySet<float> grads;
    grads.zero_like(params_);
    auto ts_params = named_tensors(params_);
    auto ts_grads = named_tensors(grads);
    const size_t pi_base = 4 * params_.enc.size();
    const size_t vf_base = pi_base + 2 * params_.pi.size();

    LossStats agg;
    for (int epoch = 0; epoch < opt_.ppo.epochs; ++epoch) {
        for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
            std::swap(order[i], order[rng.uniform_int(i + 1)]);
        for (size_t start = 0; start < order.size();
             start += static_cast<size_t>(opt_.ppo.minibatch)) {
            size_t end = std::min(order.size(), start + opt_.ppo.minibatch);
            std::vector<const Transition*> mb;
            mb.reserve(end - start);
            for (size_t k = start; k < end; ++k) mb.push_back(&batch[order[k]]);

            std::vector<uint8_t> th(6, 0), te(6, 0);
            agg.accumulate(ppo_minibatch_grads(params_, mb, opt_.ppo, grads, &th, &te));

            std::vector<uint8_t> touched(ts_params.size(), 0);
            for (size_t e = 0; e < params_.enc.size(); ++e)
                if (te[e])
                    for (size_t k = 0; k < 4; ++k) touched[4 * e + k] = 1;
            for (size_t h = 0; h < params_.pi.size(); ++h) {
                if (!th[h]) continue;
                touched[pi_base + 2 * h] = touched[pi_base + 2 * h + 1] = 1;
                touched[vf_base + 2 * h] = touched[vf_base + 2 * h + 1] = 1;
            }
            for (size_t i = 0; i < ts_params.size(); ++i) {
                if (!touched[i]) continue;
                adam_step(*ts_params[i].data, *ts_grads[i].data, adam_[i], opt_.ppo.adam);
                ts_grads[i].data->setZero();
            }
        }
    }
    agg.finish();

    IterationMetrics m;
    m.iteration = iteration + 1;
    m.env_steps = static_cast<int64_t>(iteration + 1) * opt_.ppo.steps_per_iter;
    m.episodes = last_episodes_;
    for (int q = 0; q < 6; ++q)
        m.mean_return[q] = last_episodes_ ? last_returns_[q] / last_episodes_ : 0.0;
    m.policy_loss = agg.policy_loss;
    m.value_loss = agg.value_loss;
    m.entropy = agg.entropy;
    m.total_loss = agg.total;
    return m;
}

void Trainer::write_metrics_row(const IterationMetrics& m) {
    if (opt_.out_dir.empty()) return;
    std::string path = opt_.out_dir + "/metrics.log";
    bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream os(path, std::ios::app);
    if (fresh)
        os << "# iteration env_steps episodes return0 return1 return2 return3 return4 "
              "return5 policy_loss value_loss entropy total_loss\n";
    os << m.iteration << ' ' << m.env_steps << ' ' << m.episodes;
    os << std::setprecision(9);
    for (double r : m.mean_return) os << ' ' << r;
    os << ' ' << m.policy_loss << ' ' << m.value_loss << ' ' << m.entropy << ' '
       << m.total_loss << '\n';
}

void Trainer::save(const std::string& path) const {
    Checkpoint ck;
    ck.n = opt_.n;
    ck.sharing = opt_.sharing;
    ck.iteration = iteration_;
    ck.env_steps = env_steps_;
    ck.seed = opt_.seed;
    ck.params = params_;
    ck.adam = adam_;
    ck.has_adam = true;
    save_checkpoint(path, ck);
}

void Trainer::run() {
    namespace fs = std::filesystem;
    int start_iter = 0;
    if (!opt_.out_dir.empty()) {
        fs::create_directories(opt_.out_dir + "/checkpoints");
        for (int i = opt_.ppo.iterations; i >= 0; --i) {
            std::string p = checkpoint_path(opt_.out_dir, i);
            if (!fs::exists(p)) continue;
            Checkpoint ck = load_checkpoint(p);
            if (!ck.has_adam) throw std::runtime_error("cannot resume from " + p);
            params_ = ck.params;
            adam_ = ck.adam;
            iteration_ = ck.iteration;
            env_steps_ = ck.env_steps;
            start_iter = ck.iteration;
            break;
        }
        if (start_iter == 0) save(checkpoint_path(opt_.out_dir, 0));
    }
    for (int it = start_iter; it < opt_.ppo.iterations; ++it) {
        auto batch = collect(it);
        env_steps_ = static_cast<int64_t>(it + 1) * opt_.ppo.steps_per_iter;
        IterationMetrics m = update(batch, it);
        iteration_ = it + 1;
        write_metrics_row(m);
        if (!opt_.out_dir.empty() &&
            (iteration_ % opt_.checkpoint_every == 0 || iteration_ == opt_.ppo.iterations))
            save(checkpoint_path(opt_.out_dir, iteration_));
        if (eval_hook_ && (iteration_ % opt_.eval_every == 0 || iteration_ == opt_.ppo.iterations))
            eval_hook_(iteration_, env_steps_, params_);
    }
}

}  // namespace checkers
