#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "checkers/env.hpp"
#include "checkers/nn.hpp"

namespace checkers {

struct PpoConfig {
    float clip = 0.2f;
    float gamma = 0.99f;
    float lam = 0.95f;
    float entropy_coef = 0.0f;
    float value_coef = 0.5f;
    int epochs = 4;
    int minibatch = 128;
    int steps_per_iter = 4000;
    int iterations = 100;
    AdamConfig adam{};
};

struct Transition {
    int8_t agent = 0;
    bool done = false;      // episode ended (win or truncation) at this transition
    bool boundary = false;  // GAE cut: done or end of collection
    int action = 0;
    float logprob = 0, value = 0, reward = 0;
    float next_value = 0;  // bootstrap when boundary (0 for true terminals)
    float advantage = 0, ret = 0;
    std::vector<float> obs;
    std::vector<uint8_t> mask;
};

// Generalized advantage estimation over one agent's ordered transitions.
// Boundaries stop the lambda chain; next_value supplies the bootstrap there.
inline void compute_gae(const std::vector<Transition*>& stream, float gamma, float lam) {
    float next_adv = 0;
    for (int t = static_cast<int>(stream.size()) - 1; t >= 0; --t) {
        Transition& x = *stream[t];
        bool last = t + 1 == static_cast<int>(stream.size());
        float nv = (x.boundary || last) ? x.next_value : stream[t + 1]->value;
        float delta = x.reward + gamma * nv - x.value;
        x.advantage = x.boundary ? delta : delta + gamma * lam * next_adv;
        x.ret = x.advantage + x.value;
        next_adv = x.advantage;
    }
}

// Plain-array variant: dones mark true terminals (bootstrap 0); the sequence
// end bootstraps with `tail_value` unless the last entry is done.
std::pair<std::vector<float>, std::vector<float>> compute_gae(
    const std::vector<float>& rewards, const std::vector<float>& values,
    const std::vector<uint8_t>& dones, float gamma, float lam, float tail_value = 0.0f);

struct LossStats {
    double policy_loss = 0, value_loss = 0, entropy = 0, total = 0;
    int samples = 0;

    void accumulate(const LossStats& o) {
        policy_loss += o.policy_loss * o.samples;
        value_loss += o.value_loss * o.samples;
        entropy += o.entropy * o.samples;
        total += o.total * o.samples;
        samples += o.samples;
    }
    void finish() {
        if (!samples) return;
        policy_loss /= samples;
        value_loss /= samples;
        entropy /= samples;
        total /= samples;
    }
};

// Clipped-surrogate PPO loss over one minibatch, with analytic gradients
// accumulated into `grads` (same shape as `ps`). Advantages are normalized
// across the minibatch. Forward passes run one sample at a time through the
// same kernels the rollout uses, so an unchanged policy reproduces rollout
// log-probabilities exactly; weight-gradient reductions are batched.
template <typename T>
LossStats ppo_minibatch_grads(const PolicySet<T>& ps, const std::vector<const Transition*>& mb,
                              const PpoConfig& cfg, PolicySet<T>& grads,
                              std::vector<uint8_t>* touched_heads = nullptr,
                              std::vector<uint8_t>* touched_encs = nullptr) {
    const int B = static_cast<int>(mb.size());
    if (B == 0) throw std::invalid_argument("empty minibatch");

    double mean = 0;
    for (const Transition* t : mb) mean += t->advantage;
    mean /= B;
    double var = 0;
    for (const Transition* t : mb) {
        double d = t->advantage - mean;
        var += d * d;
    }
    double adv_scale = 1.0 / (std::sqrt(var / B) + 1e-8);

    std::array<std::vector<int>, 6> groups;
    for (int i = 0; i < B; ++i) groups[ps.head_index(mb[i]->agent)].push_back(i);

    LossStats stats;
    stats.samples = B;
    const T invB = T(1) / static_cast<T>(B);

    for (int g = 0; g < 6; ++g) {
        const auto& idx = groups[g];
        if (idx.empty()) continue;
        const int Bg = static_cast<int>(idx.size());
        const int enc_i = ps.enc_index(mb[idx[0]]->agent);
        const Encoder<T>& enc = ps.enc[enc_i];
        const LinearHead<T>& pi = ps.pi[g];
        const LinearHead<T>& vf = ps.vf[g];

        const int obs_dim = static_cast<int>(enc.W1.cols());
        const int act_dim = static_cast<int>(pi.W.rows());
        Mat<T> X(obs_dim, Bg), Z1(kHidden, Bg), Z2(kHidden, Bg), H(kHidden, Bg);
        Mat<T> dLogits = Mat<T>::Zero(act_dim, Bg);
        Mat<T> dV(1, Bg);

        for (int c = 0; c < Bg; ++c) {
            const Transition& tr = *mb[idx[c]];
            Mat<T> x(obs_dim, 1);
            for (int i = 0; i < obs_dim; ++i) x(i, 0) = static_cast<T>(tr.obs[i]);
            EncoderCache<T> cache;
            encoder_forward(enc, x, cache);
            Vec<T> logits = head_forward(pi, cache.h).col(0);
            T value = head_forward(vf, cache.h)(0, 0);
            X.col(c) = cache.x.col(0);
            Z1.col(c) = cache.z1.col(0);
            Z2.col(c) = cache.z2.col(0);
            H.col(c) = cache.h.col(0);

            auto dist = MaskedCategorical<T>::make(logits, tr.mask);
            T lp_new = dist.logp[tr.action];
            T entropy = dist.entropy();
            T adv = static_cast<T>((tr.advantage - mean) * adv_scale);
            T ratio = std::exp(lp_new - static_cast<T>(tr.logprob));
            T unclipped = ratio * adv;
            T clipped = std::clamp(ratio, 1 - static_cast<T>(cfg.clip),
                                   1 + static_cast<T>(cfg.clip)) * adv;
            T surr = std::min(unclipped, clipped);
            T verr = value - static_cast<T>(tr.ret);

            stats.policy_loss += -static_cast<double>(surr) / B;
            stats.value_loss += static_cast<double>(verr * verr) / B;
            stats.entropy += static_cast<double>(entropy) / B;

            // d(-surr)/dlogp: active only on the unclipped branch.
            T dlp = unclipped <= clipped ? -ratio * adv * invB : T(0);
            T ec = static_cast<T>(cfg.entropy_coef) * invB;
            for (int a = 0; a < act_dim; ++a) {
                if (!tr.mask[a]) continue;
                T p = dist.prob[a];
                T d = dlp * ((a == tr.action ? T(1) : T(0)) - p);
                d += ec * p * (dist.logp[a] + entropy);
                dLogits(a, c) = d;
            }
            dV(0, c) = 2 * static_cast<T>(cfg.value_coef) * verr * invB;
        }

        EncoderCache<T> cache;
        cache.x = std::move(X);
        cache.z1 = std::move(Z1);
        cache.z2 = std::move(Z2);
        cache.h = std::move(H);
        Mat<T> dH = Mat<T>::Zero(kHidden, Bg);
        head_backward(pi, cache.h, dLogits, grads.pi[g], dH);
        head_backward(vf, cache.h, dV, grads.vf[g], dH);
        encoder_backward(enc, cache, dH, grads.enc[enc_i]);
        if (touched_heads) (*touched_heads)[g] = 1;
        if (touched_encs) (*touched_encs)[enc_i] = 1;
    }

    stats.total = stats.policy_loss + cfg.value_coef * stats.value_loss -
                  cfg.entropy_coef * stats.entropy;
    return stats;
}

struct IterationMetrics {
    int iteration = 0;
    int64_t env_steps = 0;
    int episodes = 0;
    std::array<double, 6> mean_return{};
    double policy_loss = 0, value_loss = 0, entropy = 0, total_loss = 0;
};

// Self-play PPO trainer: one environment, deterministic given the seed, with
// per-iteration RNG streams so interrupted runs resume exactly.
class Trainer {
public:
    struct Options {
        int n = 2;
        Sharing sharing = Sharing::FullyShared;
        RewardScheme scheme{};
        PpoConfig ppo{};
        int turn_limit = -1;  // default_turn_limit(n) when <= 0
        uint64_t seed = 1;
        std::string out_dir;      // empty: keep everything in memory
        int checkpoint_every = 1;
        int eval_every = 1;
    };
    using EvalHook =
        std::function<void(int iteration, int64_t env_steps, const PolicySet<float>&)>;

    explicit Trainer(Options opt);

    void set_eval_hook(EvalHook hook) { eval_hook_ = std::move(hook); }
    void run();

    // Single-iteration pieces, exposed for tests.
    std::vector<Transition> collect(int iteration);
    IterationMetrics update(std::vector<Transition>& batch, int iteration);

    const Options& options() const { return opt_; }
    const PolicySet<float>& params() const { return params_; }
    PolicySet<float>& params() { return params_; }
    const std::vector<AdamState<float>>& adam() const { return adam_; }
    int iteration() const { return iteration_; }
    int64_t env_steps() const { return env_steps_; }
    int last_episodes() const { return last_episodes_; }
    const std::array<double, 6>& last_returns() const { return last_returns_; }

    void save(const std::string& path) const;

private:
    void write_metrics_row(const IterationMetrics& m);

    Options opt_;
    Env env_;
    PolicySet<float> params_;
    std::vector<AdamState<float>> adam_;
    EvalHook eval_hook_;
    int iteration_ = 0;
    int64_t env_steps_ = 0;
    int last_episodes_ = 0;
    std::array<double, 6> last_returns_{};
};

}  // namespace checkers
