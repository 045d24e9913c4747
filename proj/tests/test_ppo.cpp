#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "checkers/ppo.hpp"

using namespace checkers;
namespace fs = std::filesystem;

namespace {

std::string read_bytes(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

Trainer::Options tiny_options(uint64_t seed, int iterations, const std::string& out_dir) {
    Trainer::Options opt;
    opt.n = 1;
    opt.sharing = Sharing::FullyShared;
    opt.ppo.steps_per_iter = 240;
    opt.ppo.minibatch = 120;
    opt.ppo.epochs = 2;
    opt.ppo.iterations = iterations;
    opt.seed = seed;
    opt.out_dir = out_dir;
    return opt;
}

}  // namespace

TEST_CASE("gae covers terminals, td errors, and monte carlo limits") {
    auto [adv1, ret1] = compute_gae({2.0f}, {0.5f}, {1}, 0.99f, 0.95f);
    CHECK(adv1[0] == doctest::Approx(1.5f));
    CHECK(ret1[0] == doctest::Approx(2.0f));

    std::vector<float> r = {1, 2, 3}, v = {0.5f, 1.0f, 1.5f};
    std::vector<uint8_t> d = {0, 0, 1};
    auto [adv0, ret0] = compute_gae(r, v, d, 0.9f, 0.0f);
    CHECK(adv0[2] == doctest::Approx(1.5f));
    CHECK(adv0[1] == doctest::Approx(2.35f));
    CHECK(adv0[0] == doctest::Approx(1.4f));
    CHECK(ret0[0] == doctest::Approx(1.9f));

    auto [advm, retm] = compute_gae(r, v, d, 1.0f, 1.0f);
    CHECK(advm[2] == doctest::Approx(3.0f - 1.5f));
    CHECK(advm[1] == doctest::Approx(2.0f + 3.0f - 1.0f));
    CHECK(advm[0] == doctest::Approx(1.0f + 2.0f + 3.0f - 0.5f));
    CHECK(retm[0] == doctest::Approx(6.0f));

    auto [advt, rett] = compute_gae({1, 1}, {0, 0}, {0, 0}, 0.5f, 0.5f, 2.0f);
    CHECK(advt[1] == doctest::Approx(2.0f));
    CHECK(advt[0] == doctest::Approx(1.5f));
    CHECK(rett[0] == doctest::Approx(1.5f));
}

TEST_CASE("gae pointer variant cuts the chain at boundaries") {
    std::vector<Transition> ts(3);
    ts[0].reward = 1;
    ts[0].value = 0.2f;
    ts[1].reward = 2;
    ts[1].value = 0.4f;
    ts[1].boundary = true;
    ts[1].next_value = 0.7f;
    ts[2].reward = 3;
    ts[2].value = 0.6f;
    ts[2].next_value = 0.9f;
    std::vector<Transition*> stream = {&ts[0], &ts[1], &ts[2]};
    compute_gae(stream, 0.5f, 0.5f);
    CHECK(ts[2].advantage == doctest::Approx(2.85f));
    CHECK(ts[1].advantage == doctest::Approx(1.95f));
    CHECK(ts[0].advantage == doctest::Approx(1.0f + 0.25f * 1.95f));
    CHECK(ts[0].ret == doctest::Approx(ts[0].advantage + 0.2f));
}

TEST_CASE("collection is reproducible and reproduces its own log-probabilities") {
    Trainer t1(tiny_options(5, 1, "")), t2(tiny_options(5, 1, ""));
    auto b1 = t1.collect(0);
    auto b2 = t2.collect(0);
    REQUIRE(b1.size() == 240);
    REQUIRE(b2.size() == 240);
    for (size_t i = 0; i < b1.size(); ++i) {
        CHECK(b1[i].action == b2[i].action);
        CHECK(b1[i].reward == b2[i].reward);
        CHECK(b1[i].logprob == b2[i].logprob);
    }

    for (const Transition& tr : b1) {
        REQUIRE(tr.mask[tr.action] == 1);
        REQUIRE(std::isfinite(tr.logprob));
        CHECK(tr.logprob <= 0.0f);
        if (tr.done) CHECK(tr.boundary);

        Vec<float> logits;
        float value;
        policy_forward(t1.params(), tr.agent, tr.obs, logits, value);
        auto dist = MaskedCategorical<float>::make(logits, tr.mask);
        CHECK(dist.logp[tr.action] == tr.logprob);
        CHECK(value == tr.value);
    }

    for (int agent = 0; agent < 6; ++agent) {
        const Transition* last = nullptr;
        for (const Transition& tr : b1)
            if (tr.agent == agent) last = &tr;
        if (last) CHECK(last->boundary);
    }
}

TEST_CASE("an unchanged policy keeps the clip inactive") {
    Trainer t(tiny_options(9, 1, ""));
    auto batch = t.collect(0);
    for (int agent = 0; agent < 6; ++agent) {
        std::vector<Transition*> stream;
        for (auto& tr : batch)
            if (tr.agent == agent) stream.push_back(&tr);
        compute_gae(stream, 0.99f, 0.95f);
    }
    std::vector<const Transition*> mb;
    for (size_t i = 0; i < 128 && i < batch.size(); ++i) mb.push_back(&batch[i]);

    PpoConfig tight, loose;
    tight.clip = 0.2f;
    loose.clip = 0.75f;
    PolicySet<float> ga, gb;
    ga.zero_like(t.params());
    gb.zero_like(t.params());
    auto sa = ppo_minibatch_grads(t.params(), mb, tight, ga);
    auto sb = ppo_minibatch_grads(t.params(), mb, loose, gb);

    CHECK(std::abs(sa.policy_loss) < 1e-5);
    CHECK(sa.policy_loss == sb.policy_loss);
    CHECK(sa.value_loss == sb.value_loss);
    auto ta = named_tensors(ga), tb = named_tensors(gb);
    for (size_t i = 0; i < ta.size(); ++i) CHECK(*ta[i].data == *tb[i].data);
}

TEST_CASE("minibatch gradients match finite differences of the loss") {
    const int obs_dim = 10, act_dim = 7, B = 8;
    Rng rng(61);
    PolicySet<double> ps;
    ps.init(1, Sharing::FullyShared, obs_dim, act_dim, rng);

    PpoConfig cfg;
    cfg.clip = 0.2f;
    cfg.entropy_coef = 0.07f;
    cfg.value_coef = 0.6f;

    const double raw_adv[B] = {1.2, -0.8, 0.5, -1.5, 2.0, -2.2, 0.9, -0.1};
    const double offset[B] = {0.0, -0.05, 0.1, -0.15, 0.5, -0.6, 0.05, -0.1};
    std::vector<Transition> ts(B);
    for (int i = 0; i < B; ++i) {
        Transition& tr = ts[i];
        tr.agent = static_cast<int8_t>(i % 6);
        tr.obs.resize(obs_dim);
        for (auto& o : tr.obs) o = static_cast<float>(rng.uniform());
        tr.mask.assign(act_dim, 0);
        for (int a = 0; a < act_dim; ++a)
            if (rng.uniform() < 0.6) tr.mask[a] = 1;
        tr.mask[i % act_dim] = 1;
        tr.action = i % act_dim;
        tr.advantage = static_cast<float>(raw_adv[i]);
        tr.ret = 0.3f * static_cast<float>(i) - 0.5f;

        Vec<double> logits;
        double value;
        policy_forward(ps, tr.agent, tr.obs, logits, value);
        auto dist = MaskedCategorical<double>::make(logits, tr.mask);
        tr.logprob = static_cast<float>(dist.logp[tr.action] - offset[i]);
    }
    std::vector<const Transition*> mb;
    for (auto& tr : ts) mb.push_back(&tr);

    double mean = 0;
    for (int i = 0; i < B; ++i) mean += ts[i].advantage;
    mean /= B;
    double var = 0;
    for (int i = 0; i < B; ++i) {
        double d = ts[i].advantage - mean;
        var += d * d;
    }
    double adv_scale = 1.0 / (std::sqrt(var / B) + 1e-8);

    auto total_loss = [&]() {
        double pl = 0, vl = 0, ent = 0;
        for (const Transition& tr : ts) {
            Vec<double> logits;
            double value;
            policy_forward(ps, tr.agent, tr.obs, logits, value);
            auto dist = MaskedCategorical<double>::make(logits, tr.mask);
            double adv = (tr.advantage - mean) * adv_scale;
            double ratio = std::exp(dist.logp[tr.action] - tr.logprob);
            double clipped = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip) * adv;
            double surr = std::min(ratio * adv, clipped);
            double verr = value - tr.ret;
            pl += -surr / B;
            vl += verr * verr / B;
            ent += dist.entropy() / B;
        }
        return pl + cfg.value_coef * vl - cfg.entropy_coef * ent;
    };

    PolicySet<double> grads;
    grads.zero_like(ps);
    auto stats = ppo_minibatch_grads(ps, mb, cfg, grads);
    CHECK(stats.total == doctest::Approx(total_loss()).epsilon(1e-9));

    auto tensors = named_tensors(ps);
    auto gtensors = named_tensors(grads);
    Rng pick(404);
    for (size_t ti = 0; ti < tensors.size(); ++ti) {
        Mat<double>& w = *tensors[ti].data;
        const Mat<double>& g = *gtensors[ti].data;
        int samples = static_cast<int>(std::min<Eigen::Index>(12, w.size()));
        for (int s = 0; s < samples; ++s) {
            Eigen::Index r = pick.uniform_int(static_cast<int>(w.rows()));
            Eigen::Index c = pick.uniform_int(static_cast<int>(w.cols()));
            double h = 1e-6, orig = w(r, c);
            w(r, c) = orig + h;
            double up = total_loss();
            w(r, c) = orig - h;
            double down = total_loss();
            w(r, c) = orig;
            double fd = (up - down) / (2 * h);
            CHECK(g(r, c) == doctest::Approx(fd).epsilon(1e-4).scale(1e-2));
        }
    }
}

TEST_CASE("gradients touch only the seats present in the minibatch") {
    Rng rng(17);
    PolicySet<float> ps;
    ps.init(1, Sharing::FullyIndependent, 12, 5, rng);

    std::vector<Transition> ts(6);
    for (int i = 0; i < 6; ++i) {
        Transition& tr = ts[i];
        tr.agent = static_cast<int8_t>(i < 3 ? 0 : 3);
        tr.obs.resize(12);
        for (auto& o : tr.obs) o = static_cast<float>(rng.uniform());
        tr.mask.assign(5, 1);
        tr.action = i % 5;
        tr.advantage = 0.5f * (i - 2);
        tr.ret = 0.1f * i;
        Vec<float> logits;
        float value;
        policy_forward(ps, tr.agent, tr.obs, logits, value);
        tr.logprob = MaskedCategorical<float>::make(logits, tr.mask).logp[tr.action];
    }
    std::vector<const Transition*> mb;
    for (auto& tr : ts) mb.push_back(&tr);

    PolicySet<float> grads;
    grads.zero_like(ps);
    std::vector<uint8_t> th(6, 0), te(6, 0);
    PpoConfig cfg;
    ppo_minibatch_grads(ps, mb, cfg, grads, &th, &te);

    CHECK(th == std::vector<uint8_t>{1, 0, 0, 1, 0, 0});
    CHECK(te == std::vector<uint8_t>{1, 0, 0, 1, 0, 0});
    for (int seat : {0, 3}) {
        CHECK(!grads.enc[seat].W1.isZero());
        CHECK(!grads.pi[seat].W.isZero());
        CHECK(!grads.vf[seat].W.isZero());
    }
    for (int seat : {1, 2, 4, 5}) {
        CHECK(grads.enc[seat].W1.isZero());
        CHECK(grads.enc[seat].b2.isZero());
        CHECK(grads.pi[seat].W.isZero());
        CHECK(grads.vf[seat].b.isZero());
    }
}

TEST_CASE("training runs are deterministic in the seed") {
    std::string da = "/tmp/ppo_det_a", db = "/tmp/ppo_det_b", dc = "/tmp/ppo_det_c";
    for (const auto& d : {da, db, dc}) fs::remove_all(d);

    Trainer a(tiny_options(7, 2, da)), b(tiny_options(7, 2, db)), c(tiny_options(8, 2, dc));
    a.run();
    b.run();
    c.run();
    CHECK(read_bytes(da + "/checkpoints/iter_0002.ckpt") ==
          read_bytes(db + "/checkpoints/iter_0002.ckpt"));

    Checkpoint ca = load_checkpoint(da + "/checkpoints/iter_0002.ckpt");
    Checkpoint cc = load_checkpoint(dc + "/checkpoints/iter_0002.ckpt");
    CHECK(ca.params.pi[0].W != cc.params.pi[0].W);
    CHECK(ca.iteration == 2);
    CHECK(ca.env_steps == 480);
    for (const auto& d : {da, db, dc}) fs::remove_all(d);
}

TEST_CASE("interrupted runs resume to identical checkpoints") {
    std::string dd = "/tmp/ppo_resume_full", de = "/tmp/ppo_resume_split";
    fs::remove_all(dd);
    fs::remove_all(de);

    Trainer full(tiny_options(21, 4, dd));
    full.run();

    Trainer half(tiny_options(21, 2, de));
    half.run();
    Trainer rest(tiny_options(21, 4, de));
    rest.run();
    CHECK(rest.iteration() == 4);

    CHECK(read_bytes(dd + "/checkpoints/iter_0004.ckpt") ==
          read_bytes(de + "/checkpoints/iter_0004.ckpt"));
    CHECK(read_bytes(dd + "/metrics.log") == read_bytes(de + "/metrics.log"));
    fs::remove_all(dd);
    fs::remove_all(de);
}
