#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "checkers/rng.hpp"

namespace checkers {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

inline constexpr int kHidden = 64;

// Scaled-uniform fan-in initialization; weights in row-major draw order so
// the layout never depends on Eigen storage order.
template <typename T>
void init_uniform(Mat<T>& w, Rng& rng, double scale = 1.0) {
    double limit = scale * std::sqrt(3.0 / static_cast<double>(w.cols()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c)
            w(r, c) = static_cast<T>((2.0 * rng.uniform() - 1.0) * limit);
}

template <typename T>
void add_bias(Mat<T>& z, const Mat<T>& b) {
    for (Eigen::Index c = 0; c < z.cols(); ++c) z.col(c) += b.col(0);
}

// Two-layer MLP with ReLU: obs -> 64 -> 64 features.
template <typename T>
struct Encoder {
    Mat<T> W1, b1, W2, b2;

    void init(int obs_dim, Rng& rng) {
        W1.resize(kHidden, obs_dim);
        b1 = Mat<T>::Zero(kHidden, 1);
        W2.resize(kHidden, kHidden);
        b2 = Mat<T>::Zero(kHidden, 1);
        init_uniform(W1, rng);
        init_uniform(W2, rng);
    }
    void zero_like(const Encoder& o) {
        W1 = Mat<T>::Zero(o.W1.rows(), o.W1.cols());
        b1 = Mat<T>::Zero(o.b1.rows(), 1);
        W2 = Mat<T>::Zero(o.W2.rows(), o.W2.cols());
        b2 = Mat<T>::Zero(o.b2.rows(), 1);
    }
};

// Linear head over the 64-dim features: policy (act_dim rows) or value (1 row).
template <typename T>
struct LinearHead {
    Mat<T> W, b;

    void init(int out_dim, Rng& rng, double scale) {
        W.resize(out_dim, kHidden);
        b = Mat<T>::Zero(out_dim, 1);
        init_uniform(W, rng, scale);
    }
    void zero_like(const LinearHead& o) {
        W = Mat<T>::Zero(o.W.rows(), o.W.cols());
        b = Mat<T>::Zero(o.b.rows(), 1);
    }
};

// Forward pass cache; columns are batch samples.
template <typename T>
struct EncoderCache {
    Mat<T> x, z1, z2, h;  // h = relu(z2), the features
};

template <typename T>
void encoder_forward(const Encoder<T>& e, const Mat<T>& x, EncoderCache<T>& c) {
    c.x = x;
    c.z1 = e.W1 * x;
    add_bias(c.z1, e.b1);
    Mat<T> h1 = c.z1.cwiseMax(T(0));
    c.z2 = e.W2 * h1;
    add_bias(c.z2, e.b2);
    c.h = c.z2.cwiseMax(T(0));
}

// Accumulates parameter gradients into `g` and returns nothing else; dh is
// the loss gradient w.r.t. the features.
template <typename T>
void encoder_backward(const Encoder<T>& e, const EncoderCache<T>& c, const Mat<T>& dh,
                      Encoder<T>& g) {
    Mat<T> dz2 = (c.z2.array() > T(0)).template cast<T>() * dh.array();
    Mat<T> h1 = c.z1.cwiseMax(T(0));
    g.W2 += dz2 * h1.transpose();
    g.b2 += dz2.rowwise().sum();
    Mat<T> dh1 = e.W2.transpose() * dz2;
    Mat<T> dz1 = (c.z1.array() > T(0)).template cast<T>() * dh1.array();
    g.W1 += dz1 * c.x.transpose();
    g.b1 += dz1.rowwise().sum();
}

template <typename T>
Mat<T> head_forward(const LinearHead<T>& h, const Mat<T>& features) {
    Mat<T> out = h.W * features;
    add_bias(out, h.b);
    return out;
}

template <typename T>
void head_backward(const LinearHead<T>& h, const Mat<T>& features, const Mat<T>& dout,
                   LinearHead<T>& g, Mat<T>& dfeatures) {
    g.W += dout * features.transpose();
    g.b += dout.rowwise().sum();
    dfeatures += h.W.transpose() * dout;
}

// Categorical distribution over logits with illegal entries masked out:
// masked probabilities are exactly zero and contribute no gradient.
template <typename T>
struct MaskedCategorical {
    Vec<T> logp;                 // -inf at masked entries
    Vec<T> prob;                 // 0 at masked entries
    const std::vector<uint8_t>* mask = nullptr;

    static MaskedCategorical make(const Vec<T>& logits, const std::vector<uint8_t>& mask) {
        if (logits.size() != static_cast<Eigen::Index>(mask.size()))
            throw std::invalid_argument("logits/mask size mismatch");
        MaskedCategorical d;
        d.mask = &mask;
        T hi = -std::numeric_limits<T>::infinity();
        for (Eigen::Index i = 0; i < logits.size(); ++i)
            if (mask[i] && logits[i] > hi) hi = logits[i];
        if (hi == -std::numeric_limits<T>::infinity())
            throw std::logic_error("masked categorical with no legal action");
        T sum = 0;
        d.prob = Vec<T>::Zero(logits.size());
        for (Eigen::Index i = 0; i < logits.size(); ++i)
            if (mask[i]) sum += (d.prob[i] = std::exp(logits[i] - hi));
        T lse = hi + std::log(sum);
        d.logp = Vec<T>::Constant(logits.size(), -std::numeric_limits<T>::infinity());
        for (Eigen::Index i = 0; i < logits.size(); ++i) {
            if (!mask[i]) continue;
            d.logp[i] = logits[i] - lse;
            d.prob[i] /= sum;
        }
        return d;
    }

    int sample(Rng& rng) const {
        double u = rng.uniform(), acc = 0;
        int last = -1;
        for (Eigen::Index i = 0; i < prob.size(); ++i) {
            if (!(*mask)[i]) continue;
            last = static_cast<int>(i);
            acc += static_cast<double>(prob[i]);
            if (u < acc) return last;
        }
        return last;
    }

    int argmax() const {
        int best = -1;
        T hi = -std::numeric_limits<T>::infinity();
        for (Eigen::Index i = 0; i < logp.size(); ++i)
            if ((*mask)[i] && logp[i] > hi) hi = logp[i], best = static_cast<int>(i);
        return best;
    }

    T entropy() const {
        T h = 0;
        for (Eigen::Index i = 0; i < prob.size(); ++i)
            if ((*mask)[i] && prob[i] > T(0)) h -= prob[i] * logp[i];
        return h;
    }
};

enum class Sharing : uint8_t { FullyIndependent, SharedEncoder, FullyShared };

const char* sharing_name(Sharing s);
Sharing parse_sharing(const std::string& name);

// The parameters of one training run: encoders plus policy/value heads, with
// per-seat routing determined by the sharing mode.
template <typename T>
struct PolicySet {
    Sharing sharing = Sharing::FullyShared;
    int n = 2;
    std::vector<Encoder<T>> enc;
    std::vector<LinearHead<T>> pi;
    std::vector<LinearHead<T>> vf;

    int enc_index(int seat) const { return enc.size() == 1 ? 0 : seat; }
    int head_index(int seat) const { return pi.size() == 1 ? 0 : seat; }

    void init(int n_, Sharing sharing_, int obs_dim, int act_dim, Rng& rng) {
        n = n_;
        sharing = sharing_;
        int n_enc = sharing == Sharing::FullyIndependent ? 6 : 1;
        int n_heads = sharing == Sharing::FullyShared ? 1 : 6;
        enc.resize(n_enc);
        pi.resize(n_heads);
        vf.resize(n_heads);
        for (auto& e : enc) e.init(obs_dim, rng);
        for (auto& h : pi) h.init(act_dim, rng, 0.01);
        for (auto& h : vf) h.init(1, rng, 1.0);
    }
    void zero_like(const PolicySet& o) {
        sharing = o.sharing;
        n = o.n;
        enc.resize(o.enc.size());
        pi.resize(o.pi.size());
        vf.resize(o.vf.size());
        for (size_t i = 0; i < enc.size(); ++i) enc[i].zero_like(o.enc[i]);
        for (size_t i = 0; i < pi.size(); ++i) pi[i].zero_like(o.pi[i]);
        for (size_t i = 0; i < vf.size(); ++i) vf[i].zero_like(o.vf[i]);
    }
};

template <typename T>
struct NamedTensor {
    std::string name;
    Mat<T>* data;
};

// Stable enumeration order; checkpoints, Adam state, and gradient bookkeeping
// all index tensors by position in this list.
template <typename T>
std::vector<NamedTensor<T>> named_tensors(PolicySet<T>& ps) {
    std::vector<NamedTensor<T>> out;
    for (size_t i = 0; i < ps.enc.size(); ++i) {
        std::string p = "enc" + std::to_string(i) + ".";
        out.push_back({p + "W1", &ps.enc[i].W1});
        out.push_back({p + "b1", &ps.enc[i].b1});
        out.push_back({p + "W2", &ps.enc[i].W2});
        out.push_back({p + "b2", &ps.enc[i].b2});
    }
    for (size_t i = 0; i < ps.pi.size(); ++i) {
        std::string p = "pi" + std::to_string(i) + ".";
        out.push_back({p + "W", &ps.pi[i].W});
        out.push_back({p + "b", &ps.pi[i].b});
    }
    for (size_t i = 0; i < ps.vf.size(); ++i) {
        std::string p = "vf" + std::to_string(i) + ".";
        out.push_back({p + "W", &ps.vf[i].W});
        out.push_back({p + "b", &ps.vf[i].b});
    }
    return out;
}

template <typename T>
struct AdamState {
    Mat<T> m, v;
    int64_t t = 0;

    void init_like(const Mat<T>& w) {
        m = Mat<T>::Zero(w.rows(), w.cols());
        v = Mat<T>::Zero(w.rows(), w.cols());
        t = 0;
    }
};

struct AdamConfig {
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

template <typename T>
void adam_step(Mat<T>& w, const Mat<T>& g, AdamState<T>& st, const AdamConfig& cfg) {
    if (!g.allFinite()) throw std::runtime_error("non-finite gradient in optimizer step");
    st.t += 1;
    T b1 = static_cast<T>(cfg.beta1), b2 = static_cast<T>(cfg.beta2);
    st.m = b1 * st.m + (1 - b1) * g;
    st.v = (b2 * st.v.array() + (1 - b2) * g.array().square()).matrix();
    T c1 = static_cast<T>(1.0 / (1.0 - std::pow(cfg.beta1, static_cast<double>(st.t))));
    T c2 = static_cast<T>(1.0 / (1.0 - std::pow(cfg.beta2, static_cast<double>(st.t))));
    w.array() -= static_cast<T>(cfg.lr) * (st.m.array() * c1) /
                 ((st.v.array() * c2).sqrt() + static_cast<T>(cfg.eps));
}

// Single-observation convenience forward: logits for the seat's policy head
// plus the seat's value estimate.
template <typename T, typename Scalar>
void policy_forward(const PolicySet<T>& ps, int seat, const std::vector<Scalar>& obs,
                    Vec<T>& logits, T& value) {
    const Encoder<T>& e = ps.enc[ps.enc_index(seat)];
    Mat<T> x(obs.size(), 1);
    for (size_t i = 0; i < obs.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = static_cast<T>(obs[i]);
    EncoderCache<T> c;
    encoder_forward(e, x, c);
    logits = head_forward(ps.pi[ps.head_index(seat)], c.h).col(0);
    value = head_forward(ps.vf[ps.head_index(seat)], c.h)(0, 0);
}

// Checkpoint file contents. Adam state is optional (evaluation-only loads
// ignore it; training saves include it so runs resume exactly).
struct Checkpoint {
    int n = 2;
    Sharing sharing = Sharing::FullyShared;
    int iteration = 0;
    int64_t env_steps = 0;
    uint64_t seed = 0;
    PolicySet<float> params;
    std::vector<AdamState<float>> adam;
    bool has_adam = false;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace checkers
