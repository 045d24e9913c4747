#pragma once

#include <memory>

#include "checkers/env.hpp"
#include "checkers/nn.hpp"

namespace checkers {

// Decision-makers produce action indices in the current player's canonical
// frame, i.e. exactly what step() consumes.
struct Agent {
    virtual ~Agent() = default;
    virtual int act(const GameState& s, Rng& rng) = 0;
};

// Uniform over the legal actions.
class RandomAgent : public Agent {
public:
    int act(const GameState& s, Rng& rng) override;
};

int random_action(const GameState& s, Rng& rng);

// Scripted baseline: walks pegs one at a time, never jumping. In the mover's
// canonical frame, it targets the deepest unfilled goal cell (greatest r,
// ties broken by least q) and plays the non-jump Move whose destination
// minimizes hex distance to that cell, ties broken by smallest action index.
// Pegs already standing at least as deep as the target goal cell stay parked.
// With no Move available it ends the turn when legal, otherwise plays the
// smallest-index jump and stops the chain on the next submove. Playing solo
// this finishes in exactly the sum of home-to-target hex distances.
class GreedyForwardAgent : public Agent {
public:
    int act(const GameState& s, Rng& rng) override;
};

int greedy_action(const GameState& s);

// Masked-softmax policy. `route` picks which head (and, for fully-independent
// parameters, which encoder) acts; observations always come from the seat the
// agent actually occupies.
class PolicyAgent : public Agent {
public:
    PolicyAgent(const PolicySet<float>& params, int route, bool deterministic = false)
        : params_(&params), route_(route), deterministic_(deterministic) {}

    int act(const GameState& s, Rng& rng) override;

private:
    const PolicySet<float>* params_;
    int route_;
    bool deterministic_;
};

}  // namespace checkers
