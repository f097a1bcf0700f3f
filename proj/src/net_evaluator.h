#pragma once

#include "mcts.h"
#include "network.h"

namespace pbtzero {

/// Bridges a Network into the search. The value fed to MCTS is the output
/// matching the game komi (MultiKomi heads pick the corresponding entry).
class NetworkEvaluator : public Evaluator {
public:
    NetworkEvaluator(const Network& net, double game_komi) : net_(net), komi_(game_komi) {
        if (net.config().value_head == ValueHeadKind::MultiKomi) {
            value_for_komi(NetworkOutput{{}, std::vector<double>(net.config().value_outputs())},
                           net.config(), komi_);  // validates the komi up front
        }
    }

    void evaluate(const GameState& state, std::vector<double>& policy,
                  double& value) const override {
        thread_local NetWorkspace ws;
        const NetworkOutput out = net_.forward(encode_features(state), ws);
        policy = out.p;
        value = value_for_komi(out, net_.config(), komi_);
    }

    const Network& network() const { return net_; }

private:
    const Network& net_;
    double komi_;
};

}  // namespace pbtzero
