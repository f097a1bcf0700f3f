#include "mcts.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbtzero {

namespace {

struct Node;

struct MctsEdge {
    int move = -1;
    double prior = 0.0;
    int visits = 0;
    double value_sum = 0.0;
    std::unique_ptr<Node> child;
};

struct Node {
    GameState state;
    bool terminal = false;
    double terminal_value = 0.0;  // from state.to_move()'s perspective
    std::vector<MctsEdge> edges;

    explicit Node(GameState s) : state(std::move(s)) {}
};

double terminal_value_for_mover(const GameState& state) {
    const GameResult r = state.score();
    if (r.winner == Winner::Draw) return 0.0;
    const bool black_won = r.winner == Winner::Black;
    const bool mover_is_black = state.to_move() == Color::Black;
    return black_won == mover_is_black ? 1.0 : -1.0;
}

// Fills edges with the legal moves and their (renormalized) priors; returns
// the evaluator's value for the node.
double expand(Node& node, const Evaluator& evaluator, std::vector<double>& policy_buf) {
    double value = 0.0;
    evaluator.evaluate(node.state, policy_buf, value);
    const std::vector<int> moves = node.state.legal_moves();
    node.edges.reserve(moves.size());
    double mass = 0.0;
    for (int m : moves) mass += std::max(0.0, policy_buf[m]);
    for (int m : moves) {
        MctsEdge e;
        e.move = m;
        e.prior = mass > 0.0 ? std::max(0.0, policy_buf[m]) / mass
                             : 1.0 / static_cast<double>(moves.size());
        node.edges.push_back(std::move(e));
    }
    return value;
}

MctsEdge& select_edge(Node& node, double c_puct) {
    int parent_visits = 0;
    for (const auto& e : node.edges) parent_visits += e.visits;
    const double sqrt_n = std::sqrt(static_cast<double>(parent_visits));
    MctsEdge* best = &node.edges.front();
    double best_score = -1e30;
    for (auto& e : node.edges) {
        const double q = e.visits > 0 ? e.value_sum / e.visits : 0.0;
        const double score = q + c_puct * e.prior * sqrt_n / (1.0 + e.visits);
        if (score > best_score) {
            best_score = score;
            best = &e;
        }
    }
    return *best;
}

}  // namespace

SearchResult search(const GameState& state, const Evaluator& evaluator, const SearchConfig& config,
                    Rng* rng) {
    if (state.is_terminal()) throw std::logic_error("search on a terminal state");
    if (!config.valid()) throw std::invalid_argument("invalid search config");
    if (config.dirichlet_epsilon > 0.0 && rng == nullptr)
        throw std::invalid_argument("root noise requested but no rng supplied");

    Node root(state);
    std::vector<double> policy_buf;
    expand(root, evaluator, policy_buf);

    if (config.dirichlet_epsilon > 0.0) {
        std::vector<double> noise(root.edges.size());
        double sum = 0.0;
        for (auto& g : noise) {
            g = rng->gamma(config.dirichlet_alpha);
            sum += g;
        }
        if (sum > 0.0) {
            for (size_t i = 0; i < root.edges.size(); ++i) {
                root.edges[i].prior = (1.0 - config.dirichlet_epsilon) * root.edges[i].prior +
                                      config.dirichlet_epsilon * noise[i] / sum;
            }
        }
    }

    std::vector<MctsEdge*> path;
    for (int sim = 0; sim < config.simulations; ++sim) {
        path.clear();
        Node* node = &root;
        double leaf_value = 0.0;
        for (;;) {
            if (node->terminal) {
                leaf_value = node->terminal_value;
                break;
            }
            MctsEdge& edge = select_edge(*node, config.c_puct);
            path.push_back(&edge);
            if (!edge.child) {
                auto child = std::make_unique<Node>(node->state.play(edge.move));
                if (child->state.is_terminal()) {
                    child->terminal = true;
                    child->terminal_value = terminal_value_for_mover(child->state);
                    leaf_value = child->terminal_value;
                } else {
                    leaf_value = expand(*child, evaluator, policy_buf);
                }
                edge.child = std::move(child);
                break;
            }
            node = edge.child.get();
        }
        // negamax backup: each level up flips the sign
        double v = leaf_value;
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            v = -v;
            (*it)->visits += 1;
            (*it)->value_sum += v;
        }
    }

    SearchResult result;
    const int nm = num_moves(state.size());
    result.pi.assign(nm, 0.0);
    result.visit_counts.assign(nm, 0);
    int total = 0;
    double value_total = 0.0;
    for (const auto& e : root.edges) {
        result.visit_counts[e.move] = e.visits;
        total += e.visits;
        value_total += e.value_sum;
    }
    for (const auto& e : root.edges) {
        result.pi[e.move] = static_cast<double>(e.visits) / total;
    }
    result.root_value = value_total / total;
    int best = -1;
    int best_visits = -1;
    for (int m = 0; m < nm; ++m) {
        if (result.visit_counts[m] > best_visits) {
            best_visits = result.visit_counts[m];
            best = m;
        }
    }
    result.chosen_move = best;
    return result;
}

std::vector<double> policy_target(const std::vector<int>& visit_counts, double temperature) {
    if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
    int max_v = 0;
    for (int v : visit_counts) max_v = std::max(max_v, v);
    if (max_v == 0) throw std::invalid_argument("policy_target on all-zero visit counts");

    std::vector<double> pi(visit_counts.size(), 0.0);
    if (temperature == 0.0) {
        for (size_t i = 0; i < visit_counts.size(); ++i) {
            if (visit_counts[i] == max_v) {
                pi[i] = 1.0;  // lowest index wins ties
                break;
            }
        }
        return pi;
    }
    double sum = 0.0;
    for (size_t i = 0; i < visit_counts.size(); ++i) {
        if (visit_counts[i] > 0) {
            pi[i] = std::pow(static_cast<double>(visit_counts[i]) / max_v, 1.0 / temperature);
            sum += pi[i];
        }
    }
    for (auto& x : pi) x /= sum;
    return pi;
}

int sample_index(const std::vector<double>& distribution, Rng& rng) {
    const double u = rng.next_double();
    double cum = 0.0;
    int last_positive = 0;
    for (size_t i = 0; i < distribution.size(); ++i) {
        if (distribution[i] <= 0.0) continue;
        cum += distribution[i];
        last_positive = static_cast<int>(i);
        if (u < cum) return last_positive;
    }
    return last_positive;  // guards against rounding at the tail
}

}  // namespace pbtzero
