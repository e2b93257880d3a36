#include "sli/validate.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

namespace sli {

namespace {

constexpr double kProbTolerance = 1e-9;

std::string node_signature(const GameDef& game, const State& s, const NodeKind& kind,
                           const std::vector<Edge>& succ) {
    std::string sig;
    switch (kind.type) {
        case NodeKind::Type::Decision:
            sig = "d" + std::to_string(kind.player);
            break;
        case NodeKind::Type::Chance:
            sig = "c";
            break;
        case NodeKind::Type::Terminal:
            sig = "t" + std::to_string(kind.payoff);
            break;
    }
    for (const auto& e : succ) {
        sig += "|";
        sig += e.label;
    }
    (void)game;
    return sig;
}

}  // namespace

ValidationReport validate_game(const GameDef& game, std::uint64_t max_states) {
    ValidationReport report;
    std::unordered_map<std::uint64_t, std::string> seen;  // key -> signature
    std::vector<State> stack;
    stack.push_back(game.initial_state());

    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();

        NodeKind kind = game.node_kind(s);
        std::vector<Edge> succ;
        if (!kind.is_terminal()) succ = game.successors(s);

        auto [it, inserted] = seen.emplace(s.key, std::string());
        if (!inserted) {
            // already visited; sample-check for key collisions
            std::string sig = node_signature(game, s, kind, succ);
            if (it->second != sig) {
                report.errors.push_back("canonical_key collision at key " + std::to_string(s.key) +
                                        ": signatures '" + it->second + "' vs '" + sig + "'");
            }
            continue;
        }
        it->second = node_signature(game, s, kind, succ);
        ++report.unique_states;
        if (s.ply > report.max_depth_seen) report.max_depth_seen = s.ply;
        if (report.unique_states > max_states) {
            throw BudgetError("validate_game: game '" + game.id() + "' exceeds state budget of " +
                              std::to_string(max_states));
        }

        if (kind.is_terminal()) {
            if (kind.payoff < 0.0 || kind.payoff > 1.0) {
                report.errors.push_back("terminal payoff " + std::to_string(kind.payoff) +
                                        " outside [0,1] at ply " + std::to_string(s.ply));
            }
            continue;
        }

        if (s.ply >= game.max_ply()) {
            ++report.truncated_leaves;
            report.warnings.push_back("nonterminal leaf truncated at max_ply " +
                                      std::to_string(game.max_ply()));
            continue;
        }

        if (succ.empty()) {
            report.errors.push_back("nonterminal node with no successors at ply " + std::to_string(s.ply));
            continue;
        }

        if (kind.is_chance()) {
            double sum = 0.0;
            for (const auto& e : succ) {
                if (!e.prob) {
                    report.errors.push_back("chance edge '" + e.label + "' missing probability");
                    continue;
                }
                if (*e.prob <= 0.0) {
                    report.errors.push_back("chance edge '" + e.label + "' has nonpositive probability");
                }
                sum += e.prob.value_or(0.0);
            }
            if (std::fabs(sum - 1.0) > kProbTolerance) {
                report.errors.push_back("chance probabilities sum to " + std::to_string(sum) +
                                        " at ply " + std::to_string(s.ply));
            }
        } else {
            for (const auto& e : succ) {
                if (e.prob) {
                    report.errors.push_back("decision edge '" + e.label + "' carries a probability");
                }
            }
        }

        report.edge_count += succ.size();
        for (const auto& e : succ) stack.push_back(e.to);
    }

    return report;
}

}  // namespace sli
