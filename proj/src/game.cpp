#include "sli/game.hpp"

namespace sli {

Policy Policy::tabular_choice(int player, const std::unordered_map<std::uint64_t, int>& choices,
                              const std::unordered_map<std::uint64_t, int>& arity) {
    std::unordered_map<std::uint64_t, std::vector<double>> table;
    table.reserve(choices.size());
    for (const auto& [key, idx] : choices) {
        auto it = arity.find(key);
        if (it == arity.end()) throw ContractError("tabular_choice: missing arity for key");
        std::vector<double> dist(static_cast<std::size_t>(it->second), 0.0);
        if (idx < 0 || idx >= it->second) throw ContractError("tabular_choice: index out of range");
        dist[static_cast<std::size_t>(idx)] = 1.0;
        table.emplace(key, std::move(dist));
    }
    return tabular(player, std::move(table));
}

std::vector<double> Policy::action_distribution(const GameDef& game, const State& s) const {
    NodeKind kind = game.node_kind(s);
    if (!kind.is_decision()) throw ContractError("action_distribution: not a decision node");
    auto succ = game.successors(s);
    if (succ.empty()) throw StructuralError("decision node with no successors");

    if (kind_ == Kind::UniformRandom) {
        return std::vector<double>(succ.size(), 1.0 / static_cast<double>(succ.size()));
    }

    if (kind.player != player_) {
        throw ContractError("tabular policy for player " + std::to_string(player_) +
                            " queried at a player " + std::to_string(kind.player) + " node");
    }
    auto it = table_->find(s.key);
    if (it == table_->end()) {
        throw ContractError("tabular policy undefined at reachable decision node (game " + game.id() + ")");
    }
    if (it->second.size() != succ.size()) {
        throw ContractError("tabular policy arity mismatch at decision node (game " + game.id() + ")");
    }
    return it->second;
}

}  // namespace sli
