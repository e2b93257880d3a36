#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sli/error.hpp"

namespace sli {

// Opaque per-game state. `code` is the game's own packed encoding; `key`
// is the canonical transposition key: two states with equal key must have
// identical subtrees. `ply` counts edges from the root.
struct State {
    std::uint64_t code = 0;
    std::uint64_t key = 0;
    int ply = 0;
};

// One outgoing edge. `prob` is set on chance-node edges only.
struct Edge {
    std::string label;
    std::optional<double> prob;
    State to;
};

struct NodeKind {
    enum class Type { Decision, Chance, Terminal };

    Type type = Type::Terminal;
    int player = -1;      // Decision only, 0 or 1
    double payoff = 0.0;  // Terminal only, payoff to Player 0 in [0,1]

    static NodeKind decision(int player) { return {Type::Decision, player, 0.0}; }
    static NodeKind chance() { return {Type::Chance, -1, 0.0}; }
    static NodeKind terminal(double payoff) { return {Type::Terminal, -1, payoff}; }

    bool is_decision() const { return type == Type::Decision; }
    bool is_chance() const { return type == Type::Chance; }
    bool is_terminal() const { return type == Type::Terminal; }
};

// Abstract finite two-player zero-sum game with chance. Payoffs are always
// to Player 0 (win 1, loss 0, draw 0.5). Implementations are immutable
// after construction and safe to share across threads; `successors` must
// return the same ordered list on every call.
class GameDef {
public:
    virtual ~GameDef() = default;

    virtual const std::string& id() const = 0;
    virtual State initial_state() const = 0;
    virtual NodeKind node_kind(const State& s) const = 0;
    virtual std::vector<Edge> successors(const State& s) const = 0;
    virtual int max_ply() const = 0;
};

using GamePtr = std::shared_ptr<const GameDef>;

// Per-decision-node action distribution over successor indices.
// Two kinds: the uniform-random policy, and a tabular policy for one
// player keyed by canonical state key.
class Policy {
public:
    enum class Kind { UniformRandom, Tabular };

    static Policy uniform() { return Policy(Kind::UniformRandom, -1); }

    static Policy tabular(int player, std::unordered_map<std::uint64_t, std::vector<double>> table) {
        Policy p(Kind::Tabular, player);
        p.table_ = std::make_shared<std::unordered_map<std::uint64_t, std::vector<double>>>(std::move(table));
        return p;
    }

    // Deterministic tabular policy given by a chosen successor index per key.
    static Policy tabular_choice(int player, const std::unordered_map<std::uint64_t, int>& choices,
                                 const std::unordered_map<std::uint64_t, int>& arity);

    Kind kind() const { return kind_; }
    int player() const { return player_; }

    // True when action_distribution would succeed for a state with this
    // key; always true for the uniform policy. Rollouts use this to fall
    // back to uniform beyond a depth-limited table's horizon.
    bool defined_at(std::uint64_t key) const {
        return kind_ == Kind::UniformRandom || table_->count(key) > 0;
    }

    // Distribution over the successor indices of `s` (a decision node).
    // For a tabular policy the state's player must match; a reachable
    // decision node missing from the table is a contract error.
    std::vector<double> action_distribution(const GameDef& game, const State& s) const;

private:
    Policy(Kind kind, int player) : kind_(kind), player_(player) {}

    Kind kind_;
    int player_;
    std::shared_ptr<const std::unordered_map<std::uint64_t, std::vector<double>>> table_;
};

}  // namespace sli
