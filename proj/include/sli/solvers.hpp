#pragma once

#include <functional>
#include <string>
#include <unordered_map>

#include "sli/game.hpp"

namespace sli {

// depth argument meaning "no limit"
constexpr int kInfiniteDepth = -1;

// Frontier evaluation for depth-limited search. Terminal states never
// reach the heuristic; solvers return the exact payoff first.
struct Heuristic {
    std::string id;
    std::function<double(const GameDef&, const State&)> eval;

    // symmetric prior: 0.5 everywhere
    static Heuristic constant_half();
};

// Mode-tagged transposition table. A cache must never be shared between
// evaluation modes; solvers check the tag and refuse mismatches.
struct ValueCache {
    explicit ValueCache(std::string mode_tag) : mode(std::move(mode_tag)) {}

    std::string mode;
    std::unordered_map<std::uint64_t, double> values;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
};

// Exact or depth-limited expectiminimax with alpha-beta: max at Player-0
// decisions, min at Player-1, probability-weighted expectation at chance
// nodes; chance children are searched with the full (0,1) window so that
// pruning never changes the returned value. With infinite depth a
// nonterminal leaf at max_ply is a structural error (truncated games must
// be run depth-limited).
double expectiminimax(const GameDef& game, const State& s, int depth, const Heuristic& heuristic,
                      double alpha = 0.0, double beta = 1.0, ValueCache* cache = nullptr);

// Exact expected payoff under a policy profile by backward induction.
// Truncated leaves are valued 0.5.
double value_under_profile(const GameDef& game, const State& s, const Policy& policy0,
                           const Policy& policy1, ValueCache* cache = nullptr);

// Depth-limited analogue of value_under_profile with heuristic frontier.
double value_under_profile_depth(const GameDef& game, const State& s, const Policy& policy0,
                                 const Policy& policy1, int depth, const Heuristic& heuristic);

struct BestResponse {
    Policy policy;      // tabular, deterministic, defined on every induced-reachable node
    double root_value;  // value of (policy, opponent) at the root of the solve
    // value under (policy, opponent) per canonical key; filled for
    // infinite-depth solves, used as the value function for volatility
    std::unordered_map<std::uint64_t, double> values;
};

// Best response for `for_player` against a fixed stochastic opponent,
// computed by backward induction with opponent nodes folded into weighted
// chance nodes. Ties break to the lowest successor index. With finite
// depth the frontier uses `heuristic`.
BestResponse best_response(const GameDef& game, const Policy& opponent, int for_player,
                           int depth = kInfiniteDepth, const Heuristic& heuristic = Heuristic::constant_half());

// Value from `s` with Player 0 maximizing, Player 1 uniform, chance by
// probability: the state-value function of (BR(uniform), uniform).
double asymmetric_value(const GameDef& game, const State& s, int depth = kInfiniteDepth,
                        const Heuristic& heuristic = Heuristic::constant_half());

// Counterfactual chance evaluation: reference-policy-weighted averaging at
// decision nodes, MAX (nature_max) or MIN over children at chance nodes.
double luck_value(const GameDef& game, const State& s, const Policy& reference, bool nature_max,
                  int depth = kInfiniteDepth, const Heuristic& heuristic = Heuristic::constant_half(),
                  ValueCache* cache = nullptr, std::uint64_t max_states = 5'000'000);

}  // namespace sli
