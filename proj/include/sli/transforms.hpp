#pragma once

#include <cstdint>
#include <string>

#include "sli/explicit_tree.hpp"

namespace sli {

// Restricted structural transformations with provable directional effects
// on the leverage measures. Each returns a new tree and leaves the input
// untouched.

// Replaces terminal `terminal_id` (payoff v) by a Player-0 decision whose
// children are the original terminal and a payoff-dominated sibling
// (`dominated_payoff` <= v). Leaves the best-response value unchanged and
// weakly lowers the random-random value, so K weakly increases.
ExplicitTree insert_dominated_decision(const ExplicitTree& tree, int terminal_id,
                                       double dominated_payoff);

// Replaces terminal `terminal_id` (payoff v) by a chance node whose two
// terminal children span an interval containing v (`lo` <= v <= `hi`).
// Weakly raises luck-max and weakly lowers luck-min, so L weakly
// increases.
ExplicitTree insert_spanning_chance(const ExplicitTree& tree, int terminal_id, double lo, double hi,
                                    double prob_hi = 0.5);

// Puts a fresh chance root above the whole tree: 50% straight to a losing
// terminal, 50% into the original game.
ExplicitTree add_early_chance(const ExplicitTree& tree);

enum class TransformKind {
    AddEarlyChance,
    AddDecisionDepth,
    AmplifyTerminalVariance,
    ClusterLateChance,
};

TransformKind transform_kind_from_name(const std::string& name);
std::string transform_kind_name(TransformKind kind);

// Applies the named design modification, choosing the target terminal
// deterministically from `seed`. Throws ContractError when the tree has
// no applicable site.
ExplicitTree apply_transform(const ExplicitTree& tree, TransformKind kind, std::uint64_t seed);

}  // namespace sli
