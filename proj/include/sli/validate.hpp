#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sli/game.hpp"

namespace sli {

struct ValidationReport {
    std::vector<std::string> errors;    // hard violations (probabilities, payoffs, collisions)
    std::vector<std::string> warnings;  // truncation and other soft findings
    std::uint64_t unique_states = 0;
    std::uint64_t edge_count = 0;
    std::uint64_t truncated_leaves = 0;
    int max_depth_seen = 0;

    bool valid() const { return errors.empty(); }
    bool truncated() const { return truncated_leaves > 0; }
};

// Exhaustively walks the reachable tree (deduplicated by canonical key) up
// to max_ply. Reports probability-sum and payoff-range violations,
// nonterminal leaves at max_ply, and canonical-key collisions detected by
// comparing node signatures. Never throws for findings; throws BudgetError
// only if the walk exceeds `max_states`.
ValidationReport validate_game(const GameDef& game, std::uint64_t max_states = 5'000'000);

}  // namespace sli
