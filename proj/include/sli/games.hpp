#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sli/explicit_tree.hpp"
#include "sli/game.hpp"

namespace sli {

struct UnknownGameError : ContractError {
    using ContractError::ContractError;
};

// Catalog entry: name, integer parameters with defaults, factory, and the
// metric values known in advance (with a provenance note each).
struct GameSpec {
    struct Expected {
        std::string metric;  // "K", "L", "S", "Sigma"
        double value;
        std::string provenance;
    };

    std::string name;
    std::map<std::string, int> default_params;
    std::function<GamePtr(const std::map<std::string, int>&)> factory;
    std::vector<Expected> expected;
    std::string notes;
};

// Stable-ordered catalog of built-in desk-scale games.
const std::vector<GameSpec>& list_games();

// Builds and validates a catalog game. `params` overrides defaults;
// unknown names raise UnknownGameError, bad parameters ContractError.
GamePtr instantiate(const std::string& name, const std::map<std::string, int>& params = {});

// Explicit trees behind the tree-backed built-ins, exposed for the design
// experiments and tests.
ExplicitTree coin_toss_tree();
ExplicitTree toy_tree();
ExplicitTree toy_pure_luck_tree();
ExplicitTree toy_pure_skill_tree();
ExplicitTree lottery_choice_tree();

}  // namespace sli
