#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sli/game.hpp"
#include "sli/solvers.hpp"

namespace sli {

struct LeverageEstimate {
    enum class Method { Exact, MonteCarlo };

    double point = 0.0;  // clamped at 0 from below for MC estimates
    Method method = Method::Exact;
    std::int64_t n_sims = 0;      // MC only
    std::uint64_t seed = 0;       // MC only
    double standard_error = 0.0;  // 0 iff exact
    std::optional<std::pair<double, double>> ci95;
    double raw_point = 0.0;  // pre-clamp value (MC); diagnostic

    bool exact() const { return method == Method::Exact; }
};

struct SkillLuckIndex {
    double s = 0.0;  // in [-1, 1]
    LeverageEstimate k;
    LeverageEstimate l;
    bool degenerate = false;  // true iff K = L = 0
};

// K = V(BR(uniform), uniform) - V(uniform, uniform), exact backward induction.
LeverageEstimate skill_leverage_exact(const GameDef& game, std::uint64_t max_states = 5'000'000);

// Paired rollouts: rollout i of both arms uses the RNG stream derived from
// (seed, i), so games without decision nodes yield exactly 0. Standard
// error by binomial propagation across the two arms.
LeverageEstimate skill_leverage_mc(const GameDef& game, std::int64_t n_sims, std::uint64_t seed,
                                   int depth = kInfiniteDepth,
                                   const Heuristic& heuristic = Heuristic::constant_half());

// Per-rollout paired payoff differences (BR-vs-random minus random-vs-random),
// the raw sample vector behind skill_leverage_mc; used for bootstrap CIs.
std::vector<double> skill_leverage_samples(const GameDef& game, std::int64_t n_sims, std::uint64_t seed,
                                           int depth = kInfiniteDepth,
                                           const Heuristic& heuristic = Heuristic::constant_half());

// L = V_luckmax - V_luckmin with reference-policy-weighted averaging at
// decision nodes and nature MAX/MIN at chance nodes.
LeverageEstimate luck_leverage_exact(const GameDef& game, const Policy& reference = Policy::uniform(),
                                     std::uint64_t max_states = 5'000'000);

// Headline point targets the exact-mode (max-of-expectation) semantics;
// the n sampled deterministic policy realizations feed variance
// diagnostics only (see README on luck semantics).
LeverageEstimate luck_leverage_mc(const GameDef& game, const Policy& reference, std::int64_t n_sims,
                                  std::uint64_t seed, std::uint64_t max_states = 5'000'000);

// S = (K - L)/(K + L) with the degenerate K = L = 0 case mapped to 0.
SkillLuckIndex skill_luck_index(const LeverageEstimate& k, const LeverageEstimate& l);

}  // namespace sli
