#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sli/game.hpp"
#include "sli/solvers.hpp"

namespace sli {

struct TrajectoryStep {
    State state;
    NodeKind::Type kind = NodeKind::Type::Terminal;
    int edge_index = -1;  // -1 on the terminal step
    std::string label;
    double value = 0.0;  // v_t under (BR(uniform), uniform); payoff at terminal
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    double payoff = 0.0;
};

struct PlyVariance {
    int ply = 0;
    double sigma_sq = 0.0;
    std::int64_t count = 0;  // qualifying chance transitions observed at this ply
};

struct VolatilityReport {
    std::vector<PlyVariance> sigma_sq_by_ply;
    double sigma_total = 0.0;  // sum of the per-ply entries
    std::int64_t n_trajectories = 0;
    std::uint64_t seed = 0;
    double standard_error = 0.0;  // batch-means SE of sigma_total; 0 for exact
    std::string method;           // "mc" or "exact"
};

// Player 0 follows BR(uniform), Player 1 uniform, chance by rule
// probabilities; each visited state carries v_t = value under that
// profile (exact for infinite depth, else a depth-limited backup).
std::vector<Trajectory> sample_trajectories(const GameDef& game, std::int64_t n, std::uint64_t seed,
                                            int depth = kInfiniteDepth,
                                            const Heuristic& heuristic = Heuristic::constant_half());

// sigma_t^2 over chance-node transitions only, with pre-play chance
// (before any decision on the trajectory) excluded; plies with fewer than
// 2 qualifying samples contribute 0.
VolatilityReport integrated_volatility(const GameDef& game, std::int64_t n, std::uint64_t seed,
                                       int depth = kInfiniteDepth,
                                       const Heuristic& heuristic = Heuristic::constant_half());

// Same quantity by weighted enumeration of the full (BR, uniform)
// trajectory distribution; used by exact-mode reports.
VolatilityReport integrated_volatility_exact(const GameDef& game, std::uint64_t max_paths = 5'000'000);

}  // namespace sli
