#include "sli/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "sli/error.hpp"
#include "sli/parallel.hpp"
#include "sli/rng.hpp"

namespace sli {

namespace {

constexpr std::uint64_t kTrajectoryStreamTag = 0x74726A00ULL;

struct BrProfile {
    Policy policy;
    std::unordered_map<std::uint64_t, double> values;  // infinite depth only
    int depth;
    Heuristic heuristic;

    double value_at(const GameDef& game, const State& s) const {
        NodeKind kind = game.node_kind(s);
        if (kind.is_terminal()) return kind.payoff;
        if (depth == kInfiniteDepth) {
            auto it = values.find(s.key);
            if (it == values.end()) throw StructuralError("missing value for reachable state");
            return it->second;
        }
        return asymmetric_value(game, s, depth, heuristic);
    }
};

BrProfile solve_profile(const GameDef& game, int depth, const Heuristic& heuristic) {
    BestResponse br = best_response(game, Policy::uniform(), 0, depth, heuristic);
    return BrProfile{std::move(br.policy), std::move(br.values), depth, heuristic};
}

Trajectory sample_one(const GameDef& game, const BrProfile& profile, const Policy& uniform, Rng& rng) {
    Trajectory traj;
    State s = game.initial_state();
    for (;;) {
        NodeKind kind = game.node_kind(s);
        TrajectoryStep step;
        step.state = s;
        step.kind = kind.type;
        if (kind.is_terminal()) {
            step.value = kind.payoff;
            traj.steps.push_back(std::move(step));
            traj.payoff = kind.payoff;
            return traj;
        }
        if (s.ply >= game.max_ply()) {
            step.value = 0.5;
            traj.steps.push_back(std::move(step));
            traj.payoff = 0.5;
            return traj;
        }
        step.value = profile.value_at(game, s);

        auto succ = game.successors(s);
        int idx;
        if (kind.is_chance()) {
            std::vector<double> w;
            w.reserve(succ.size());
            for (const auto& e : succ) w.push_back(e.prob.value_or(0.0));
            idx = rng.pick_weighted(w);
        } else if (kind.player == 0 && profile.policy.defined_at(s.key)) {
            auto dist = profile.policy.action_distribution(game, s);
            idx = 0;
            for (std::size_t i = 0; i < dist.size(); ++i) {
                if (dist[i] > dist[static_cast<std::size_t>(idx)]) idx = static_cast<int>(i);
            }
        } else {
            auto dist = uniform.action_distribution(game, s);
            idx = rng.pick_weighted(dist);
        }
        step.edge_index = idx;
        step.label = succ[static_cast<std::size_t>(idx)].label;
        traj.steps.push_back(std::move(step));
        s = succ[static_cast<std::size_t>(idx)].to;
    }
}

struct PlyAccumulator {
    std::vector<double> deltas;
};

// Collects the qualifying value changes of one trajectory: chance-node
// transitions with at least one decision node strictly earlier.
void collect_deltas(const Trajectory& traj, std::map<int, PlyAccumulator>& buckets) {
    bool seen_decision = false;
    for (std::size_t t = 0; t + 1 < traj.steps.size(); ++t) {
        const TrajectoryStep& cur = traj.steps[t];
        if (cur.kind == NodeKind::Type::Decision) {
            seen_decision = true;
            continue;
        }
        if (cur.kind == NodeKind::Type::Chance && seen_decision) {
            double delta = traj.steps[t + 1].value - cur.value;
            buckets[cur.state.ply].deltas.push_back(delta);
        }
    }
}

double unbiased_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += (x - mean) * (x - mean);
    return sum / static_cast<double>(xs.size() - 1);
}

double sigma_total_of(const std::vector<const Trajectory*>& trajs) {
    std::map<int, PlyAccumulator> buckets;
    for (const Trajectory* t : trajs) collect_deltas(*t, buckets);
    double total = 0.0;
    for (const auto& [ply, acc] : buckets) total += unbiased_variance(acc.deltas);
    return total;
}

}  // namespace

std::vector<Trajectory> sample_trajectories(const GameDef& game, std::int64_t n, std::uint64_t seed,
                                            int depth, const Heuristic& heuristic) {
    if (n < 1) throw ContractError("sample_trajectories: n must be >= 1");
    BrProfile profile = solve_profile(game, depth, heuristic);
    Policy uniform = Policy::uniform();

    std::vector<Trajectory> out(static_cast<std::size_t>(n));
    parallel_for(n, [&](std::int64_t i) {
        Rng rng = Rng::stream(seed ^ kTrajectoryStreamTag, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = sample_one(game, profile, uniform, rng);
    });
    return out;
}

VolatilityReport integrated_volatility(const GameDef& game, std::int64_t n, std::uint64_t seed,
                                       int depth, const Heuristic& heuristic) {
    if (n < 2) throw ContractError("integrated_volatility: n must be >= 2");
    auto trajectories = sample_trajectories(game, n, seed, depth, heuristic);

    std::map<int, PlyAccumulator> buckets;
    for (const auto& t : trajectories) collect_deltas(t, buckets);

    VolatilityReport report;
    report.method = "mc";
    report.n_trajectories = n;
    report.seed = seed;
    for (const auto& [ply, acc] : buckets) {
        double var = unbiased_variance(acc.deltas);
        report.sigma_sq_by_ply.push_back({ply, var, static_cast<std::int64_t>(acc.deltas.size())});
        report.sigma_total += var;
    }

    // batch-means standard error of sigma_total
    const std::int64_t batches = std::min<std::int64_t>(20, n);
    if (batches >= 2) {
        std::vector<double> batch_sigma;
        batch_sigma.reserve(static_cast<std::size_t>(batches));
        for (std::int64_t b = 0; b < batches; ++b) {
            std::int64_t lo = b * n / batches;
            std::int64_t hi = (b + 1) * n / batches;
            std::vector<const Trajectory*> slice;
            slice.reserve(static_cast<std::size_t>(hi - lo));
            for (std::int64_t i = lo; i < hi; ++i) slice.push_back(&trajectories[static_cast<std::size_t>(i)]);
            batch_sigma.push_back(sigma_total_of(slice));
        }
        report.standard_error =
            std::sqrt(unbiased_variance(batch_sigma) / static_cast<double>(batches));
    }
    return report;
}

namespace {

struct ExactAccumulator {
    double weight = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t edges = 0;
};

struct ExactContext {
    const GameDef& game;
    const BrProfile& profile;
    std::map<int, ExactAccumulator> buckets;
    std::uint64_t paths = 0;
    std::uint64_t max_paths;
};

void enumerate(ExactContext& ctx, const State& s, double weight, bool seen_decision) {
    if (++ctx.paths > ctx.max_paths) {
        throw BudgetError("integrated_volatility_exact: trajectory enumeration exceeds budget for game '" +
                          ctx.game.id() + "'");
    }
    NodeKind kind = ctx.game.node_kind(s);
    if (kind.is_terminal()) return;
    if (s.ply >= ctx.game.max_ply()) return;
    auto succ = ctx.game.successors(s);

    if (kind.is_chance()) {
        double v_here = ctx.profile.value_at(ctx.game, s);
        for (const auto& e : succ) {
            double p = e.prob.value_or(0.0);
            if (seen_decision) {
                double delta = ctx.profile.value_at(ctx.game, e.to) - v_here;
                ExactAccumulator& acc = ctx.buckets[s.ply];
                acc.weight += weight * p;
                acc.sum += weight * p * delta;
                acc.sum_sq += weight * p * delta * delta;
                ++acc.edges;
            }
            enumerate(ctx, e.to, weight * p, seen_decision);
        }
        return;
    }

    if (kind.player == 0 && ctx.profile.policy.defined_at(s.key)) {
        auto dist = ctx.profile.policy.action_distribution(ctx.game, s);
        int idx = 0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            if (dist[i] > dist[static_cast<std::size_t>(idx)]) idx = static_cast<int>(i);
        }
        enumerate(ctx, succ[static_cast<std::size_t>(idx)].to, weight, true);
        return;
    }

    double p = 1.0 / static_cast<double>(succ.size());
    for (const auto& e : succ) enumerate(ctx, e.to, weight * p, true);
}

}  // namespace

VolatilityReport integrated_volatility_exact(const GameDef& game, std::uint64_t max_paths) {
    BrProfile profile = solve_profile(game, kInfiniteDepth, Heuristic::constant_half());
    ExactContext ctx{game, profile, {}, 0, max_paths};
    enumerate(ctx, game.initial_state(), 1.0, false);

    VolatilityReport report;
    report.method = "exact";
    report.n_trajectories = 0;
    for (const auto& [ply, acc] : ctx.buckets) {
        double var = 0.0;
        if (acc.weight > 0.0) {
            double mean = acc.sum / acc.weight;
            var = std::max(0.0, acc.sum_sq / acc.weight - mean * mean);
        }
        report.sigma_sq_by_ply.push_back({ply, var, acc.edges});
        report.sigma_total += var;
    }
    return report;
}

}  // namespace sli
