#include "sli/leverage.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sli/error.hpp"
#include "sli/parallel.hpp"
#include "sli/rng.hpp"

namespace sli {

namespace {

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += (x - mean) * (x - mean);
    return sum / static_cast<double>(v.size() - 1);
}

// One play-through; `br0` non-null means Player 0 follows it (uniform
// fallback past a depth-limited table's horizon), otherwise uniform.
double rollout(const GameDef& game, const Policy& uniform_policy, const Policy* br0, Rng& rng) {
    State s = game.initial_state();
    for (;;) {
        NodeKind kind = game.node_kind(s);
        if (kind.is_terminal()) return kind.payoff;
        if (s.ply >= game.max_ply()) return 0.5;
        auto succ = game.successors(s);
        int idx;
        if (kind.is_chance()) {
            std::vector<double> w;
            w.reserve(succ.size());
            for (const auto& e : succ) w.push_back(e.prob.value_or(0.0));
            idx = rng.pick_weighted(w);
        } else if (kind.player == 0 && br0 && br0->defined_at(s.key)) {
            auto dist = br0->action_distribution(game, s);
            idx = 0;
            for (std::size_t i = 0; i < dist.size(); ++i) {
                if (dist[i] > dist[static_cast<std::size_t>(idx)]) idx = static_cast<int>(i);
            }
        } else {
            auto dist = uniform_policy.action_distribution(game, s);
            idx = rng.pick_weighted(dist);
        }
        s = succ[static_cast<std::size_t>(idx)].to;
    }
}

struct McArms {
    std::vector<double> br_arm;
    std::vector<double> rnd_arm;
};

McArms run_skill_arms(const GameDef& game, std::int64_t n_sims, std::uint64_t seed, int depth,
                      const Heuristic& heuristic) {
    if (n_sims < 1) throw ContractError("skill_leverage_mc: n_sims must be >= 1");
    Policy uniform = Policy::uniform();
    BestResponse br = best_response(game, uniform, 0, depth, heuristic);

    McArms arms;
    arms.br_arm.resize(static_cast<std::size_t>(n_sims));
    arms.rnd_arm.resize(static_cast<std::size_t>(n_sims));
    parallel_for(n_sims, [&](std::int64_t i) {
        // paired streams: both arms replay stream (seed, i)
        Rng rng1 = Rng::stream(seed, static_cast<std::uint64_t>(i));
        arms.br_arm[static_cast<std::size_t>(i)] = rollout(game, uniform, &br.policy, rng1);
        Rng rng2 = Rng::stream(seed, static_cast<std::uint64_t>(i));
        arms.rnd_arm[static_cast<std::size_t>(i)] = rollout(game, uniform, nullptr, rng2);
    });
    return arms;
}

}  // namespace

LeverageEstimate skill_leverage_exact(const GameDef& game, std::uint64_t max_states) {
    Policy uniform = Policy::uniform();
    BestResponse br = best_response(game, uniform, 0);
    if (br.values.size() > max_states) {
        throw BudgetError("skill_leverage_exact: game '" + game.id() +
                          "' exceeds state budget; use Monte-Carlo or depth-limited mode");
    }
    double v_rnd = value_under_profile(game, game.initial_state(), uniform, uniform);

    LeverageEstimate est;
    est.method = LeverageEstimate::Method::Exact;
    est.raw_point = br.root_value - v_rnd;
    est.point = est.raw_point;
    return est;
}

LeverageEstimate skill_leverage_mc(const GameDef& game, std::int64_t n_sims, std::uint64_t seed,
                                   int depth, const Heuristic& heuristic) {
    McArms arms = run_skill_arms(game, n_sims, seed, depth, heuristic);
    double m1 = mean_of(arms.br_arm);
    double m2 = mean_of(arms.rnd_arm);
    double var1 = sample_variance(arms.br_arm, m1);
    double var2 = sample_variance(arms.rnd_arm, m2);
    double n = static_cast<double>(n_sims);

    LeverageEstimate est;
    est.method = LeverageEstimate::Method::MonteCarlo;
    est.n_sims = n_sims;
    est.seed = seed;
    est.raw_point = m1 - m2;
    est.point = std::max(0.0, est.raw_point);  // true value is >= 0
    est.standard_error = std::sqrt(var1 / n + var2 / n);
    est.ci95 = std::make_pair(est.point - 1.96 * est.standard_error,
                              est.point + 1.96 * est.standard_error);
    return est;
}

std::vector<double> skill_leverage_samples(const GameDef& game, std::int64_t n_sims, std::uint64_t seed,
                                           int depth, const Heuristic& heuristic) {
    McArms arms = run_skill_arms(game, n_sims, seed, depth, heuristic);
    std::vector<double> diffs(static_cast<std::size_t>(n_sims));
    for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = arms.br_arm[i] - arms.rnd_arm[i];
    return diffs;
}

LeverageEstimate luck_leverage_exact(const GameDef& game, const Policy& reference,
                                     std::uint64_t max_states) {
    State root = game.initial_state();
    double vmax = luck_value(game, root, reference, /*nature_max=*/true, kInfiniteDepth,
                             Heuristic::constant_half(), nullptr, max_states);
    double vmin = luck_value(game, root, reference, /*nature_max=*/false, kInfiniteDepth,
                             Heuristic::constant_half(), nullptr, max_states);

    LeverageEstimate est;
    est.method = LeverageEstimate::Method::Exact;
    est.raw_point = vmax - vmin;
    est.point = est.raw_point;
    return est;
}

namespace {

// EvalWithNature over one lazily-sampled deterministic realization of the
// reference policy: the same action is replayed whenever a state key
// recurs, and nature enumerates chance children with MAX or MIN.
double eval_with_nature(const GameDef& game, const State& s, const Policy& reference, bool nature_max,
                        std::unordered_map<std::uint64_t, int>& realized, Rng& rng,
                        std::uint64_t& visits, std::uint64_t budget) {
    if (++visits > budget) {
        throw BudgetError("luck_leverage_mc: chance-path enumeration exceeds budget for game '" +
                          game.id() + "'");
    }
    NodeKind kind = game.node_kind(s);
    if (kind.is_terminal()) return kind.payoff;
    if (s.ply >= game.max_ply()) return 0.5;
    auto succ = game.successors(s);

    if (kind.is_decision()) {
        auto it = realized.find(s.key);
        int idx;
        if (it != realized.end()) {
            idx = it->second;
        } else {
            auto dist = reference.action_distribution(game, s);
            idx = rng.pick_weighted(dist);
            realized.emplace(s.key, idx);
        }
        return eval_with_nature(game, succ[static_cast<std::size_t>(idx)].to, reference, nature_max,
                                realized, rng, visits, budget);
    }

    double v = eval_with_nature(game, succ[0].to, reference, nature_max, realized, rng, visits, budget);
    for (std::size_t i = 1; i < succ.size(); ++i) {
        double cv = eval_with_nature(game, succ[i].to, reference, nature_max, realized, rng, visits, budget);
        v = nature_max ? std::max(v, cv) : std::min(v, cv);
    }
    return v;
}

}  // namespace

LeverageEstimate luck_leverage_mc(const GameDef& game, const Policy& reference, std::int64_t n_sims,
                                  std::uint64_t seed, std::uint64_t max_states) {
    if (n_sims < 1) throw ContractError("luck_leverage_mc: n_sims must be >= 1");

    // headline follows the exact-mode (max-of-expectation) semantics
    State root = game.initial_state();
    double vmax = luck_value(game, root, reference, true, kInfiniteDepth, Heuristic::constant_half(),
                             nullptr, max_states);
    double vmin = luck_value(game, root, reference, false, kInfiniteDepth, Heuristic::constant_half(),
                             nullptr, max_states);
    double exact_point = vmax - vmin;

    // sampled policy realizations: variance diagnostics only
    std::vector<double> diffs(static_cast<std::size_t>(n_sims));
    parallel_for(n_sims, [&](std::int64_t i) {
        Rng rng = Rng::stream(seed ^ 0x6C75636BULL, static_cast<std::uint64_t>(i));
        std::unordered_map<std::uint64_t, int> realized;
        std::uint64_t visits = 0;
        double dmax = eval_with_nature(game, root, reference, true, realized, rng, visits, max_states);
        double dmin = eval_with_nature(game, root, reference, false, realized, rng, visits, max_states);
        diffs[static_cast<std::size_t>(i)] = dmax - dmin;
    });
    double diag_mean = mean_of(diffs);
    double diag_var = sample_variance(diffs, diag_mean);

    LeverageEstimate est;
    est.method = LeverageEstimate::Method::MonteCarlo;
    est.n_sims = n_sims;
    est.seed = seed;
    est.point = std::max(0.0, exact_point);
    est.raw_point = diag_mean;  // realization-trajectory mean (expectation-of-max)
    est.standard_error = std::sqrt(diag_var / static_cast<double>(n_sims));
    est.ci95 = std::make_pair(est.point - 1.96 * est.standard_error,
                              est.point + 1.96 * est.standard_error);
    return est;
}

SkillLuckIndex skill_luck_index(const LeverageEstimate& k, const LeverageEstimate& l) {
    constexpr double kNegTolerance = 1e-9;
    if (k.point < -kNegTolerance || l.point < -kNegTolerance) {
        throw ContractError("skill_luck_index: leverage inputs must be nonnegative");
    }
    double kv = std::max(0.0, k.point);
    double lv = std::max(0.0, l.point);

    SkillLuckIndex idx;
    idx.k = k;
    idx.l = l;
    if (kv + lv > 0.0) {
        idx.s = (kv - lv) / (kv + lv);
        idx.degenerate = false;
    } else {
        idx.s = 0.0;
        idx.degenerate = true;
    }
    return idx;
}

}  // namespace sli
