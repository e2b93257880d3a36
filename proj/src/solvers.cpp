#include "sli/solvers.hpp"

#include <algorithm>
#include <map>

#include "sli/error.hpp"

namespace sli {

namespace {

double truncated_value() { return 0.5; }  // truncated leaves count as a draw

void check_cache_mode(const ValueCache* cache, const char* expected) {
    if (cache && cache->mode != expected) {
        throw ContractError(std::string("ValueCache mode '") + cache->mode + "' used for '" + expected + "'");
    }
}

struct ExpectiContext {
    const GameDef& game;
    const Heuristic& heuristic;
    ValueCache* cache;
};

double expecti_rec(ExpectiContext& ctx, const State& s, int depth, double alpha, double beta) {
    NodeKind kind = ctx.game.node_kind(s);
    if (kind.is_terminal()) return kind.payoff;

    const bool infinite = depth == kInfiniteDepth;
    if (s.ply >= ctx.game.max_ply()) {
        if (infinite) {
            throw StructuralError("expectiminimax: depth-unlimited solve hit truncation at max_ply in game '" +
                                  ctx.game.id() + "'; run depth-limited");
        }
        return truncated_value();
    }
    if (!infinite && depth == 0) return ctx.heuristic.eval(ctx.game, s);

    // exact cached values stay valid inside any window
    if (ctx.cache && infinite) {
        auto it = ctx.cache->values.find(s.key);
        if (it != ctx.cache->values.end()) {
            ++ctx.cache->hits;
            return it->second;
        }
        ++ctx.cache->misses;
    }
    const bool full_window = alpha <= 0.0 && beta >= 1.0;

    auto succ = ctx.game.successors(s);
    if (succ.empty()) throw StructuralError("nonterminal node with no successors");
    const int next_depth = infinite ? kInfiniteDepth : depth - 1;

    double v;
    if (kind.is_chance()) {
        // children get the full window again: an inherited cut below a
        // chance node would feed a bound, not a value, into the
        // expectation and change the result
        v = 0.0;
        for (const auto& e : succ) {
            v += e.prob.value_or(0.0) * expecti_rec(ctx, e.to, next_depth, 0.0, 1.0);
        }
    } else if (kind.player == 0) {
        v = -1.0;
        double a = alpha;
        for (const auto& e : succ) {
            v = std::max(v, expecti_rec(ctx, e.to, next_depth, a, beta));
            a = std::max(a, v);
            if (beta <= a) break;
        }
    } else {
        v = 2.0;
        double b = beta;
        for (const auto& e : succ) {
            v = std::min(v, expecti_rec(ctx, e.to, next_depth, alpha, b));
            b = std::min(b, v);
            if (b <= alpha) break;
        }
    }

    // only full-window results are exact and safe to memoize
    if (ctx.cache && infinite && full_window) ctx.cache->values.emplace(s.key, v);
    return v;
}

struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, int>& p) const {
        std::uint64_t x = p.first + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(p.second + 7);
        x ^= x >> 33;
        x *= 0xFF51AFD7ED558CCDULL;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
};

}  // namespace

Heuristic Heuristic::constant_half() {
    return {"const0.5", [](const GameDef&, const State&) { return 0.5; }};
}

double expectiminimax(const GameDef& game, const State& s, int depth, const Heuristic& heuristic,
                      double alpha, double beta, ValueCache* cache) {
    if (alpha > beta) throw ContractError("expectiminimax: alpha > beta at entry");
    if (depth < 0 && depth != kInfiniteDepth) throw ContractError("expectiminimax: negative depth");
    check_cache_mode(cache, "minimax");
    ExpectiContext ctx{game, heuristic, cache};
    return expecti_rec(ctx, s, depth, alpha, beta);
}

namespace {

double profile_rec(const GameDef& game, const State& s, const Policy& policy0, const Policy& policy1,
                   std::unordered_map<std::uint64_t, double>& memo, ValueCache* cache) {
    NodeKind kind = game.node_kind(s);
    if (kind.is_terminal()) return kind.payoff;
    if (s.ply >= game.max_ply()) return truncated_value();

    if (auto it = memo.find(s.key); it != memo.end()) {
        if (cache) ++cache->hits;
        return it->second;
    }
    if (cache) ++cache->misses;

    auto succ = game.successors(s);
    if (succ.empty()) throw StructuralError("nonterminal node with no successors");

    double v = 0.0;
    if (kind.is_chance()) {
        for (const auto& e : succ) {
            v += e.prob.value_or(0.0) * profile_rec(game, e.to, policy0, policy1, memo, cache);
        }
    } else {
        const Policy& pol = kind.player == 0 ? policy0 : policy1;
        auto dist = pol.action_distribution(game, s);
        for (std::size_t i = 0; i < succ.size(); ++i) {
            if (dist[i] == 0.0) continue;
            v += dist[i] * profile_rec(game, succ[i].to, policy0, policy1, memo, cache);
        }
    }
    memo.emplace(s.key, v);
    return v;
}

}  // namespace

double value_under_profile(const GameDef& game, const State& s, const Policy& policy0,
                           const Policy& policy1, ValueCache* cache) {
    check_cache_mode(cache, "profile");
    if (cache) return profile_rec(game, s, policy0, policy1, cache->values, cache);
    std::unordered_map<std::uint64_t, double> memo;
    return profile_rec(game, s, policy0, policy1, memo, nullptr);
}

namespace {

double profile_depth_rec(const GameDef& game, const State& s, const Policy& policy0,
                         const Policy& policy1, int depth, const Heuristic& heuristic,
                         std::unordered_map<std::pair<std::uint64_t, int>, double, PairHash>& memo) {
    NodeKind kind = game.node_kind(s);
    if (kind.is_terminal()) return kind.payoff;
    if (s.ply >= game.max_ply()) return truncated_value();
    if (depth == 0) return heuristic.eval(game, s);

    auto memo_key = std::make_pair(s.key, depth);
    if (auto it = memo.find(memo_key); it != memo.end()) return it->second;

    auto succ = game.successors(s);
    if (succ.empty()) throw StructuralError("nonterminal node with no successors");
    const int next_depth = depth == kInfiniteDepth ? kInfiniteDepth : depth - 1;

    double v = 0.0;
    if (kind.is_chance()) {
        for (const auto& e : succ) {
            v += e.prob.value_or(0.0) *
                 profile_depth_rec(game, e.to, policy0, policy1, next_depth, heuristic, memo);
        }
    } else {
        const Policy& pol = kind.player == 0 ? policy0 : policy1;
        auto dist = pol.action_distribution(game, s);
        for (std::size_t i = 0; i < succ.size(); ++i) {
            if (dist[i] == 0.0) continue;
            v += dist[i] * profile_depth_rec(game, succ[i].to, policy0, policy1, next_depth, heuristic, memo);
        }
    }
    memo.emplace(memo_key, v);
    return v;
}

}  // namespace

double value_under_profile_depth(const GameDef& game, const State& s, const Policy& policy0,
                                 const Policy& policy1, int depth, const Heuristic& heuristic) {
    if (depth < 0 && depth != kInfiniteDepth) throw ContractError("value_under_profile_depth: negative depth");
    std::unordered_map<std::pair<std::uint64_t, int>, double, PairHash> memo;
    return profile_depth_rec(game, s, policy0, policy1, depth, heuristic, memo);
}

namespace {

struct BrContext {
    const GameDef& game;
    const Policy& opponent;
    int for_player;
    const Heuristic& heuristic;
    std::unordered_map<std::pair<std::uint64_t, int>, double, PairHash> memo;
    std::unordered_map<std::uint64_t, int> choices;
    std::unordered_map<std::uint64_t, int> arity;
};

double br_rec(BrContext& ctx, const State& s, int depth) {
    NodeKind kind = ctx.game.node_kind(s);
    if (kind.is_terminal()) return kind.payoff;
    if (s.ply >= ctx.game.max_ply()) return truncated_value();
    if (depth == 0) return ctx.heuristic.eval(ctx.game, s);

    auto memo_key = std::make_pair(s.key, depth);
    if (auto it = ctx.memo.find(memo_key); it != ctx.memo.end()) return it->second;

    auto succ = ctx.game.successors(s);
    if (succ.empty()) throw StructuralError("nonterminal node with no successors");
    const int next_depth = depth == kInfiniteDepth ? kInfiniteDepth : depth - 1;

    double v = 0.0;
    if (kind.is_chance()) {
        for (const auto& e : succ) v += e.prob.value_or(0.0) * br_rec(ctx, e.to, next_depth);
    } else if (kind.player == ctx.for_player) {
        // player 0 maximizes, player 1 minimizes; ties break to lowest index
        int best_idx = 0;
        double best = br_rec(ctx, succ[0].to, next_depth);
        for (std::size_t i = 1; i < succ.size(); ++i) {
            double cv = br_rec(ctx, succ[i].to, next_depth);
            bool better = ctx.for_player == 0 ? cv > best : cv < best;
            if (better) {
                best = cv;
                best_idx = static_cast<int>(i);
            }
        }
        ctx.choices[s.key] = best_idx;
        ctx.arity[s.key] = static_cast<int>(succ.size());
        v = best;
    } else {
        // opponent folded into a weighted chance node
        auto dist = ctx.opponent.action_distribution(ctx.game, s);
        for (std::size_t i = 0; i < succ.size(); ++i) {
            if (dist[i] == 0.0) continue;
            v += dist[i] * br_rec(ctx, succ[i].to, next_depth);
        }
    }
    ctx.memo.emplace(memo_key, v);
    return v;
}

}  // namespace

BestResponse best_response(const GameDef& game, const Policy& opponent, int for_player, int depth,
                           const Heuristic& heuristic) {
    if (for_player != 0 && for_player != 1) throw ContractError("best_response: player must be 0 or 1");
    if (depth < 0 && depth != kInfiniteDepth) throw ContractError("best_response: negative depth");

    BrContext ctx{game, opponent, for_player, heuristic, {}, {}, {}};
    double root = br_rec(ctx, game.initial_state(), depth);

    BestResponse out{Policy::tabular_choice(for_player, ctx.choices, ctx.arity), root, {}};
    if (depth == kInfiniteDepth) {
        out.values.reserve(ctx.memo.size());
        for (const auto& [mk, v] : ctx.memo) out.values.emplace(mk.first, v);
    }
    return out;
}

double asymmetric_value(const GameDef& game, const State& s, int depth, const Heuristic& heuristic) {
    if (depth < 0 && depth != kInfiniteDepth) throw ContractError("asymmetric_value: negative depth");
    Policy uniform = Policy::uniform();
    BrContext ctx{game, uniform, 0, heuristic, {}, {}, {}};
    return br_rec(ctx, s, depth);
}

namespace {

struct LuckContext {
    const GameDef& game;
    const Policy& reference;
    bool nature_max;
    const Heuristic& heuristic;
    std::uint64_t max_states;
    std::unordered_map<std::pair<std::uint64_t, int>, double, PairHash> memo;
    ValueCache* cache;
};

double luck_rec(LuckContext& ctx, const State& s, int depth) {
    NodeKind kind = ctx.game.node_kind(s);
    if (kind.is_terminal()) return kind.payoff;
    if (s.ply >= ctx.game.max_ply()) return truncated_value();
    if (depth == 0) return ctx.heuristic.eval(ctx.game, s);

    const bool infinite = depth == kInfiniteDepth;
    if (ctx.cache && infinite) {
        auto it = ctx.cache->values.find(s.key);
        if (it != ctx.cache->values.end()) {
            ++ctx.cache->hits;
            return it->second;
        }
        ++ctx.cache->misses;
    }
    auto memo_key = std::make_pair(s.key, depth);
    if (auto it = ctx.memo.find(memo_key); it != ctx.memo.end()) return it->second;
    if (ctx.memo.size() >= ctx.max_states) {
        throw BudgetError("luck_value: enumeration exceeds budget of " + std::to_string(ctx.max_states) +
                          " states for game '" + ctx.game.id() + "'");
    }

    auto succ = ctx.game.successors(s);
    if (succ.empty()) throw StructuralError("nonterminal node with no successors");
    const int next_depth = infinite ? kInfiniteDepth : depth - 1;

    double v;
    if (kind.is_chance()) {
        v = luck_rec(ctx, succ[0].to, next_depth);
        for (std::size_t i = 1; i < succ.size(); ++i) {
            double cv = luck_rec(ctx, succ[i].to, next_depth);
            v = ctx.nature_max ? std::max(v, cv) : std::min(v, cv);
        }
    } else {
        v = 0.0;
        auto dist = ctx.reference.action_distribution(ctx.game, s);
        for (std::size_t i = 0; i < succ.size(); ++i) {
            if (dist[i] == 0.0) continue;
            v += dist[i] * luck_rec(ctx, succ[i].to, next_depth);
        }
    }
    ctx.memo.emplace(memo_key, v);
    if (ctx.cache && infinite) ctx.cache->values.emplace(s.key, v);
    return v;
}

}  // namespace

double luck_value(const GameDef& game, const State& s, const Policy& reference, bool nature_max,
                  int depth, const Heuristic& heuristic, ValueCache* cache, std::uint64_t max_states) {
    if (depth < 0 && depth != kInfiniteDepth) throw ContractError("luck_value: negative depth");
    check_cache_mode(cache, nature_max ? "luck-max" : "luck-min");
    LuckContext ctx{game, reference, nature_max, heuristic, max_states, {}, cache};
    return luck_rec(ctx, s, depth);
}

}  // namespace sli
