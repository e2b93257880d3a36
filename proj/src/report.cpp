#include "sli/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "sli/error.hpp"
#include "sli/games.hpp"
#include "sli/validate.hpp"

namespace sli {

namespace {

std::string fmt3(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

LeverageEstimate make_exact_estimate(double point) {
    LeverageEstimate e;
    e.point = std::max(0.0, point);
    e.raw_point = point;
    e.method = LeverageEstimate::Method::Exact;
    return e;
}

nlohmann::ordered_json leverage_to_json(const LeverageEstimate& e) {
    nlohmann::ordered_json j;
    j["point"] = e.point;
    j["method"] = e.exact() ? "exact" : "mc";
    j["standard_error"] = e.standard_error;
    if (e.ci95) {
        j["ci95"] = {e.ci95->first, e.ci95->second};
    } else {
        j["ci95"] = nullptr;
    }
    if (!e.exact()) {
        j["n_sims"] = e.n_sims;
        j["seed"] = e.seed;
        j["raw_point"] = e.raw_point;
    }
    return j;
}

nlohmann::ordered_json sigma_to_json(const VolatilityReport& v) {
    nlohmann::ordered_json j;
    j["total"] = v.sigma_total;
    j["method"] = v.method;
    j["standard_error"] = v.standard_error;
    j["n_trajectories"] = v.n_trajectories;
    nlohmann::ordered_json plies = nlohmann::ordered_json::array();
    for (const auto& p : v.sigma_sq_by_ply) {
        plies.push_back({{"ply", p.ply}, {"sigma_sq", p.sigma_sq}, {"count", p.count}});
    }
    j["by_ply"] = std::move(plies);
    return j;
}

}  // namespace

AnalyzeMode analyze_mode_from_name(const std::string& name) {
    if (name == "auto") return AnalyzeMode::Auto;
    if (name == "exact") return AnalyzeMode::Exact;
    if (name == "mc") return AnalyzeMode::MonteCarlo;
    if (name == "depth-limited") return AnalyzeMode::DepthLimited;
    throw ContractError("unknown mode '" + name + "'");
}

std::string analyze_mode_name(AnalyzeMode mode) {
    switch (mode) {
        case AnalyzeMode::Auto: return "auto";
        case AnalyzeMode::Exact: return "exact";
        case AnalyzeMode::MonteCarlo: return "mc";
        case AnalyzeMode::DepthLimited: return "depth-limited";
    }
    throw ContractError("invalid mode");
}

GameReport analyze(const GameDef& game, const AnalyzeConfig& config,
                   const std::map<std::string, int>& params) {
    auto t0 = std::chrono::steady_clock::now();

    GameReport report;
    report.game = game.id();
    report.params = params;
    report.seed = config.seed;
    report.n_sims = config.n_sims;
    report.depth = config.depth;

    bool truncated = false;
    bool over_budget = false;
    try {
        ValidationReport v = validate_game(game, config.exact_budget);
        if (!v.valid()) {
            std::string msg = "invalid game";
            for (const auto& e : v.errors) msg += "; " + e;
            throw StructuralError(msg);
        }
        report.unique_states = v.unique_states;
        truncated = v.truncated();
    } catch (const BudgetError&) {
        if (config.mode == AnalyzeMode::Exact) throw;
        over_budget = true;  // too large to enumerate; state count unknown
    }

    AnalyzeMode mode = config.mode;
    if (mode == AnalyzeMode::Auto) {
        if (over_budget) {
            mode = AnalyzeMode::DepthLimited;  // too large for exact enumeration
        } else if (truncated) {
            mode = AnalyzeMode::DepthLimited;
        } else {
            mode = AnalyzeMode::Exact;
        }
    }

    switch (mode) {
        case AnalyzeMode::Exact: {
            if (truncated) {
                throw StructuralError("exact mode requires an untruncated game; use depth-limited");
            }
            LeverageEstimate k = skill_leverage_exact(game, config.exact_budget);
            LeverageEstimate l = luck_leverage_exact(game, Policy::uniform(), config.exact_budget);
            report.index = skill_luck_index(k, l);
            report.sigma = integrated_volatility_exact(game, config.exact_budget);
            report.method = "exact";
            break;
        }
        case AnalyzeMode::MonteCarlo: {
            int depth = truncated ? config.depth : kInfiniteDepth;
            LeverageEstimate k = skill_leverage_mc(game, config.n_sims, config.seed, depth);
            LeverageEstimate l = luck_leverage_mc(game, Policy::uniform(), config.n_sims, config.seed);
            report.index = skill_luck_index(k, l);
            report.sigma = integrated_volatility(game, config.n_sims, config.seed, depth);
            report.method = "mc";
            break;
        }
        case AnalyzeMode::DepthLimited: {
            const Heuristic h = Heuristic::constant_half();
            const Policy uniform = Policy::uniform();
            State root = game.initial_state();
            double asym = asymmetric_value(game, root, config.depth, h);
            double rnd = value_under_profile_depth(game, root, uniform, uniform, config.depth, h);
            LeverageEstimate k = make_exact_estimate(asym - rnd);
            double lmax = luck_value(game, root, uniform, true, config.depth, h);
            double lmin = luck_value(game, root, uniform, false, config.depth, h);
            LeverageEstimate l = make_exact_estimate(lmax - lmin);
            report.index = skill_luck_index(k, l);
            report.sigma = integrated_volatility(game, config.n_sims, config.seed, config.depth, h);
            report.method = "depth-limited";
            break;
        }
        case AnalyzeMode::Auto:
            throw ContractError("unresolved mode");
    }

    auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return report;
}

std::vector<GameReport> table(const std::vector<std::string>& names, const AnalyzeConfig& config) {
    std::vector<GameReport> rows;
    rows.reserve(names.size());
    for (const auto& name : names) {
        GameReport row;
        row.game = name;
        try {
            GamePtr game = instantiate(name);
            std::map<std::string, int> params;
            for (const auto& spec : list_games()) {
                if (spec.name == name) params = spec.default_params;
            }
            row = analyze(*game, config, params);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const GameReport& a, const GameReport& b) {
        if (a.failed() != b.failed()) return b.failed();  // failures sink to the bottom
        if (a.failed()) return a.game < b.game;
        if (a.index.s != b.index.s) return a.index.s > b.index.s;
        return a.game < b.game;
    });
    return rows;
}

std::vector<DepthSweepRow> depth_sweep(const GameDef& game, const std::vector<int>& depths,
                                       const Heuristic& heuristic, std::uint64_t exact_budget) {
    const Policy uniform = Policy::uniform();
    const State root = game.initial_state();

    std::vector<DepthSweepRow> rows;
    for (int d : depths) {
        if (d < 0) throw ContractError("depth sweep requires nonnegative depths");
        DepthSweepRow row;
        row.depth = d;
        row.v_star = expectiminimax(game, root, d, heuristic);
        double asym = asymmetric_value(game, root, d, heuristic);
        double rnd = value_under_profile_depth(game, root, uniform, uniform, d, heuristic);
        row.k = std::max(0.0, asym - rnd);
        rows.push_back(row);
    }

    try {
        ValidationReport v = validate_game(game, exact_budget);
        if (v.valid() && !v.truncated()) {
            DepthSweepRow row;
            row.depth = -1;
            row.v_star = expectiminimax(game, root, kInfiniteDepth, heuristic);
            row.k = skill_leverage_exact(game, exact_budget).point;
            rows.push_back(row);
        }
    } catch (const BudgetError&) {
        // game too large for an exact reference row; sweep stands alone
    }
    return rows;
}

DesignExperiment design_experiment(const ExplicitTree& base, TransformKind kind, std::uint64_t seed) {
    DesignExperiment exp;
    exp.kind = kind;

    switch (kind) {
        case TransformKind::AddEarlyChance:
            exp.s_predicted = "decrease";
            exp.sigma_predicted = "increase";
            break;
        case TransformKind::AddDecisionDepth:
            exp.s_predicted = "increase";
            exp.sigma_predicted = "variable";
            break;
        case TransformKind::AmplifyTerminalVariance:
            exp.s_predicted = "decrease";
            exp.sigma_predicted = "increase";
            break;
        case TransformKind::ClusterLateChance:
            exp.s_predicted = "decrease";
            exp.sigma_predicted = "increase";
            break;
    }

    AnalyzeConfig config;
    config.mode = AnalyzeMode::Exact;
    config.seed = seed;

    ExplicitTree modified = apply_transform(base, kind, seed);
    exp.before = analyze(*as_game(base, "before"), config);
    exp.after = analyze(*as_game(modified, "after"), config);

    exp.delta_s = exp.after.index.s - exp.before.index.s;
    exp.delta_sigma = exp.after.sigma.sigma_total - exp.before.sigma.sigma_total;

    constexpr double kTol = 1e-9;  // weak inequalities
    exp.s_pass = exp.s_predicted == "increase" ? exp.delta_s >= -kTol : exp.delta_s <= kTol;
    exp.sigma_pass = exp.sigma_predicted == "variable" || exp.delta_sigma >= -kTol;
    return exp;
}

nlohmann::ordered_json report_to_json(const GameReport& report, bool include_timing) {
    nlohmann::ordered_json j;
    j["game"] = report.game;
    j["params"] = report.params;
    if (report.failed()) {
        j["error"] = report.error;
        return j;
    }
    j["method"] = report.method;
    j["seed"] = report.seed;
    if (report.method == "mc") j["n_sims"] = report.n_sims;
    if (report.method != "exact") j["depth"] = report.depth;
    j["unique_states"] = report.unique_states;
    j["k"] = leverage_to_json(report.index.k);
    j["l"] = leverage_to_json(report.index.l);
    j["s"] = report.index.s;
    j["degenerate"] = report.index.degenerate;
    j["sigma"] = sigma_to_json(report.sigma);
    if (include_timing) j["wall_ms"] = report.wall_ms;
    return j;
}

nlohmann::ordered_json table_to_json(const std::vector<GameReport>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) arr.push_back(report_to_json(row));
    return arr;
}

nlohmann::ordered_json design_to_json(const DesignExperiment& exp) {
    nlohmann::ordered_json j;
    j["transform"] = transform_kind_name(exp.kind);
    j["prediction"] = {{"s", exp.s_predicted}, {"sigma", exp.sigma_predicted}};
    j["before"] = report_to_json(exp.before);
    j["after"] = report_to_json(exp.after);
    j["delta_s"] = exp.delta_s;
    j["delta_sigma"] = exp.delta_sigma;
    j["s_pass"] = exp.s_pass;
    j["sigma_pass"] = exp.sigma_pass;
    j["pass"] = exp.s_pass && exp.sigma_pass;
    return j;
}

nlohmann::ordered_json depth_sweep_to_json(const std::string& game,
                                           const std::vector<DepthSweepRow>& rows) {
    nlohmann::ordered_json j;
    j["game"] = game;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        if (row.depth < 0) {
            r["depth"] = "exact";
        } else {
            r["depth"] = row.depth;
        }
        r["v_star"] = row.v_star;
        r["k"] = row.k;
        arr.push_back(std::move(r));
    }
    j["rows"] = std::move(arr);
    return j;
}

std::string table_to_csv(const std::vector<GameReport>& rows) {
    std::ostringstream out;
    out << "game,K,L,S,Sigma,method\n";
    for (const auto& row : rows) {
        if (row.failed()) {
            out << row.game << ",,,,,error\n";
            continue;
        }
        out << row.game << ',' << fmt3(row.index.k.point) << ',' << fmt3(row.index.l.point) << ','
            << fmt3(row.index.s) << ',' << fmt3(row.sigma.sigma_total) << ',' << row.method << '\n';
    }
    return out.str();
}

std::string depth_sweep_to_csv(const std::vector<DepthSweepRow>& rows) {
    std::ostringstream out;
    out << "depth,v_star,K\n";
    for (const auto& row : rows) {
        if (row.depth < 0) {
            out << "exact";
        } else {
            out << row.depth;
        }
        out << ',' << fmt3(row.v_star) << ',' << fmt3(row.k) << '\n';
    }
    return out.str();
}

std::string export_features(const std::vector<GameReport>& reports) {
    std::ostringstream out;
    out << "game,K,L,S,Sigma\n";
    for (const auto& row : reports) {
        if (row.failed()) continue;
        out << row.game << ',' << fmt3(row.index.k.point) << ',' << fmt3(row.index.l.point) << ','
            << fmt3(row.index.s) << ',' << fmt3(row.sigma.sigma_total) << '\n';
    }
    return out.str();
}

}  // namespace sli
