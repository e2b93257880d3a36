#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sli/explicit_tree.hpp"
#include "sli/game.hpp"
#include "sli/leverage.hpp"
#include "sli/transforms.hpp"
#include "sli/volatility.hpp"

namespace sli {

enum class AnalyzeMode { Auto, Exact, MonteCarlo, DepthLimited };

AnalyzeMode analyze_mode_from_name(const std::string& name);
std::string analyze_mode_name(AnalyzeMode mode);

struct AnalyzeConfig {
    AnalyzeMode mode = AnalyzeMode::Auto;
    std::int64_t n_sims = 100'000;
    std::uint64_t seed = 0x5EED;  // documented default
    int depth = 8;
    std::uint64_t exact_budget = 1'000'000;  // auto picks exact below this many states
};

struct GameReport {
    std::string game;
    std::map<std::string, int> params;
    SkillLuckIndex index;
    VolatilityReport sigma;
    std::string method;  // resolved mode: "exact" | "mc" | "depth-limited"
    std::uint64_t seed = 0;
    std::int64_t n_sims = 0;
    int depth = 0;
    std::uint64_t unique_states = 0;
    double wall_ms = 0.0;
    std::string error;  // nonempty when a table row failed

    bool failed() const { return !error.empty(); }
};

GameReport analyze(const GameDef& game, const AnalyzeConfig& config,
                   const std::map<std::string, int>& params = {});

// All rows sorted by S descending, ties by name; per-game failures are
// recorded in-row and the run continues.
std::vector<GameReport> table(const std::vector<std::string>& names, const AnalyzeConfig& config);

struct DepthSweepRow {
    int depth = 0;  // -1 marks the exact row
    double v_star = 0.0;
    double k = 0.0;
};

std::vector<DepthSweepRow> depth_sweep(const GameDef& game, const std::vector<int>& depths,
                                       const Heuristic& heuristic = Heuristic::constant_half(),
                                       std::uint64_t exact_budget = 1'000'000);

struct DesignExperiment {
    TransformKind kind;
    GameReport before;
    GameReport after;
    std::string s_predicted;      // "decrease" | "increase"
    std::string sigma_predicted;  // "increase" | "variable"
    double delta_s = 0.0;
    double delta_sigma = 0.0;
    bool s_pass = false;
    bool sigma_pass = false;  // true when predicted "variable"
};

// Applies the restricted transformation, recomputes exact metrics, and
// records whether S and Sigma moved in the predicted direction (weak
// inequalities).
DesignExperiment design_experiment(const ExplicitTree& base, TransformKind kind, std::uint64_t seed);

// serialization -------------------------------------------------------------

nlohmann::ordered_json report_to_json(const GameReport& report, bool include_timing = false);
nlohmann::ordered_json table_to_json(const std::vector<GameReport>& rows);
nlohmann::ordered_json design_to_json(const DesignExperiment& exp);
nlohmann::ordered_json depth_sweep_to_json(const std::string& game, const std::vector<DepthSweepRow>& rows);

std::string table_to_csv(const std::vector<GameReport>& rows);
std::string depth_sweep_to_csv(const std::vector<DepthSweepRow>& rows);

// Plot-ready feature matrix: one row per successful report, columns
// game,K,L,S,Sigma.
std::string export_features(const std::vector<GameReport>& reports);

}  // namespace sli
