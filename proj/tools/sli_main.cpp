#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sli/error.hpp"
#include "sli/explicit_tree.hpp"
#include "sli/games.hpp"
#include "sli/report.hpp"
#include "sli/validate.hpp"

namespace {

// exit codes documented in --help
constexpr int kExitUsage = 2;
constexpr int kExitUnknownGame = 3;
constexpr int kExitBadTree = 4;
constexpr int kExitBudget = 5;

struct Options {
    std::string game;
    std::string tree_file;
    std::string mode = "auto";
    std::int64_t n_sims = 100'000;
    std::uint64_t seed = 0x5EED;
    int depth = 8;
    std::string format;
    std::string output;
    std::vector<std::string> params;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sli::ParseError(0, 0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sli::ContractError("cannot write '" + path + "'");
    out << text;
}

std::map<std::string, int> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, int> params;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw sli::ContractError("bad --param '" + kv + "', expected key=value");
        }
        try {
            params[kv.substr(0, eq)] = std::stoi(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw sli::ContractError("bad --param value in '" + kv + "'");
        }
    }
    return params;
}

sli::AnalyzeConfig to_config(const Options& opt) {
    sli::AnalyzeConfig config;
    config.mode = sli::analyze_mode_from_name(opt.mode);
    config.n_sims = opt.n_sims;
    config.seed = opt.seed;
    config.depth = opt.depth;
    return config;
}

// opt is shared across subcommands, so per-command format defaults are
// resolved at dispatch time rather than here
std::string format_or(const Options& opt, const char* fallback) {
    return opt.format.empty() ? fallback : opt.format;
}

// exactly one of --game / --tree
void check_source(const Options& opt) {
    if (opt.game.empty() == opt.tree_file.empty()) {
        throw sli::ContractError("exactly one of --game and --tree is required");
    }
}

sli::GamePtr load_source(const Options& opt, std::map<std::string, int>* params_out) {
    check_source(opt);
    if (!opt.game.empty()) {
        auto params = parse_params(opt.params);
        sli::GamePtr game = sli::instantiate(opt.game, params);
        if (params_out) {
            for (const auto& spec : sli::list_games()) {
                if (spec.name == opt.game) *params_out = spec.default_params;
            }
            for (const auto& [k, v] : params) (*params_out)[k] = v;
        }
        return game;
    }
    if (!opt.params.empty()) {
        throw sli::ContractError("--param applies to catalog games only");
    }
    sli::ExplicitTree tree = sli::parse_tree(read_file(opt.tree_file));
    return sli::as_game(std::move(tree), opt.tree_file);
}

std::string report_text(const sli::GameReport& r) {
    std::ostringstream out;
    out << "game:   " << r.game << "\n"
        << "method: " << r.method << "\n"
        << "K:      " << r.index.k.point << "\n"
        << "L:      " << r.index.l.point << "\n"
        << "S:      " << r.index.s << (r.index.degenerate ? "  (degenerate)" : "") << "\n"
        << "Sigma:  " << r.sigma.sigma_total << "\n";
    return out.str();
}

int cmd_list(const std::string& format, const std::string& output) {
    if (format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& spec : sli::list_games()) {
            nlohmann::ordered_json j;
            j["name"] = spec.name;
            j["params"] = spec.default_params;
            j["notes"] = spec.notes;
            arr.push_back(std::move(j));
        }
        write_output(output, arr.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    for (const auto& spec : sli::list_games()) {
        out << spec.name;
        if (!spec.default_params.empty()) {
            out << " (";
            bool first = true;
            for (const auto& [k, v] : spec.default_params) {
                if (!first) out << ", ";
                out << k << "=" << v;
                first = false;
            }
            out << ")";
        }
        if (!spec.notes.empty()) out << " — " << spec.notes;
        out << "\n";
    }
    write_output(output, out.str());
    return 0;
}

int cmd_validate(const std::string& tree_file, const std::string& format, const std::string& output) {
    sli::ExplicitTree tree = sli::parse_tree(read_file(tree_file));
    sli::GamePtr game = sli::as_game(tree, tree_file);
    sli::ValidationReport report = sli::validate_game(*game);

    if (format == "json") {
        nlohmann::ordered_json j;
        j["file"] = tree_file;
        j["valid"] = report.valid();
        j["unique_states"] = report.unique_states;
        j["edge_count"] = report.edge_count;
        j["truncated_leaves"] = report.truncated_leaves;
        j["max_depth_seen"] = report.max_depth_seen;
        j["errors"] = report.errors;
        j["warnings"] = report.warnings;
        write_output(output, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << tree_file << ": " << (report.valid() ? "valid" : "INVALID") << ", "
            << report.unique_states << " states, " << report.edge_count << " edges, depth "
            << report.max_depth_seen << "\n";
        for (const auto& e : report.errors) out << "error: " << e << "\n";
        for (const auto& w : report.warnings) out << "warning: " << w << "\n";
        write_output(output, out.str());
    }
    return report.valid() ? 0 : kExitBadTree;
}

int cmd_analyze(const Options& opt) {
    std::map<std::string, int> params;
    sli::GamePtr game = load_source(opt, &params);
    sli::AnalyzeConfig config = to_config(opt);
    sli::GameReport report = sli::analyze(*game, config, params);
    if (config.mode == sli::AnalyzeMode::Auto && report.method == "depth-limited") {
        std::cerr << "warning: game too large or truncated for exact mode; using depth-limited\n";
    }
    std::string format = format_or(opt, "json");
    if (format == "csv") {
        write_output(opt.output, sli::table_to_csv({report}));
    } else if (format == "text") {
        write_output(opt.output, report_text(report));
    } else {
        write_output(opt.output, sli::report_to_json(report).dump(2) + "\n");
    }
    return 0;
}

int cmd_table(const Options& opt) {
    std::vector<std::string> names;
    for (const auto& spec : sli::list_games()) names.push_back(spec.name);
    auto rows = sli::table(names, to_config(opt));
    if (format_or(opt, "csv") == "json") {
        write_output(opt.output, sli::table_to_json(rows).dump(2) + "\n");
    } else {
        write_output(opt.output, sli::table_to_csv(rows));
    }
    for (const auto& row : rows) {
        if (row.failed()) std::cerr << "warning: " << row.game << ": " << row.error << "\n";
    }
    return 0;
}

int cmd_depth_sweep(const Options& opt, const std::string& depths_arg) {
    sli::GamePtr game = load_source(opt, nullptr);
    std::vector<int> depths;
    std::stringstream ss(depths_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            depths.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw sli::ContractError("bad --depths entry '" + item + "'");
        }
    }
    if (depths.empty()) throw sli::ContractError("--depths is empty");
    auto rows = sli::depth_sweep(*game, depths);
    if (format_or(opt, "csv") == "json") {
        write_output(opt.output, sli::depth_sweep_to_json(game->id(), rows).dump(2) + "\n");
    } else {
        write_output(opt.output, sli::depth_sweep_to_csv(rows));
    }
    return 0;
}

int cmd_design(const std::string& base_file, const std::string& kind_name, std::uint64_t seed,
               const std::string& format, const std::string& output) {
    sli::TransformKind kind = sli::transform_kind_from_name(kind_name);
    sli::ExplicitTree base = sli::parse_tree(read_file(base_file));
    sli::check_tree(base);
    sli::DesignExperiment exp = sli::design_experiment(base, kind, seed);
    if (format == "text") {
        std::ostringstream out;
        out << "transform: " << sli::transform_kind_name(exp.kind) << "\n"
            << "S:     " << exp.before.index.s << " -> " << exp.after.index.s << "  predicted "
            << exp.s_predicted << "  " << (exp.s_pass ? "ok" : "VIOLATED") << "\n"
            << "Sigma: " << exp.before.sigma.sigma_total << " -> " << exp.after.sigma.sigma_total
            << "  predicted " << exp.sigma_predicted << "  " << (exp.sigma_pass ? "ok" : "VIOLATED")
            << "\n";
        write_output(output, out.str());
    } else {
        write_output(output, sli::design_to_json(exp).dump(2) + "\n");
    }
    return (exp.s_pass && exp.sigma_pass) ? 0 : 1;
}

int cmd_export_features(const Options& opt) {
    std::vector<std::string> names;
    for (const auto& spec : sli::list_games()) names.push_back(spec.name);
    auto rows = sli::table(names, to_config(opt));
    write_output(opt.output, sli::export_features(rows));
    for (const auto& row : rows) {
        if (row.failed()) std::cerr << "warning: " << row.game << ": " << row.error << "\n";
    }
    return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--mode", opt.mode, "auto|exact|mc|depth-limited")->default_str("auto");
    cmd->add_option("--n", opt.n_sims, "Monte-Carlo sample count")->default_str("100000");
    cmd->add_option("--seed", opt.seed, "RNG seed (default 0x5EED)");
    cmd->add_option("--depth", opt.depth, "search depth for depth-limited mode")->default_str("8");
    cmd->add_option("--format", opt.format, "csv|json|text")->check(CLI::IsMember({"csv", "json", "text"}));
    cmd->add_option("--output", opt.output, "write to file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Skill-luck analysis for finite two-player zero-sum games with chance nodes.\n"
        "Computes skill leverage K, luck leverage L, the index S = (K-L)/(K+L) and\n"
        "integrated volatility Sigma, exactly or by seeded Monte-Carlo.\n"
        "\n"
        "Exit codes: 0 ok, 1 failure, 2 usage, 3 unknown game, 4 bad tree, 5 budget exceeded.\n"
        "Set SLI_WORKERS to change the worker-thread count; results are identical\n"
        "regardless. Hidden-information modifications are out of scope: every game\n"
        "here is perfect-information."};
    app.require_subcommand(1);

    Options opt;
    std::string depths_arg = "1,2,3,4,5,6,7,8";
    std::string kind_name;
    std::string base_file;

    auto* list = app.add_subcommand("list", "List the built-in games");
    std::string list_format = "text";
    std::string list_output;
    list->add_option("--format", list_format, "text|json")->check(CLI::IsMember({"text", "json"}));
    list->add_option("--output", list_output, "write to file instead of stdout");

    auto* validate = app.add_subcommand("validate", "Check a tree file");
    validate->add_option("--tree", opt.tree_file, "tree file (gametree v1)")->required();
    std::string validate_format = "text";
    std::string validate_output;
    validate->add_option("--format", validate_format, "text|json")->check(CLI::IsMember({"text", "json"}));
    validate->add_option("--output", validate_output, "write to file instead of stdout");

    auto* analyze = app.add_subcommand("analyze", "Compute K, L, S and Sigma for one game");
    analyze->add_option("--game", opt.game, "catalog game name");
    analyze->add_option("--tree", opt.tree_file, "tree file (gametree v1)");
    analyze->add_option("--param", opt.params, "game parameter key=value (repeatable)");
    add_common(analyze, opt);

    auto* table = app.add_subcommand("table", "Analyze the whole catalog, sorted by S");
    bool table_all = false;
    table->add_flag("--all", table_all, "include every catalog game")->required();
    add_common(table, opt);

    auto* sweep = app.add_subcommand("depth-sweep", "Depth-limited V* and K per depth");
    sweep->add_option("--game", opt.game, "catalog game name");
    sweep->add_option("--tree", opt.tree_file, "tree file (gametree v1)");
    sweep->add_option("--param", opt.params, "game parameter key=value (repeatable)");
    sweep->add_option("--depths", depths_arg, "comma-separated depth list")->default_str(depths_arg);
    add_common(sweep, opt);

    auto* design = app.add_subcommand("design", "Apply a design modification and compare metrics");
    design->add_option("--base", base_file, "base tree file")->required();
    design->add_option("--kind", kind_name,
                       "add-early-chance|add-decision-depth|amplify-terminal-variance|cluster-late-chance")
        ->required();
    add_common(design, opt);

    auto* features = app.add_subcommand("export-features", "Per-game K,L,S,Sigma matrix as CSV");
    add_common(features, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (list->parsed()) return cmd_list(list_format, list_output);
        if (validate->parsed()) return cmd_validate(opt.tree_file, validate_format, validate_output);
        if (analyze->parsed()) return cmd_analyze(opt);
        if (table->parsed()) return cmd_table(opt);
        if (sweep->parsed()) return cmd_depth_sweep(opt, depths_arg);
        if (design->parsed()) return cmd_design(base_file, kind_name, opt.seed, format_or(opt, "json"), opt.output);
        if (features->parsed()) return cmd_export_features(opt);
    } catch (const sli::UnknownGameError& e) {
        std::cerr << "error: unknown game: " << e.what() << "\n";
        return kExitUnknownGame;
    } catch (const sli::ParseError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return kExitBadTree;
    } catch (const sli::StructuralError& e) {
        std::cerr << "error: structure: " << e.what() << "\n";
        return kExitBadTree;
    } catch (const sli::BudgetError& e) {
        std::cerr << "error: budget: " << e.what() << "\n";
        return kExitBudget;
    } catch (const sli::ContractError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
