#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sli/games.hpp"
#include "sli/report.hpp"

using namespace sli;

namespace {

AnalyzeConfig exact_config() {
    AnalyzeConfig c;
    c.mode = AnalyzeMode::Exact;
    return c;
}

}  // namespace

TEST_CASE("analyze produces the golden exact reports") {
    GameReport toy = analyze(*instantiate("toy"), exact_config());
    CHECK(toy.method == "exact");
    CHECK(toy.index.k.point == 0.25);
    CHECK(toy.index.l.point == 0.5);
    CHECK(std::abs(toy.index.s - (-1.0 / 3.0)) <= 1e-12);
    CHECK(toy.sigma.sigma_total == 0.0);
    // S recomputes from its own K and L
    CHECK(std::abs(toy.index.s - (toy.index.k.point - toy.index.l.point) /
                                     (toy.index.k.point + toy.index.l.point)) <= 1e-12);

    GameReport coin = analyze(*instantiate("coin_toss"), exact_config());
    CHECK(coin.index.k.point == 0.0);
    CHECK(coin.index.l.point == 1.0);
    CHECK(coin.index.s == -1.0);
    CHECK(coin.sigma.sigma_total == 0.0);

    GameReport ttt = analyze(*instantiate("tictactoe"), exact_config());
    CHECK(ttt.index.l.point == 0.0);
    CHECK(ttt.index.s == 1.0);
    CHECK(ttt.sigma.sigma_total == 0.0);
    CHECK(ttt.index.k.point > 0.0);
    CHECK(ttt.unique_states == 5478);
}

TEST_CASE("analyze auto mode picks exact for small games") {
    AnalyzeConfig c;
    GameReport r = analyze(*instantiate("toy"), c);
    CHECK(r.method == "exact");
}

TEST_CASE("exact mode over budget raises a budget error naming the size") {
    AnalyzeConfig c = exact_config();
    c.exact_budget = 100;
    CHECK_THROWS_AS(analyze(*instantiate("tictactoe"), c), BudgetError);
}

TEST_CASE("mc mode reports seeded estimates") {
    AnalyzeConfig c;
    c.mode = AnalyzeMode::MonteCarlo;
    c.n_sims = 5'000;
    c.seed = 99;
    GameReport r = analyze(*instantiate("toy"), c);
    CHECK(r.method == "mc");
    CHECK(r.index.k.n_sims == 5'000);
    CHECK(r.index.k.seed == 99);
    CHECK(std::abs(r.index.k.point - 0.25) <= 4.0 * r.index.k.standard_error);
    GameReport r2 = analyze(*instantiate("toy"), c);
    CHECK(r.index.k.point == r2.index.k.point);  // seed-reproducible
    CHECK(r.index.s == r2.index.s);
}

TEST_CASE("depth-limited mode works on exactly solvable games too") {
    AnalyzeConfig c;
    c.mode = AnalyzeMode::DepthLimited;
    c.depth = 9;
    c.n_sims = 2'000;
    GameReport r = analyze(*instantiate("tictactoe"), c);
    CHECK(r.method == "depth-limited");
    double exact_k = analyze(*instantiate("tictactoe"), exact_config()).index.k.point;
    CHECK(std::abs(r.index.k.point - exact_k) <= 1e-9);  // depth 9 covers the whole tree
}

TEST_CASE("table sorts by S descending and keeps going on failures") {
    AnalyzeConfig c;
    auto rows = table({"toy_pure_skill", "toy", "toy_pure_luck"}, c);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].game == "toy_pure_skill");
    CHECK(rows[1].game == "toy");
    CHECK(rows[2].game == "toy_pure_luck");
    CHECK(rows[0].index.s == 1.0);
    CHECK(rows[2].index.s == -1.0);

    auto with_bad = table({"toy", "nosuch"}, c);
    REQUIRE(with_bad.size() == 2);
    CHECK(with_bad[0].game == "toy");
    CHECK(with_bad[1].game == "nosuch");
    CHECK(with_bad[1].failed());
}

TEST_CASE("table CSV matches the documented row format") {
    AnalyzeConfig c;
    auto rows = table({"coin_toss"}, c);
    std::string csv = table_to_csv(rows);
    CHECK(csv == "game,K,L,S,Sigma,method\ncoin_toss,0.000,1.000,-1.000,0.000,exact\n");
    CHECK(table_to_csv({}) == "game,K,L,S,Sigma,method\n");
}

TEST_CASE("table CSV re-parses to the in-memory values at printed precision") {
    AnalyzeConfig c;
    auto rows = table({"toy", "lottery_choice", "dice_race"}, c);
    std::istringstream in(table_to_csv(rows));
    std::string line;
    std::getline(in, line);  // header
    for (const auto& row : rows) {
        REQUIRE(std::getline(in, line));
        std::istringstream fields(line);
        std::string game, k, l, s, sigma, method;
        std::getline(fields, game, ',');
        std::getline(fields, k, ',');
        std::getline(fields, l, ',');
        std::getline(fields, s, ',');
        std::getline(fields, sigma, ',');
        std::getline(fields, method, ',');
        CHECK(game == row.game);
        CHECK(std::abs(std::stod(k) - row.index.k.point) <= 5e-4);
        CHECK(std::abs(std::stod(l) - row.index.l.point) <= 5e-4);
        CHECK(std::abs(std::stod(s) - row.index.s) <= 5e-4);
        CHECK(std::abs(std::stod(sigma) - row.sigma.sigma_total) <= 5e-4);
        CHECK(method == row.method);
    }
}

TEST_CASE("depth sweep approaches the exact value") {
    GamePtr ck = instantiate("connect_k");
    auto rows = depth_sweep(*ck, {1, 2, 4, 8, 16});
    REQUIRE(rows.size() == 6);  // five depths plus the exact row
    CHECK(rows.back().depth == -1);
    CHECK(std::abs(rows[4].k - rows.back().k) <= 1e-9);
    CHECK(std::abs(rows[4].v_star - rows.back().v_star) <= 1e-9);

    // depth 0 evaluates the heuristic at the root
    GamePtr toy = instantiate("toy");
    auto toy_rows = depth_sweep(*toy, {0});
    CHECK(toy_rows[0].v_star == 0.5);
}

TEST_CASE("design experiments move in the predicted directions") {
    struct Case {
        const ExplicitTree tree;
        TransformKind kind;
    };
    const Case cases[] = {
        {toy_tree(), TransformKind::AddEarlyChance},
        {toy_tree(), TransformKind::AddDecisionDepth},
        {toy_pure_skill_tree(), TransformKind::AmplifyTerminalVariance},
        {toy_tree(), TransformKind::ClusterLateChance},
        {lottery_choice_tree(), TransformKind::AddEarlyChance},
        {toy_pure_luck_tree(), TransformKind::AddDecisionDepth},
    };
    for (const auto& c : cases) {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            DesignExperiment exp = design_experiment(c.tree, c.kind, seed);
            INFO(transform_kind_name(c.kind) << " seed " << seed);
            CHECK(exp.s_pass);
            CHECK(exp.sigma_pass);
            CHECK(exp.before.method == "exact");
            CHECK(exp.after.method == "exact");
        }
    }
}

TEST_CASE("toy + add-early-chance has the derived exact numbers") {
    DesignExperiment exp = design_experiment(toy_tree(), TransformKind::AddEarlyChance, 0);
    CHECK(exp.before.index.k.point == 0.25);
    CHECK(exp.after.index.k.point == 0.125);
    CHECK(exp.after.index.l.point == 1.0);
    CHECK(exp.delta_s < 0.0);
}

TEST_CASE("export_features emits one row per successful report") {
    AnalyzeConfig c;
    auto rows = table({"toy", "toy_pure_luck", "toy_pure_skill"}, c);
    std::string csv = export_features(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "game,K,L,S,Sigma");
    int count = 0;
    bool saw_plus_one = false, saw_minus_third = false, saw_minus_one = false;
    while (std::getline(in, line)) {
        ++count;
        if (line.find(",1.000,") != std::string::npos && line.find("skill") != std::string::npos) {
            saw_plus_one = true;
        }
        if (line.find("-0.333") != std::string::npos) saw_minus_third = true;
        if (line.find("-1.000") != std::string::npos) saw_minus_one = true;
    }
    CHECK(count == 3);
    CHECK(saw_plus_one);
    CHECK(saw_minus_third);
    CHECK(saw_minus_one);
    CHECK(export_features({}) == "game,K,L,S,Sigma\n");
}

TEST_CASE("json serialization carries full precision and structure") {
    GameReport r = analyze(*instantiate("lottery_choice"), exact_config());
    auto j = report_to_json(r);
    CHECK(j["game"] == "lottery_choice");
    CHECK(j["method"] == "exact");
    CHECK(j["k"]["point"].get<double>() == r.index.k.point);
    CHECK(j["s"].get<double>() == r.index.s);
    CHECK(j["sigma"]["total"].get<double>() == r.sigma.sigma_total);
    CHECK(!j.contains("wall_ms"));  // timing never lands in the reproducible payload
}
