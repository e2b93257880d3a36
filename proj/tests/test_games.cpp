#include <cmath>

#include "doctest.h"
#include "sli/games.hpp"
#include "sli/leverage.hpp"
#include "sli/solvers.hpp"
#include "sli/validate.hpp"
#include "sli/volatility.hpp"

using namespace sli;

TEST_CASE("catalog contents and stable ordering") {
    const auto& specs = list_games();
    REQUIRE(specs.size() == 10);
    std::vector<std::string> names;
    for (const auto& s : specs) names.push_back(s.name);
    std::vector<std::string> expected{"coin_toss",  "toy",       "toy_pure_luck", "toy_pure_skill",
                                      "lottery_choice", "tictactoe", "nim",           "connect_k",
                                      "war_small",  "dice_race"};
    CHECK(names == expected);

    // expected metrics recorded with provenance
    for (const auto& s : specs) {
        for (const auto& e : s.expected) {
            CHECK(!e.metric.empty());
            CHECK(!e.provenance.empty());
        }
    }
}

TEST_CASE("every catalog game instantiates and validates") {
    for (const auto& spec : list_games()) {
        GamePtr g = instantiate(spec.name);
        ValidationReport r = validate_game(*g);
        INFO(spec.name);
        CHECK(r.valid());
        CHECK(!r.truncated());
    }
}

TEST_CASE("instantiate rejects unknown names and bad parameters") {
    CHECK_THROWS_AS(instantiate("nosuch"), UnknownGameError);
    CHECK_THROWS_AS(instantiate("toy", {{"bogus", 1}}), ContractError);
    CHECK_THROWS_AS(instantiate("connect_k", {{"k", 9}}), ContractError);   // k > max(w,h)
    CHECK_THROWS_AS(instantiate("connect_k", {{"w", 9}, {"h", 9}}), ContractError);  // board too big
    CHECK_THROWS_AS(instantiate("nim", {{"h0", -1}}), ContractError);
    CHECK_THROWS_AS(instantiate("war_small", {{"deck", 5}}), ContractError);  // odd deck
    CHECK_THROWS_AS(instantiate("dice_race", {{"faces", 0}}), ContractError);
}

TEST_CASE("deterministic catalog games: L = 0, Sigma = 0, S = +1") {
    for (const std::string& name : {"tictactoe", "nim", "connect_k", "toy_pure_skill"}) {
        GamePtr g = instantiate(name);
        INFO(name);
        double l = luck_leverage_exact(*g).point;
        CHECK(l == 0.0);
        CHECK(integrated_volatility_exact(*g).sigma_total == 0.0);
        double k = skill_leverage_exact(*g).point;
        CHECK(k > 0.0);
        SkillLuckIndex s = skill_luck_index(skill_leverage_exact(*g), luck_leverage_exact(*g));
        CHECK(s.s == 1.0);
    }
}

TEST_CASE("no-decision catalog games: K = 0, S = -1") {
    for (const std::string& name : {"coin_toss", "war_small"}) {
        GamePtr g = instantiate(name);
        INFO(name);
        LeverageEstimate k = skill_leverage_exact(*g);
        CHECK(k.point == 0.0);
        LeverageEstimate l = luck_leverage_exact(*g);
        CHECK(l.point > 0.0);
        CHECK(skill_luck_index(k, l).s == -1.0);
    }
}

TEST_CASE("war_small matches the pre-play-shuffle model") {
    GamePtr war = instantiate("war_small");
    CHECK(skill_leverage_exact(*war).point == 0.0);
    CHECK(luck_leverage_exact(*war).point == 1.0);
    CHECK(integrated_volatility_exact(*war).sigma_total == 0.0);  // all randomness pre-play
}

TEST_CASE("tictactoe has the known shape") {
    GamePtr ttt = instantiate("tictactoe");
    ValidationReport r = validate_game(*ttt);
    CHECK(r.unique_states == 5478);  // reachable positions under canonical encoding
    CHECK(expectiminimax(*ttt, ttt->initial_state(), kInfiniteDepth, Heuristic::constant_half()) ==
          0.5);
}

TEST_CASE("nim with equal-xor heaps is a second-player win") {
    GamePtr nim = instantiate("nim", {{"h0", 1}, {"h1", 2}, {"h2", 3}});  // xor = 0
    CHECK(expectiminimax(*nim, nim->initial_state(), kInfiniteDepth, Heuristic::constant_half()) ==
          0.0);
    GamePtr nim2 = instantiate("nim");  // 3,4,5: xor != 0, first-player win
    CHECK(expectiminimax(*nim2, nim2->initial_state(), kInfiniteDepth, Heuristic::constant_half()) ==
          1.0);
}

TEST_CASE("dice_race is the mixed exemplar") {
    GamePtr dice = instantiate("dice_race");
    CHECK(skill_leverage_exact(*dice).point > 0.0);
    CHECK(luck_leverage_exact(*dice).point > 0.0);
    CHECK(integrated_volatility_exact(*dice).sigma_total > 0.0);
}

TEST_CASE("parameterized variants stay solvable") {
    GamePtr small_war = instantiate("war_small", {{"deck", 4}});
    CHECK(validate_game(*small_war).valid());
    GamePtr big_dice = instantiate("dice_race", {{"length", 3}, {"faces", 3}});
    CHECK(validate_game(*big_dice).valid());
    GamePtr ck = instantiate("connect_k", {{"w", 3}, {"h", 3}, {"k", 3}});
    CHECK(validate_game(*ck).valid());
}
