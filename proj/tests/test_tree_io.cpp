#include <random>
#include <string>

#include "doctest.h"
#include "sli/explicit_tree.hpp"
#include "sli/games.hpp"
#include "sli/solvers.hpp"
#include "sli/validate.hpp"
#include "test_util.hpp"

using namespace sli;

TEST_CASE("parse_tree reads the five-node flip-then-choose tree") {
    const std::string text =
        "gametree v1\n"
        "root 0\n"
        "node 0 chance left:0.5->1 right:0.5->2\n"
        "node 1 terminal 1\n"
        "node 2 decision 0 A->3 B->4\n"
        "node 3 terminal 1\n"
        "node 4 terminal 0\n";
    ExplicitTree t = parse_tree(text);
    CHECK(t.nodes.size() == 5);
    CHECK(t.root == 0);
    CHECK(t.nodes[0].kind == TreeNode::Kind::Chance);
    CHECK(t.nodes[2].kind == TreeNode::Kind::Decision);
    CHECK(t.nodes[2].player == 0);
    CHECK(trees_equal(t, toy_tree()));
}

TEST_CASE("parse_tree handles a single terminal node") {
    ExplicitTree t = parse_tree("gametree v1\nroot 0\nnode 0 terminal 1\n");
    CHECK(t.nodes.size() == 1);
    CHECK(t.nodes[0].payoff == 1.0);
    GamePtr g = as_game(t, "one");
    CHECK(g->node_kind(g->initial_state()).is_terminal());
}

TEST_CASE("parse_tree reads the seven-node lottery tree with a decision root") {
    ExplicitTree t = lottery_choice_tree();
    CHECK(t.nodes.size() == 7);
    CHECK(t.nodes[static_cast<std::size_t>(t.root)].kind == TreeNode::Kind::Decision);
    std::string text = emit_tree(t);
    CHECK(trees_equal(parse_tree(text), t));
}

TEST_CASE("parse errors are distinct and located") {
    // missing header
    CHECK_THROWS_AS(parse_tree("node 0 terminal 1\n"), ParseError);
    // syntax garbage
    CHECK_THROWS_AS(parse_tree("gametree v1\nroot 0\nnode 0 wibble\n"), ParseError);
    // dangling child id
    CHECK_THROWS_AS(parse_tree("gametree v1\nroot 0\nnode 0 decision 0 a->1 b->2\nnode 1 terminal 1\n"),
                    StructuralError);
    // cycle / duplicate parent
    CHECK_THROWS_AS(parse_tree("gametree v1\nroot 0\n"
                               "node 0 decision 0 a->1 b->1\n"
                               "node 1 terminal 1\n"),
                    StructuralError);
    // probability violation
    CHECK_THROWS_AS(parse_tree("gametree v1\nroot 0\n"
                               "node 0 chance a:0.5->1 b:0.6->2\n"
                               "node 1 terminal 1\nnode 2 terminal 0\n"),
                    StructuralError);
    // payoff violation
    CHECK_THROWS_AS(parse_tree("gametree v1\nroot 0\nnode 0 terminal 1.5\n"), StructuralError);

    try {
        parse_tree("gametree v1\nroot 0\nnode 0 wibble\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column > 0);
    }
}

TEST_CASE("round-trip identity on the built-in trees") {
    for (const ExplicitTree& t : {coin_toss_tree(), toy_tree(), toy_pure_luck_tree(),
                                  toy_pure_skill_tree(), lottery_choice_tree()}) {
        CHECK(trees_equal(parse_tree(emit_tree(t)), t));
    }
}

TEST_CASE("round-trip identity on 1000 random trees") {
    std::mt19937_64 rng(20260824);
    testutil::TreeGenOptions opt;
    opt.max_nodes = 80;
    for (int i = 0; i < 1000; ++i) {
        ExplicitTree t = testutil::random_tree(rng, opt);
        ExplicitTree back = parse_tree(emit_tree(t));
        REQUIRE(trees_equal(back, t));
    }
}

TEST_CASE("a large random tree round-trips") {
    std::mt19937_64 rng(7);
    testutil::TreeGenOptions opt;
    opt.max_nodes = 1000;
    opt.max_depth = 40;
    ExplicitTree t = testutil::random_tree(rng, opt);
    CHECK(t.nodes.size() > 100);
    CHECK(trees_equal(parse_tree(emit_tree(t)), t));
}

TEST_CASE("as_game preserves structure and passes validation") {
    std::mt19937_64 rng(99);
    testutil::TreeGenOptions opt;
    opt.max_nodes = 50;
    for (int i = 0; i < 50; ++i) {
        ExplicitTree t = testutil::random_tree(rng, opt);
        GamePtr g = as_game(t, "rand");
        ValidationReport r = validate_game(*g);
        REQUIRE(r.valid());
        CHECK(r.unique_states == t.nodes.size());

        // kinds, probabilities and payoffs carried over exactly
        State root = g->initial_state();
        const TreeNode& rn = t.nodes[static_cast<std::size_t>(t.root)];
        NodeKind k = g->node_kind(root);
        if (rn.kind == TreeNode::Kind::Chance) {
            CHECK(k.is_chance());
            auto succ = g->successors(root);
            REQUIRE(succ.size() == rn.edges.size());
            for (std::size_t j = 0; j < succ.size(); ++j) {
                CHECK(succ[j].prob.value() == rn.edges[j].prob);
                CHECK(succ[j].label == rn.edges[j].label);
            }
        }
    }
}

TEST_CASE("as_game of the toy tree solves to V* = 1") {
    GamePtr g = as_game(toy_tree(), "toy");
    CHECK(expectiminimax(*g, g->initial_state(), kInfiniteDepth, Heuristic::constant_half()) == 1.0);
}
