#pragma once

#include <string>
#include <vector>

#include "sli/game.hpp"

namespace sli {

// Declarative game tree, the interchange form behind the `gametree v1`
// text format (see docs/tree_format.md). Node ids are dense 0..n-1.
struct TreeEdge {
    std::string label;
    double prob = -1.0;  // chance edges only; < 0 means "no probability"
    int child = -1;
};

struct TreeNode {
    enum class Kind { Decision, Chance, Terminal };

    Kind kind = Kind::Terminal;
    int player = -1;      // decision only
    double payoff = 0.0;  // terminal only
    std::vector<TreeEdge> edges;
};

struct ExplicitTree {
    std::vector<TreeNode> nodes;
    int root = 0;
};

// Structural checks shared by the parser and programmatic construction:
// dense ids, tree shape (single parent, acyclic, all reachable from root),
// probability sums, payoff ranges. Throws StructuralError on violation.
void check_tree(const ExplicitTree& tree);

// Parses the documented text format. Throws ParseError with line/column
// for syntax problems and StructuralError for shape violations.
ExplicitTree parse_tree(const std::string& text);

// Canonical serialization; parse_tree(emit_tree(t)) is structurally
// identical to t.
std::string emit_tree(const ExplicitTree& tree);

bool trees_equal(const ExplicitTree& a, const ExplicitTree& b);

// Wraps a checked tree as a GameDef whose states are node ids.
GamePtr as_game(ExplicitTree tree, std::string id);

}  // namespace sli
