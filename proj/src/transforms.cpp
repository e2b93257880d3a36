#include "sli/transforms.hpp"

#include <algorithm>
#include <vector>

#include "sli/error.hpp"
#include "sli/rng.hpp"

namespace sli {

namespace {

const TreeNode& terminal_at(const ExplicitTree& tree, int terminal_id) {
    if (terminal_id < 0 || terminal_id >= static_cast<int>(tree.nodes.size())) {
        throw ContractError("transform: node id out of range");
    }
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(terminal_id)];
    if (node.kind != TreeNode::Kind::Terminal) {
        throw ContractError("transform: node " + std::to_string(terminal_id) + " is not a terminal");
    }
    return node;
}

TreeNode make_terminal(double payoff) {
    TreeNode n;
    n.kind = TreeNode::Kind::Terminal;
    n.payoff = payoff;
    return n;
}

std::vector<int> depths_of(const ExplicitTree& tree) {
    std::vector<int> depth(tree.nodes.size(), 0);
    std::vector<int> stack{tree.root};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        for (const auto& e : tree.nodes[static_cast<std::size_t>(id)].edges) {
            depth[static_cast<std::size_t>(e.child)] = depth[static_cast<std::size_t>(id)] + 1;
            stack.push_back(e.child);
        }
    }
    return depth;
}

std::vector<int> terminal_ids(const ExplicitTree& tree) {
    std::vector<int> ids;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (tree.nodes[i].kind == TreeNode::Kind::Terminal) ids.push_back(static_cast<int>(i));
    }
    return ids;
}

}  // namespace

ExplicitTree insert_dominated_decision(const ExplicitTree& tree, int terminal_id,
                                       double dominated_payoff) {
    const TreeNode& target = terminal_at(tree, terminal_id);
    if (dominated_payoff < 0.0 || dominated_payoff > target.payoff) {
        throw ContractError("insert_dominated_decision: sibling payoff must be in [0, v]");
    }

    ExplicitTree out = tree;
    int keep_id = static_cast<int>(out.nodes.size());
    int alt_id = keep_id + 1;
    out.nodes.push_back(make_terminal(target.payoff));
    out.nodes.push_back(make_terminal(dominated_payoff));

    TreeNode& node = out.nodes[static_cast<std::size_t>(terminal_id)];
    node.kind = TreeNode::Kind::Decision;
    node.player = 0;
    node.payoff = 0.0;
    node.edges = {{"keep", -1.0, keep_id}, {"alt", -1.0, alt_id}};

    check_tree(out);
    return out;
}

ExplicitTree insert_spanning_chance(const ExplicitTree& tree, int terminal_id, double lo, double hi,
                                    double prob_hi) {
    const TreeNode& target = terminal_at(tree, terminal_id);
    if (lo < 0.0 || hi > 1.0 || lo > target.payoff || hi < target.payoff) {
        throw ContractError("insert_spanning_chance: children must span the terminal payoff within [0,1]");
    }
    if (prob_hi <= 0.0 || prob_hi >= 1.0) {
        throw ContractError("insert_spanning_chance: prob_hi must be in (0,1)");
    }

    ExplicitTree out = tree;
    int lo_id = static_cast<int>(out.nodes.size());
    int hi_id = lo_id + 1;
    out.nodes.push_back(make_terminal(lo));
    out.nodes.push_back(make_terminal(hi));

    TreeNode& node = out.nodes[static_cast<std::size_t>(terminal_id)];
    node.kind = TreeNode::Kind::Chance;
    node.player = -1;
    node.payoff = 0.0;
    node.edges = {{"lo", 1.0 - prob_hi, lo_id}, {"hi", prob_hi, hi_id}};

    check_tree(out);
    return out;
}

ExplicitTree add_early_chance(const ExplicitTree& tree) {
    ExplicitTree out = tree;
    int loss_id = static_cast<int>(out.nodes.size());
    int root_id = loss_id + 1;
    out.nodes.push_back(make_terminal(0.0));

    TreeNode root;
    root.kind = TreeNode::Kind::Chance;
    root.edges = {{"bust", 0.5, loss_id}, {"play", 0.5, out.root}};
    out.nodes.push_back(std::move(root));
    out.root = root_id;

    check_tree(out);
    return out;
}

TransformKind transform_kind_from_name(const std::string& name) {
    if (name == "add-early-chance") return TransformKind::AddEarlyChance;
    if (name == "add-decision-depth") return TransformKind::AddDecisionDepth;
    if (name == "amplify-terminal-variance") return TransformKind::AmplifyTerminalVariance;
    if (name == "cluster-late-chance") return TransformKind::ClusterLateChance;
    throw ContractError("unknown transformation '" + name + "'");
}

std::string transform_kind_name(TransformKind kind) {
    switch (kind) {
        case TransformKind::AddEarlyChance: return "add-early-chance";
        case TransformKind::AddDecisionDepth: return "add-decision-depth";
        case TransformKind::AmplifyTerminalVariance: return "amplify-terminal-variance";
        case TransformKind::ClusterLateChance: return "cluster-late-chance";
    }
    throw ContractError("invalid transformation kind");
}

ExplicitTree apply_transform(const ExplicitTree& tree, TransformKind kind, std::uint64_t seed) {
    if (kind == TransformKind::AddEarlyChance) return add_early_chance(tree);

    std::vector<int> candidates = terminal_ids(tree);
    if (kind == TransformKind::ClusterLateChance) {
        auto depth = depths_of(tree);
        int deepest = 0;
        for (int id : candidates) deepest = std::max(deepest, depth[static_cast<std::size_t>(id)]);
        std::vector<int> late;
        for (int id : candidates) {
            if (depth[static_cast<std::size_t>(id)] == deepest) late.push_back(id);
        }
        candidates = std::move(late);
    }
    if (candidates.empty()) throw ContractError("transformation has no applicable terminal");

    Rng rng = Rng::stream(seed, 0);
    int target = candidates[static_cast<std::size_t>(rng.pick_uniform(static_cast<int>(candidates.size())))];

    switch (kind) {
        case TransformKind::AddDecisionDepth:
            return insert_dominated_decision(tree, target, 0.0);
        case TransformKind::AmplifyTerminalVariance:
        case TransformKind::ClusterLateChance:
            return insert_spanning_chance(tree, target, 0.0, 1.0, 0.5);
        case TransformKind::AddEarlyChance:
            break;
    }
    throw ContractError("invalid transformation kind");
}

}  // namespace sli
