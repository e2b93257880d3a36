#include "sli/explicit_tree.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "sli/error.hpp"

namespace sli {

namespace {

constexpr double kProbTolerance = 1e-9;

struct Token {
    std::string text;
    int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

double parse_double(const Token& tok, int line) {
    const char* begin = tok.text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.text.size() || tok.text.empty()) {
        throw ParseError(line, tok.column, "expected a number, got '" + tok.text + "'");
    }
    return v;
}

int parse_int(const Token& tok, int line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
        throw ParseError(line, tok.column, "expected an integer, got '" + tok.text + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// `label->child` (decision) or `label:prob->child` (chance)
TreeEdge parse_edge(const Token& tok, int line, bool chance) {
    auto arrow = tok.text.rfind("->");
    if (arrow == std::string::npos) {
        throw ParseError(line, tok.column, "edge '" + tok.text + "' missing '->'");
    }
    std::string head = tok.text.substr(0, arrow);
    std::string child_str = tok.text.substr(arrow + 2);

    TreeEdge edge;
    if (chance) {
        auto colon = head.rfind(':');
        if (colon == std::string::npos) {
            throw ParseError(line, tok.column, "chance edge '" + tok.text + "' missing ':prob'");
        }
        edge.label = head.substr(0, colon);
        Token prob_tok{head.substr(colon + 1), tok.column + static_cast<int>(colon) + 1};
        edge.prob = parse_double(prob_tok, line);
    } else {
        edge.label = head;
        edge.prob = -1.0;
    }
    if (edge.label.empty()) throw ParseError(line, tok.column, "edge has empty label");
    Token child_tok{child_str, tok.column + static_cast<int>(arrow) + 2};
    edge.child = parse_int(child_tok, line);
    return edge;
}

}  // namespace

void check_tree(const ExplicitTree& tree) {
    const int n = static_cast<int>(tree.nodes.size());
    if (n == 0) throw StructuralError("tree has no nodes");
    if (tree.root < 0 || tree.root >= n) throw StructuralError("root id out of range");

    std::vector<int> parents(static_cast<std::size_t>(n), 0);
    for (int id = 0; id < n; ++id) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        switch (node.kind) {
            case TreeNode::Kind::Terminal:
                if (!node.edges.empty()) {
                    throw StructuralError("terminal node " + std::to_string(id) + " has edges");
                }
                if (node.payoff < 0.0 || node.payoff > 1.0) {
                    throw StructuralError("terminal node " + std::to_string(id) + " payoff " +
                                          std::to_string(node.payoff) + " outside [0,1]");
                }
                break;
            case TreeNode::Kind::Decision:
                if (node.player != 0 && node.player != 1) {
                    throw StructuralError("decision node " + std::to_string(id) + " has invalid player");
                }
                if (node.edges.empty()) {
                    throw StructuralError("decision node " + std::to_string(id) + " has no edges");
                }
                for (const auto& e : node.edges) {
                    if (e.prob >= 0.0) {
                        throw StructuralError("decision node " + std::to_string(id) +
                                              " edge carries a probability");
                    }
                }
                break;
            case TreeNode::Kind::Chance: {
                if (node.edges.empty()) {
                    throw StructuralError("chance node " + std::to_string(id) + " has no edges");
                }
                double sum = 0.0;
                for (const auto& e : node.edges) {
                    if (e.prob <= 0.0) {
                        throw StructuralError("chance node " + std::to_string(id) +
                                              " edge '" + e.label + "' needs probability > 0");
                    }
                    sum += e.prob;
                }
                if (std::fabs(sum - 1.0) > kProbTolerance) {
                    throw StructuralError("chance node " + std::to_string(id) +
                                          " probabilities sum to " + std::to_string(sum));
                }
                break;
            }
        }
        for (const auto& e : node.edges) {
            if (e.child < 0 || e.child >= n) {
                throw StructuralError("node " + std::to_string(id) + " references dangling child id " +
                                      std::to_string(e.child));
            }
            ++parents[static_cast<std::size_t>(e.child)];
        }
    }

    if (parents[static_cast<std::size_t>(tree.root)] != 0) {
        throw StructuralError("root node has a parent (cycle through root)");
    }
    for (int id = 0; id < n; ++id) {
        if (id != tree.root && parents[static_cast<std::size_t>(id)] != 1) {
            throw StructuralError("node " + std::to_string(id) + " has " +
                                  std::to_string(parents[static_cast<std::size_t>(id)]) +
                                  " parents (tree must have exactly one)");
        }
    }

    // single-parent plus full reachability rules out cycles
    std::vector<char> reached(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{tree.root};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        if (reached[static_cast<std::size_t>(id)]) continue;
        reached[static_cast<std::size_t>(id)] = 1;
        for (const auto& e : tree.nodes[static_cast<std::size_t>(id)].edges) stack.push_back(e.child);
    }
    for (int id = 0; id < n; ++id) {
        if (!reached[static_cast<std::size_t>(id)]) {
            throw StructuralError("node " + std::to_string(id) + " unreachable from root (cycle or orphan)");
        }
    }
}

ExplicitTree parse_tree(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    std::vector<std::pair<int, TreeNode>> parsed;  // (id, node)
    int root = -1;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = tokenize(line);
        if (toks.empty() || toks[0].text[0] == '#') continue;

        if (!header_seen) {
            if (toks.size() != 2 || toks[0].text != "gametree" || toks[1].text != "v1") {
                throw ParseError(line_no, toks[0].column, "expected header 'gametree v1'");
            }
            header_seen = true;
            continue;
        }

        if (toks[0].text == "root") {
            if (toks.size() != 2) throw ParseError(line_no, toks[0].column, "expected 'root <id>'");
            if (root >= 0) throw ParseError(line_no, toks[0].column, "duplicate root line");
            root = parse_int(toks[1], line_no);
            continue;
        }

        if (toks[0].text != "node") {
            throw ParseError(line_no, toks[0].column, "expected 'node' or 'root', got '" + toks[0].text + "'");
        }
        if (toks.size() < 3) throw ParseError(line_no, toks[0].column, "incomplete node line");
        int id = parse_int(toks[1], line_no);
        if (id < 0) throw ParseError(line_no, toks[1].column, "node id must be nonnegative");

        TreeNode node;
        const std::string& kind = toks[2].text;
        if (kind == "terminal") {
            if (toks.size() != 4) {
                throw ParseError(line_no, toks[2].column, "expected 'node <id> terminal <payoff>'");
            }
            node.kind = TreeNode::Kind::Terminal;
            node.payoff = parse_double(toks[3], line_no);
        } else if (kind == "decision") {
            if (toks.size() < 5) {
                throw ParseError(line_no, toks[2].column,
                                 "expected 'node <id> decision <player> <label>-><child> ...'");
            }
            node.kind = TreeNode::Kind::Decision;
            node.player = parse_int(toks[3], line_no);
            for (std::size_t i = 4; i < toks.size(); ++i) {
                node.edges.push_back(parse_edge(toks[i], line_no, /*chance=*/false));
            }
        } else if (kind == "chance") {
            if (toks.size() < 4) {
                throw ParseError(line_no, toks[2].column,
                                 "expected 'node <id> chance <label>:<prob>-><child> ...'");
            }
            node.kind = TreeNode::Kind::Chance;
            for (std::size_t i = 3; i < toks.size(); ++i) {
                node.edges.push_back(parse_edge(toks[i], line_no, /*chance=*/true));
            }
        } else {
            throw ParseError(line_no, toks[2].column, "unknown node kind '" + kind + "'");
        }
        parsed.emplace_back(id, std::move(node));
    }

    if (!header_seen) throw ParseError(1, 1, "empty input, expected header 'gametree v1'");
    if (parsed.empty()) throw ParseError(line_no, 1, "no node lines");
    if (root < 0) throw ParseError(line_no, 1, "missing root line");

    ExplicitTree tree;
    tree.root = root;
    tree.nodes.resize(parsed.size());
    std::vector<char> assigned(parsed.size(), 0);
    for (auto& [id, node] : parsed) {
        if (id >= static_cast<int>(parsed.size())) {
            throw StructuralError("node ids must be dense 0.." + std::to_string(parsed.size() - 1) +
                                  "; saw id " + std::to_string(id));
        }
        if (assigned[static_cast<std::size_t>(id)]) {
            throw StructuralError("duplicate node id " + std::to_string(id));
        }
        assigned[static_cast<std::size_t>(id)] = 1;
        tree.nodes[static_cast<std::size_t>(id)] = std::move(node);
    }

    check_tree(tree);
    return tree;
}

std::string emit_tree(const ExplicitTree& tree) {
    std::ostringstream out;
    out << "gametree v1\n";
    out << "root " << tree.root << "\n";
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        const TreeNode& node = tree.nodes[id];
        out << "node " << id;
        switch (node.kind) {
            case TreeNode::Kind::Terminal:
                out << " terminal " << format_double(node.payoff);
                break;
            case TreeNode::Kind::Decision:
                out << " decision " << node.player;
                for (const auto& e : node.edges) out << " " << e.label << "->" << e.child;
                break;
            case TreeNode::Kind::Chance:
                out << " chance";
                for (const auto& e : node.edges) {
                    out << " " << e.label << ":" << format_double(e.prob) << "->" << e.child;
                }
                break;
        }
        out << "\n";
    }
    return out.str();
}

bool trees_equal(const ExplicitTree& a, const ExplicitTree& b) {
    if (a.root != b.root || a.nodes.size() != b.nodes.size()) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const TreeNode& x = a.nodes[i];
        const TreeNode& y = b.nodes[i];
        if (x.kind != y.kind || x.edges.size() != y.edges.size()) return false;
        if (x.kind == TreeNode::Kind::Decision && x.player != y.player) return false;
        if (x.kind == TreeNode::Kind::Terminal && x.payoff != y.payoff) return false;
        for (std::size_t j = 0; j < x.edges.size(); ++j) {
            if (x.edges[j].label != y.edges[j].label || x.edges[j].child != y.edges[j].child) return false;
            if (x.kind == TreeNode::Kind::Chance && x.edges[j].prob != y.edges[j].prob) return false;
        }
    }
    return true;
}

namespace {

class ExplicitTreeGame final : public GameDef {
public:
    ExplicitTreeGame(ExplicitTree tree, std::string id) : tree_(std::move(tree)), id_(std::move(id)) {
        depth_.assign(tree_.nodes.size(), 0);
        max_depth_ = 0;
        std::vector<int> stack{tree_.root};
        while (!stack.empty()) {
            int node = stack.back();
            stack.pop_back();
            for (const auto& e : tree_.nodes[static_cast<std::size_t>(node)].edges) {
                depth_[static_cast<std::size_t>(e.child)] = depth_[static_cast<std::size_t>(node)] + 1;
                if (depth_[static_cast<std::size_t>(e.child)] > max_depth_) {
                    max_depth_ = depth_[static_cast<std::size_t>(e.child)];
                }
                stack.push_back(e.child);
            }
        }
    }

    const std::string& id() const override { return id_; }

    State initial_state() const override { return make_state(tree_.root); }

    NodeKind node_kind(const State& s) const override {
        const TreeNode& node = at(s);
        switch (node.kind) {
            case TreeNode::Kind::Decision:
                return NodeKind::decision(node.player);
            case TreeNode::Kind::Chance:
                return NodeKind::chance();
            case TreeNode::Kind::Terminal:
                return NodeKind::terminal(node.payoff);
        }
        throw StructuralError("corrupt node kind");
    }

    std::vector<Edge> successors(const State& s) const override {
        const TreeNode& node = at(s);
        std::vector<Edge> out;
        out.reserve(node.edges.size());
        for (const auto& e : node.edges) {
            Edge edge;
            edge.label = e.label;
            if (node.kind == TreeNode::Kind::Chance) edge.prob = e.prob;
            edge.to = make_state(e.child);
            out.push_back(std::move(edge));
        }
        return out;
    }

    int max_ply() const override { return max_depth_ + 1; }

private:
    State make_state(int id) const {
        State s;
        s.code = static_cast<std::uint64_t>(id);
        s.key = static_cast<std::uint64_t>(id);
        s.ply = depth_[static_cast<std::size_t>(id)];
        return s;
    }

    const TreeNode& at(const State& s) const {
        if (s.code >= tree_.nodes.size()) throw StructuralError("state id out of range");
        return tree_.nodes[static_cast<std::size_t>(s.code)];
    }

    ExplicitTree tree_;
    std::string id_;
    std::vector<int> depth_;
    int max_depth_;
};

}  // namespace

GamePtr as_game(ExplicitTree tree, std::string id) {
    check_tree(tree);
    return std::make_shared<ExplicitTreeGame>(std::move(tree), std::move(id));
}

}  // namespace sli
