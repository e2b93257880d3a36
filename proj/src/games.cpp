#include "sli/games.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <tuple>

#include "sli/validate.hpp"

namespace sli {

namespace {

// ---------------------------------------------------------------------------
// explicit-tree built-ins

ExplicitTree make_tree(std::vector<TreeNode> nodes, int root = 0) {
    ExplicitTree tree;
    tree.nodes = std::move(nodes);
    tree.root = root;
    check_tree(tree);
    return tree;
}

TreeNode terminal(double payoff) {
    TreeNode n;
    n.kind = TreeNode::Kind::Terminal;
    n.payoff = payoff;
    return n;
}

TreeNode decision(int player, std::vector<TreeEdge> edges) {
    TreeNode n;
    n.kind = TreeNode::Kind::Decision;
    n.player = player;
    n.edges = std::move(edges);
    return n;
}

TreeNode chance(std::vector<TreeEdge> edges) {
    TreeNode n;
    n.kind = TreeNode::Kind::Chance;
    n.edges = std::move(edges);
    return n;
}

}  // namespace

ExplicitTree coin_toss_tree() {
    return make_tree({
        chance({{"H", 0.5, 1}, {"T", 0.5, 2}}),
        terminal(1.0),
        terminal(0.0),
    });
}

// Nature's flip either wins outright or forces a decision between a
// winning and a losing move.
ExplicitTree toy_tree() {
    return make_tree({
        chance({{"left", 0.5, 1}, {"right", 0.5, 2}}),
        terminal(1.0),
        decision(0, {{"A", -1.0, 3}, {"B", -1.0, 4}}),
        terminal(1.0),
        terminal(0.0),
    });
}

// The decision node collapsed to its uniform value. Replacing it by a
// literal 50/50 chance node would hand the extra coin to nature's
// counterfactual control and push L to 1; the collapsed form keeps the
// variant's intended L = 0.5 (see README on luck semantics).
ExplicitTree toy_pure_luck_tree() {
    return make_tree({
        chance({{"left", 0.5, 1}, {"right", 0.5, 2}}),
        terminal(1.0),
        terminal(0.5),
    });
}

ExplicitTree toy_pure_skill_tree() {
    return make_tree({
        decision(0, {{"left", -1.0, 1}, {"right", -1.0, 2}}),
        terminal(1.0),
        decision(0, {{"A", -1.0, 3}, {"B", -1.0, 4}}),
        terminal(1.0),
        terminal(0.0),
    });
}

// Choose lottery A (80% win) or B (20% win).
ExplicitTree lottery_choice_tree() {
    return make_tree({
        decision(0, {{"A", -1.0, 1}, {"B", -1.0, 2}}),
        chance({{"win", 0.8, 3}, {"lose", 0.2, 4}}),
        chance({{"win", 0.2, 5}, {"lose", 0.8, 6}}),
        terminal(1.0),
        terminal(0.0),
        terminal(1.0),
        terminal(0.0),
    });
}

namespace {

// ---------------------------------------------------------------------------
// tic-tac-toe

class TicTacToeGame final : public GameDef {
public:
    TicTacToeGame() : id_("tictactoe") {}

    const std::string& id() const override { return id_; }

    State initial_state() const override { return {0, 0, 0}; }

    NodeKind node_kind(const State& s) const override {
        int winner = find_winner(s.code);
        if (winner == 0) return NodeKind::terminal(1.0);
        if (winner == 1) return NodeKind::terminal(0.0);
        if (count_pieces(s.code) == 9) return NodeKind::terminal(0.5);
        return NodeKind::decision(count_pieces(s.code) % 2);
    }

    std::vector<Edge> successors(const State& s) const override {
        std::vector<Edge> out;
        int player = count_pieces(s.code) % 2;
        for (int cell = 0; cell < 9; ++cell) {
            if (((s.code >> (2 * cell)) & 3ULL) != 0) continue;
            std::uint64_t code = s.code | (static_cast<std::uint64_t>(player + 1) << (2 * cell));
            out.push_back({cell_name(cell), std::nullopt, {code, code, s.ply + 1}});
        }
        return out;
    }

    int max_ply() const override { return 10; }

private:
    static int count_pieces(std::uint64_t code) {
        int n = 0;
        for (int cell = 0; cell < 9; ++cell) {
            if (((code >> (2 * cell)) & 3ULL) != 0) ++n;
        }
        return n;
    }

    // 0: X (player 0) has a line, 1: O, -1: none
    static int find_winner(std::uint64_t code) {
        static constexpr int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                             {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
        for (const auto& line : kLines) {
            std::uint64_t a = (code >> (2 * line[0])) & 3ULL;
            if (a == 0) continue;
            std::uint64_t b = (code >> (2 * line[1])) & 3ULL;
            std::uint64_t c = (code >> (2 * line[2])) & 3ULL;
            if (a == b && b == c) return static_cast<int>(a) - 1;
        }
        return -1;
    }

    static std::string cell_name(int cell) {
        return std::string(1, static_cast<char>('a' + cell / 3)) + std::to_string(cell % 3 + 1);
    }

    std::string id_;
};

// ---------------------------------------------------------------------------
// connect_k: gravity drops on a w x h board, k in a row wins

class ConnectKGame final : public GameDef {
public:
    ConnectKGame(int w, int h, int k)
        : id_("connect_k_" + std::to_string(w) + "x" + std::to_string(h) + "_" + std::to_string(k)),
          w_(w),
          h_(h),
          k_(k) {
        if (w < 1 || h < 1) throw ContractError("connect_k: board dimensions must be positive");
        if (k < 2) throw ContractError("connect_k: k must be >= 2");
        if (k > std::max(w, h)) throw ContractError("connect_k: k exceeds both board dimensions");
        if (w * h > 28) throw ContractError("connect_k: board larger than 28 cells is out of budget");
    }

    const std::string& id() const override { return id_; }

    State initial_state() const override { return {0, 0, 0}; }

    NodeKind node_kind(const State& s) const override {
        int winner = find_winner(s.code);
        if (winner == 0) return NodeKind::terminal(1.0);
        if (winner == 1) return NodeKind::terminal(0.0);
        if (count_pieces(s.code) == w_ * h_) return NodeKind::terminal(0.5);
        return NodeKind::decision(count_pieces(s.code) % 2);
    }

    std::vector<Edge> successors(const State& s) const override {
        std::vector<Edge> out;
        int player = count_pieces(s.code) % 2;
        for (int c = 0; c < w_; ++c) {
            int r = column_height(s.code, c);
            if (r >= h_) continue;
            std::uint64_t code = s.code | (static_cast<std::uint64_t>(player + 1) << (2 * cell(c, r)));
            out.push_back({"c" + std::to_string(c), std::nullopt, {code, code, s.ply + 1}});
        }
        return out;
    }

    int max_ply() const override { return w_ * h_ + 1; }

private:
    int cell(int c, int r) const { return c * h_ + r; }  // r = 0 is the bottom row

    int cell_at(std::uint64_t code, int c, int r) const {
        return static_cast<int>((code >> (2 * cell(c, r))) & 3ULL);
    }

    int count_pieces(std::uint64_t code) const {
        int n = 0;
        for (int i = 0; i < w_ * h_; ++i) {
            if (((code >> (2 * i)) & 3ULL) != 0) ++n;
        }
        return n;
    }

    int column_height(std::uint64_t code, int c) const {
        int r = 0;
        while (r < h_ && cell_at(code, c, r) != 0) ++r;
        return r;
    }

    int find_winner(std::uint64_t code) const {
        static constexpr int kDirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
        for (int c = 0; c < w_; ++c) {
            for (int r = 0; r < h_; ++r) {
                int piece = cell_at(code, c, r);
                if (piece == 0) continue;
                for (const auto& d : kDirs) {
                    int run = 1;
                    int cc = c + d[0], rr = r + d[1];
                    while (cc >= 0 && cc < w_ && rr >= 0 && rr < h_ && cell_at(code, cc, rr) == piece) {
                        ++run;
                        cc += d[0];
                        rr += d[1];
                    }
                    if (run >= k_) return piece - 1;
                }
            }
        }
        return -1;
    }

    std::string id_;
    int w_, h_, k_;
};

// ---------------------------------------------------------------------------
// nim: remove any positive count from one heap, taking the last object wins

class NimGame final : public GameDef {
public:
    explicit NimGame(std::vector<int> heaps) : id_("nim"), heaps_(std::move(heaps)) {
        if (heaps_.empty() || heaps_.size() > 6) throw ContractError("nim: 1..6 heaps required");
        for (int h : heaps_) {
            if (h < 0 || h > 15) throw ContractError("nim: heap sizes must be in 0..15");
        }
        int total = 0;
        for (int h : heaps_) total += h;
        max_ply_ = total + 1;
        for (int h : heaps_) id_ += "_" + std::to_string(h);
    }

    const std::string& id() const override { return id_; }

    State initial_state() const override {
        std::uint64_t code = encode(heaps_, 0);
        return {code, code, 0};
    }

    NodeKind node_kind(const State& s) const override {
        auto [heaps, player] = decode(s.code);
        bool empty = std::all_of(heaps.begin(), heaps.end(), [](int h) { return h == 0; });
        if (empty) {
            // player to move took nothing; the previous mover took the
            // last object and wins
            return NodeKind::terminal(player == 0 ? 0.0 : 1.0);
        }
        return NodeKind::decision(player);
    }

    std::vector<Edge> successors(const State& s) const override {
        auto [heaps, player] = decode(s.code);
        std::vector<Edge> out;
        for (std::size_t i = 0; i < heaps.size(); ++i) {
            if (heaps[i] == 0) continue;
            if (i > 0 && heaps[i] == heaps[i - 1]) continue;  // identical heap, identical moves
            for (int take = 1; take <= heaps[i]; ++take) {
                std::vector<int> next = heaps;
                next[i] -= take;
                std::uint64_t code = encode(next, 1 - player);
                out.push_back({"h" + std::to_string(i) + "-" + std::to_string(take), std::nullopt,
                               {code, code, s.ply + 1}});
            }
        }
        return out;
    }

    int max_ply() const override { return max_ply_; }

private:
    // canonical form: heaps sorted descending, player in the top bits
    static std::uint64_t encode(std::vector<int> heaps, int player) {
        std::sort(heaps.begin(), heaps.end(), std::greater<int>());
        std::uint64_t code = static_cast<std::uint64_t>(player) << 60;
        for (std::size_t i = 0; i < heaps.size(); ++i) {
            code |= static_cast<std::uint64_t>(heaps[i]) << (4 * i);
        }
        code |= static_cast<std::uint64_t>(heaps.size()) << 48;
        return code;
    }

    static std::pair<std::vector<int>, int> decode(std::uint64_t code) {
        int player = static_cast<int>(code >> 60);
        std::size_t n = static_cast<std::size_t>((code >> 48) & 0xFULL);
        std::vector<int> heaps(n);
        for (std::size_t i = 0; i < n; ++i) heaps[i] = static_cast<int>((code >> (4 * i)) & 0xFULL);
        return {heaps, player};
    }

    std::string id_;
    std::vector<int> heaps_;
    int max_ply_;
};

// ---------------------------------------------------------------------------
// war_small: the shuffle is a single pre-play chance node choosing which
// half of the deck Player 0 holds; both hands are then played in
// descending order and each trick goes to the higher card

class WarGame final : public GameDef {
public:
    explicit WarGame(int deck) : id_("war_small_" + std::to_string(deck)), deck_(deck) {
        if (deck < 4 || deck > 12 || deck % 2 != 0) {
            throw ContractError("war_small: deck must be an even size in 4..12");
        }
    }

    const std::string& id() const override { return id_; }

    State initial_state() const override { return {0, 0, 0}; }

    NodeKind node_kind(const State& s) const override {
        if ((s.code & kDealtBit) == 0) return NodeKind::chance();
        return NodeKind::terminal(payoff_for(static_cast<std::uint32_t>(s.code & 0xFFFFFFULL)));
    }

    std::vector<Edge> successors(const State& s) const override {
        if ((s.code & kDealtBit) != 0) return {};
        std::vector<Edge> out;
        const int half = deck_ / 2;
        double count = 0;
        std::vector<std::uint32_t> deals;
        for (std::uint32_t mask = 0; mask < (1u << deck_); ++mask) {
            if (std::popcount(mask) == half) deals.push_back(mask);
        }
        count = static_cast<double>(deals.size());
        out.reserve(deals.size());
        for (std::uint32_t mask : deals) {
            std::uint64_t code = kDealtBit | mask;
            out.push_back({"d" + std::to_string(mask), 1.0 / count, {code, code, 1}});
        }
        return out;
    }

    int max_ply() const override { return 2; }

private:
    static constexpr std::uint64_t kDealtBit = 1ULL << 32;

    double payoff_for(std::uint32_t mask) const {
        std::vector<int> mine, theirs;
        for (int card = deck_ - 1; card >= 0; --card) {
            if (mask & (1u << card)) {
                mine.push_back(card);
            } else {
                theirs.push_back(card);
            }
        }
        int wins = 0;
        for (std::size_t i = 0; i < mine.size(); ++i) {
            if (mine[i] > theirs[i]) ++wins;
        }
        int losses = static_cast<int>(mine.size()) - wins;
        if (wins > losses) return 1.0;
        if (wins < losses) return 0.0;
        return 0.5;
    }

    std::string id_;
    int deck_;
};

// ---------------------------------------------------------------------------
// dice_race: first to advance `length` steps wins; each turn the mover
// picks a guaranteed +1 or a die that advances an odd amount in
// 1..2*faces-1, so every move makes progress and the tree stays finite

class DiceRaceGame final : public GameDef {
public:
    DiceRaceGame(int length, int faces)
        : id_("dice_race_" + std::to_string(length) + "_" + std::to_string(faces)),
          length_(length),
          faces_(faces) {
        if (length < 1 || length > 8) throw ContractError("dice_race: length must be in 1..8");
        if (faces < 2 || faces > 6) throw ContractError("dice_race: faces must be in 2..6");
    }

    const std::string& id() const override { return id_; }

    State initial_state() const override { return {0, 0, 0}; }

    NodeKind node_kind(const State& s) const override {
        auto [p0, p1, turn, rolling] = decode(s.code);
        if (p0 >= length_) return NodeKind::terminal(1.0);
        if (p1 >= length_) return NodeKind::terminal(0.0);
        if (rolling) return NodeKind::chance();
        return NodeKind::decision(turn);
    }

    std::vector<Edge> successors(const State& s) const override {
        auto [p0, p1, turn, rolling] = decode(s.code);
        std::vector<Edge> out;
        if (!rolling) {
            std::uint64_t safe = encode(turn == 0 ? cap(p0 + 1) : p0, turn == 1 ? cap(p1 + 1) : p1,
                                        1 - turn, false);
            out.push_back({"safe", std::nullopt, {safe, safe, s.ply + 1}});
            std::uint64_t risky = encode(p0, p1, turn, true);
            out.push_back({"risky", std::nullopt, {risky, risky, s.ply + 1}});
            return out;
        }
        double p = 1.0 / static_cast<double>(faces_);
        for (int f = 0; f < faces_; ++f) {
            int adv = 2 * f + 1;
            std::uint64_t code = encode(turn == 0 ? cap(p0 + adv) : p0, turn == 1 ? cap(p1 + adv) : p1,
                                        1 - turn, false);
            out.push_back({"r" + std::to_string(adv), p, {code, code, s.ply + 1}});
        }
        return out;
    }

    int max_ply() const override { return 4 * length_ + 2; }

private:
    int cap(int pos) const { return std::min(pos, length_); }

    static std::uint64_t encode(int p0, int p1, int turn, bool rolling) {
        return static_cast<std::uint64_t>(p0) | (static_cast<std::uint64_t>(p1) << 4) |
               (static_cast<std::uint64_t>(turn) << 8) | (static_cast<std::uint64_t>(rolling) << 9);
    }

    static std::tuple<int, int, int, bool> decode(std::uint64_t code) {
        return {static_cast<int>(code & 0xF), static_cast<int>((code >> 4) & 0xF),
                static_cast<int>((code >> 8) & 1), ((code >> 9) & 1) != 0};
    }

    std::string id_;
    int length_;
    int faces_;
};

// ---------------------------------------------------------------------------
// catalog

std::map<std::string, int> merge_params(const GameSpec& spec, const std::map<std::string, int>& overrides) {
    std::map<std::string, int> params = spec.default_params;
    for (const auto& [key, value] : overrides) {
        if (params.find(key) == params.end()) {
            throw ContractError("unknown parameter '" + key + "' for game '" + spec.name + "'");
        }
        params[key] = value;
    }
    return params;
}

std::vector<GameSpec> build_catalog() {
    std::vector<GameSpec> catalog;

    catalog.push_back({"coin_toss",
                       {},
                       [](const std::map<std::string, int>&) { return as_game(coin_toss_tree(), "coin_toss"); },
                       {{"K", 0.0, "analytical"},
                        {"L", 1.0, "analytical"},
                        {"S", -1.0, "analytical"},
                        {"Sigma", 0.0, "analytical; flip is pre-play"}},
                       "single fair flip"});

    catalog.push_back({"toy",
                       {},
                       [](const std::map<std::string, int>&) { return as_game(toy_tree(), "toy"); },
                       {{"K", 0.25, "analytical"},
                        {"L", 0.5, "analytical"},
                        {"S", -1.0 / 3.0, "analytical"},
                        {"Sigma", 0.0, "derived; root chance is pre-play"}},
                       "five-node flip-then-choose example"});

    catalog.push_back({"toy_pure_luck",
                       {},
                       [](const std::map<std::string, int>&) {
                           return as_game(toy_pure_luck_tree(), "toy_pure_luck");
                       },
                       {{"K", 0.0, "analytical"},
                        {"L", 0.5, "analytical"},
                        {"S", -1.0, "analytical"},
                        {"Sigma", 0.0, "derived"}},
                       "toy with the decision collapsed away"});

    catalog.push_back({"toy_pure_skill",
                       {},
                       [](const std::map<std::string, int>&) {
                           return as_game(toy_pure_skill_tree(), "toy_pure_skill");
                       },
                       {{"K", 0.25, "analytical"},
                        {"L", 0.0, "analytical"},
                        {"S", 1.0, "analytical"},
                        {"Sigma", 0.0, "analytical; deterministic"}},
                       "toy with the root flip made a choice"});

    catalog.push_back({"lottery_choice",
                       {},
                       [](const std::map<std::string, int>&) {
                           return as_game(lottery_choice_tree(), "lottery_choice");
                       },
                       {{"K", 0.3, "analytical"},
                        {"L", 1.0, "analytical"},
                        {"S", -7.0 / 13.0, "analytical"},
                        {"Sigma", 0.0, "derived"}},
                       "pick the 80% or the 20% lottery"});

    catalog.push_back({"tictactoe",
                       {},
                       [](const std::map<std::string, int>&) -> GamePtr {
                           return std::make_shared<TicTacToeGame>();
                       },
                       {{"L", 0.0, "analytical; deterministic"},
                        {"S", 1.0, "analytical"},
                        {"Sigma", 0.0, "analytical; deterministic"}},
                       "K from exhaustive induction; no closed form asserted"});

    catalog.push_back({"nim",
                       {{"h0", 3}, {"h1", 4}, {"h2", 5}},
                       [](const std::map<std::string, int>& p) -> GamePtr {
                           std::vector<int> heaps;
                           for (int i = 0; i < 8; ++i) {
                               auto it = p.find("h" + std::to_string(i));
                               if (it != p.end()) heaps.push_back(it->second);
                           }
                           return std::make_shared<NimGame>(std::move(heaps));
                       },
                       {{"L", 0.0, "analytical; deterministic"}, {"Sigma", 0.0, "analytical"}},
                       "normal-play nim, last object wins"});

    catalog.push_back({"connect_k",
                       {{"w", 4}, {"h", 4}, {"k", 3}},
                       [](const std::map<std::string, int>& p) -> GamePtr {
                           return std::make_shared<ConnectKGame>(p.at("w"), p.at("h"), p.at("k"));
                       },
                       {{"L", 0.0, "analytical; deterministic"}, {"Sigma", 0.0, "analytical"}},
                       "gravity connect-k; 4x4 k=3 is exactly solvable"});

    catalog.push_back({"war_small",
                       {{"deck", 6}},
                       [](const std::map<std::string, int>& p) -> GamePtr {
                           return std::make_shared<WarGame>(p.at("deck"));
                       },
                       {{"K", 0.0, "analytical; no decisions"},
                        {"S", -1.0, "analytical"},
                        {"Sigma", 0.0, "analytical; shuffle is pre-play"}},
                       "shuffle modeled as pre-play starting-state choice"});

    catalog.push_back({"dice_race",
                       {{"length", 4}, {"faces", 2}},
                       [](const std::map<std::string, int>& p) -> GamePtr {
                           return std::make_shared<DiceRaceGame>(p.at("length"), p.at("faces"));
                       },
                       {},
                       "mixed-leverage exemplar with in-play chance (Sigma > 0)"});

    return catalog;
}

}  // namespace

const std::vector<GameSpec>& list_games() {
    static const std::vector<GameSpec> catalog = build_catalog();
    return catalog;
}

GamePtr instantiate(const std::string& name, const std::map<std::string, int>& params) {
    for (const auto& spec : list_games()) {
        if (spec.name != name) continue;
        GamePtr game = spec.factory(merge_params(spec, params));
        ValidationReport report = validate_game(*game);
        if (!report.valid()) {
            throw StructuralError("game '" + name + "' failed validation: " + report.errors.front());
        }
        return game;
    }
    throw UnknownGameError("unknown game '" + name + "'");
}

}  // namespace sli
