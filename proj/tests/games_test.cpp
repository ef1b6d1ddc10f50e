#include <doctest.h>

#include <algorithm>
#include <functional>

#include "pdmark/games.hpp"
#include "pdmark/rank.hpp"

using namespace pdmark;

namespace {

Config cfg(const std::string& text) { return parse_config(text); }

GameFragment game_on(const Pda& pda, Fragment fragment, std::map<StateId, Player> owner) {
    GameFragment g;
    g.fragment = std::move(fragment);
    g.owner = std::move(owner);
    for (const auto& v : g.fragment.vertices) {
        if (is_final_config(pda, v)) g.targets.push_back(v);
    }
    return g;
}

std::map<StateId, Player> all_eve(const Pda& pda) {
    std::map<StateId, Player> owner;
    for (const auto& s : pda.states) owner[s] = Player::Eve;
    return owner;
}

// every play from `from` where Eve follows the strategy and Adam tries
// everything must reach a target within `budget` moves
bool playout_reaches(const GameFragment& game, const AttractorResult& res, const Config& from,
                     std::size_t budget) {
    if (std::binary_search(game.targets.begin(), game.targets.end(), from)) return true;
    if (budget == 0) return false;
    std::vector<const Edge*> moves;
    for (const auto& e : game.fragment.edges) {
        if (e.from == from) moves.push_back(&e);
    }
    if (game.owner.at(from.state) == Player::Eve) {
        auto it = res.strategy.find(from);
        if (it == res.strategy.end()) return false;
        return playout_reaches(game, res, it->second.to, budget - 1);
    }
    if (moves.empty()) return false;
    for (const Edge* e : moves) {
        if (!playout_reaches(game, res, e->to, budget - 1)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("with a single player the attractor collapses to the rank fixpoint") {
    Pda p = builtin_pda("example1");
    Fragment f = explore(p, {cfg("q_in:_")}, Bounds{5, 3});
    GameFragment game = game_on(p, f, all_eve(p));
    AttractorResult res = attractor(game);

    RankProvider ranks(p);
    for (const auto& v : f.vertices) {
        if (f.is_frontier(v)) continue;
        Rank r = ranks(v);
        bool winning = std::binary_search(res.winning.begin(), res.winning.end(), v);
        CHECK(winning == r.is_finite());
        if (winning) CHECK(res.levels.at(v) == r.value());
    }
}

TEST_CASE("an owning opponent can escape to the dead state") {
    Pda p = builtin_pda("example1-dead");
    Fragment f = explore(p, {cfg("q_in:_")}, Bounds{4, 2});
    std::map<StateId, Player> owner = all_eve(p);
    owner["q_in"] = Player::Adam;
    GameFragment game = game_on(p, f, owner);
    AttractorResult res = attractor(game);
    CHECK(!std::binary_search(res.winning.begin(), res.winning.end(), cfg("q_in:_")));
    CHECK(std::binary_search(res.winning.begin(), res.winning.end(), cfg("q#:_")));
}

TEST_CASE("without targets nothing is winning") {
    Pda p = builtin_pda("example1");
    Fragment f = explore(p, {cfg("q_in:_")}, Bounds{3, 2});
    std::map<StateId, Player> owner;
    for (const auto& s : p.states) owner[s] = Player::Adam;
    GameFragment game;
    game.fragment = f;
    game.owner = owner;
    AttractorResult res = attractor(game);
    CHECK(res.winning.empty());
    CHECK(res.levels.empty());
    CHECK(res.strategy.empty());
}

TEST_CASE("the strategy reaches a target within the level, against every Adam") {
    Pda p = builtin_pda("example1-dead");
    Fragment f = explore(p, {cfg("q_in:_")}, Bounds{5, 2});
    std::map<StateId, Player> owner{{"q_in", Player::Eve},
                                    {"q#", Player::Adam},
                                    {"q_fin", Player::Eve},
                                    {"q_dead", Player::Adam}};
    GameFragment game = game_on(p, f, owner);
    AttractorResult res = attractor(game);

    CHECK(std::binary_search(res.winning.begin(), res.winning.end(), cfg("q_in:_")));
    for (const auto& v : res.winning) {
        CHECK(playout_reaches(game, res, v, res.levels.at(v)));
    }
    // chosen edges always strictly descend
    for (const auto& [v, e] : res.strategy) {
        CHECK(res.levels.at(e.to) < res.levels.at(v));
    }
}

TEST_CASE("dead ends lose unless they are targets") {
    Pda p = builtin_pda("example1");
    Fragment f = explore(p, {cfg("q_fin:a,_")}, Bounds{1, 1}); // no rules at this top
    GameFragment game;
    game.fragment = f;
    game.owner = all_eve(p);
    AttractorResult res = attractor(game);
    CHECK(res.winning.empty());

    game.targets = {cfg("q_fin:a,_")};
    AttractorResult res2 = attractor(game);
    CHECK(res2.winning == std::vector<Config>{cfg("q_fin:a,_")});
    CHECK(res2.levels.at(cfg("q_fin:a,_")) == 0);
}

TEST_CASE("growing the fragment never shrinks the winning set") {
    Pda p = builtin_pda("example1-dead");
    std::map<StateId, Player> owner{{"q_in", Player::Eve},
                                    {"q#", Player::Adam},
                                    {"q_fin", Player::Eve},
                                    {"q_dead", Player::Adam}};
    Fragment small = explore(p, {cfg("q_in:_")}, Bounds{3, 2});
    Fragment big = explore(p, {cfg("q_in:_")}, Bounds{5, 2});
    AttractorResult rs = attractor(game_on(p, small, owner));
    AttractorResult rb = attractor(game_on(p, big, owner));
    for (const auto& v : rs.winning) {
        if (small.is_frontier(v)) continue;
        CHECK(std::binary_search(rb.winning.begin(), rb.winning.end(), v));
    }
}

TEST_CASE("games decode from fragment JSON plus ownership") {
    Pda p = builtin_pda("example1");
    Fragment f = explore(p, {cfg("q_in:_")}, Bounds{3, 2});
    std::string fragment_json = encode_fragment(f);
    std::string game_json = fragment_json;
    game_json.insert(game_json.rfind('}'),
                     R"(,"owner": {"q_in": "eve", "q#": "adam", "q_fin": "eve"})");
    GameFragment game = decode_game(game_json, p);
    CHECK(game.fragment == f);
    CHECK(game.owner.at("q_in") == Player::Eve);
    CHECK(game.owner.at("q#") == Player::Adam);
    CHECK(game.targets == std::vector<Config>{cfg("q_fin:_")}); // defaulted

    AttractorResult res = attractor(game);
    std::string out = encode_attractor(res);
    CHECK(out.find("\"winning\"") != std::string::npos);
    CHECK(out.find("\"strategy\"") != std::string::npos);
    CHECK(encode_attractor(res) == out);

    std::string bad = fragment_json;
    bad.insert(bad.rfind('}'), R"(,"owner": {"q_in": "nobody"})");
    CHECK_THROWS_AS(decode_game(bad, p), ParseError);
}

TEST_CASE("every vertex state needs an owner") {
    Pda p = builtin_pda("example1");
    Fragment f = explore(p, {cfg("q_in:_")}, Bounds{3, 2});
    GameFragment game;
    game.fragment = f;
    game.owner = {{"q_in", Player::Eve}};
    CHECK_THROWS_AS(attractor(game), InputError);
}
