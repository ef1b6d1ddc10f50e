#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "pdmark/fragment.hpp"
#include "pdmark/marking.hpp"
#include "pdmark/rank.hpp"
#include "support/brute_force.hpp"

using namespace pdmark;

namespace {

Config cfg(const std::string& text) { return parse_config(text); }

std::vector<Config> cfgs(std::initializer_list<const char*> texts) {
    std::vector<Config> out;
    for (const char* t : texts) out.push_back(cfg(t));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("rank values compare with a distinguished infinity") {
    CHECK(Rank::finite(3) < Rank::finite(4));
    CHECK(Rank::finite(4) < Rank::infinite());
    CHECK(Rank::infinite() == Rank::infinite());
    CHECK(Rank::finite(0).to_string() == "0");
    CHECK(Rank::infinite().to_string() == "inf");
    CHECK_THROWS_AS(Rank::infinite().value(), InputError);
}

TEST_CASE("level sets match the hand derivation for example1") {
    Pda p = builtin_pda("example1");
    LevelSets sets = level_sets(p, 3);
    REQUIRE(sets.levels.size() == 4);
    CHECK(sets.levels[0] == cfgs({"q_fin:_"}));
    CHECK(sets.levels[1] == cfgs({"q_fin:_", "q#:_"}));
    CHECK(sets.levels[2] == cfgs({"q_fin:_", "q#:_", "q_in:_", "q#:a,_", "q#:b,_"}));
    CHECK(sets.levels[3] == cfgs({"q_fin:_", "q#:_", "q_in:_", "q#:a,_", "q#:b,_", "q_in:a,_",
                                  "q_in:b,_", "q#:a,a,_", "q#:b,a,_", "q#:a,b,_", "q#:b,b,_"}));
}

TEST_CASE("level sets are increasing and start at the final configurations") {
    for (const auto& name : {"example1", "example1-dead"}) {
        Pda p = builtin_pda(name);
        LevelSets sets = level_sets(p, 5);
        CHECK(sets.levels[0] == final_configs(p));
        for (std::size_t i = 0; i + 1 < sets.levels.size(); ++i) {
            CHECK(std::includes(sets.levels[i + 1].begin(), sets.levels[i + 1].end(),
                                sets.levels[i].begin(), sets.levels[i].end()));
        }
    }
}

TEST_CASE("prestar accepts exactly the configurations of finite rank") {
    Pda p = builtin_pda("example1");
    PAutomaton pa = prestar(p);
    CHECK(accepts(pa, cfg("q_in:b,a,_")));
    CHECK(accepts(pa, cfg("q_fin:_")));
    CHECK(accepts(pa, cfg("q_in:_")));
    CHECK(!accepts(pa, cfg("q_fin:a,_"))); // no rules at a non-bottom top

    Pda dead = builtin_pda("example1-dead");
    PAutomaton dead_pa = prestar(dead);
    CHECK(!accepts(dead_pa, cfg("q_dead:_")));
    CHECK(!accepts(dead_pa, cfg("q_dead:a,b,_")));
    CHECK(accepts(dead_pa, cfg("q_in:a,_")));

    CHECK_THROWS_AS(accepts(pa, cfg("nowhere:_")), InputError);
    CHECK_THROWS_AS(accepts(pa, cfg("q_in:zzz,_")), InputError);
}

TEST_CASE("the pre-saturation automaton accepts exactly the final configurations") {
    for (const auto& name : {"example1", "example1-dead"}) {
        Pda p = builtin_pda(name);
        PAutomaton base = final_config_automaton(p);
        test::CappedDistances universe(p, 3);
        for (const auto& c : universe.all_configs(2)) {
            CHECK(accepts(base, c) == is_final_config(p, c));
        }
    }
}

TEST_CASE("saturation reaches the same fixpoint in any order") {
    for (const auto& name : {"example1", "example1-dead"}) {
        Pda p = builtin_pda(name);
        CHECK(prestar(p, SaturationOrder::Fifo) == prestar(p, SaturationOrder::Lifo));
    }
}

TEST_CASE("rank_of matches the golden example values") {
    Pda p = builtin_pda("example1");
    CHECK(rank_of(p, cfg("q_fin:_")) == Rank::finite(0));
    CHECK(rank_of(p, cfg("q#:_")) == Rank::finite(1));
    CHECK(rank_of(p, cfg("q_in:_")) == Rank::finite(2));
    CHECK(rank_of(p, cfg("q_in:a,b,_")) == Rank::finite(4));
    CHECK(rank_of(builtin_pda("example1-dead"), cfg("q_dead:_")) == Rank::infinite());
}

TEST_CASE("rank_via_saturation matches the trivial cases") {
    Pda p = builtin_pda("example1");
    CHECK(rank_via_saturation(p, cfg("q_fin:_")) == Rank::finite(0));
    CHECK(rank_via_saturation(p, cfg("q#:_")) == Rank::finite(1));
    CHECK(rank_via_saturation(builtin_pda("example1-dead"), cfg("q_dead:_")) == Rank::infinite());
}

TEST_CASE("the engines and the brute force agree up to height 3") {
    for (const auto& name : {"example1", "example1-dead"}) {
        Pda p = builtin_pda(name);
        LevelRankEngine levels(p);
        SaturationRankEngine saturation(p);
        test::CappedDistances oracle(p, 4);
        test::CappedDistances oracle_wider(p, 5);
        for (const auto& c : oracle.all_configs(3)) {
            auto d = oracle.distance(c);
            auto d_wide = oracle_wider.distance(c);
            CHECK(d == d_wide); // the cap does not bite
            Rank expected = d ? Rank::finite(*d) : Rank::infinite();
            CHECK(levels.rank(c) == expected);
            CHECK(saturation.rank(c) == expected);
        }
    }
}

TEST_CASE("the two engines agree on every example1 config up to height 5") {
    Pda p = builtin_pda("example1");
    LevelRankEngine levels(p);
    SaturationRankEngine saturation(p);
    test::CappedDistances universe(p, 5);
    for (const auto& c : universe.all_configs(5)) {
        CHECK(levels.rank(c) == saturation.rank(c));
    }
}

TEST_CASE("rank_of equals the least index in the explicit level sets") {
    Pda p = builtin_pda("example1");
    LevelSets sets = level_sets(p, 6);
    LevelRankEngine engine(p);
    std::set<Config> seen;
    for (std::size_t i = 0; i < sets.levels.size(); ++i) {
        for (const auto& c : sets.levels[i]) {
            if (!seen.insert(c).second) continue; // first appearance = least index
            CHECK(engine.rank(c) == Rank::finite(i));
        }
    }
}

TEST_CASE("the saturated automaton is closed under the saturation rules") {
    for (const char* name : {"example1", "example1-dead"}) {
        Pda p = builtin_pda(name);
        PAutomaton pa = prestar(p);
        std::map<std::pair<std::string, std::string>, std::set<std::string>> adj;
        std::set<std::tuple<std::string, std::string, std::string>> present;
        for (const auto& t : pa.transitions) {
            adj[{t.from, t.symbol.name}].insert(t.to);
            present.insert({t.from, t.symbol.name, t.to});
        }
        auto targets = [&adj](const std::string& from, const std::vector<StackSymbol>& word) {
            std::set<std::string> cur = {from};
            for (const auto& g : word) {
                std::set<std::string> next;
                for (const auto& s : cur) {
                    auto it = adj.find({s, g.name});
                    if (it != adj.end()) next.insert(it->second.begin(), it->second.end());
                }
                cur = std::move(next);
            }
            return cur;
        };
        for (const auto& r : p.rules) {
            for (const auto& t : targets(r.next_state, r.push)) {
                CHECK(present.count({r.state, r.top.name, t}) == 1);
            }
        }
    }
}

TEST_CASE("membership in prestar agrees with finite rank") {
    Pda p = builtin_pda("example1-dead");
    PAutomaton pa = prestar(p);
    LevelRankEngine engine(p);
    test::CappedDistances universe(p, 3);
    for (const auto& c : universe.all_configs(3)) {
        CHECK(accepts(pa, c) == engine.rank(c).is_finite());
    }
}

TEST_CASE("mark_fragment marks exactly the rank-decreasing edges") {
    Pda p = builtin_pda("example1");
    Fragment f = explore(p, {cfg("q_in:_")}, Bounds{5, 3});
    MarkedFragment m = mark_fragment(p, f);
    CHECK(m.vertices == f.vertices);
    CHECK(m.frontier == f.frontier);

    auto marked = [&m](const char* from, const char* letter, const char* to) {
        const MarkedEdge* e = find_edge(m, cfg(from), Letter{letter});
        REQUIRE(e != nullptr);
        REQUIRE(e->to == cfg(to));
        return e->marked;
    };
    CHECK(marked("q#:a,_", "a", "q#:_"));        // rank 2 -> 1
    CHECK(!marked("q_fin:_", "a", "q_fin:_"));   // 0 -> 0
    CHECK(!marked("q_in:_", "a", "q_in:a,_"));   // 2 -> 3
    CHECK(marked("q_in:_", "#", "q#:_"));        // 2 -> 1
}

TEST_CASE("every marked edge decreases the rank by exactly one") {
    Pda p = builtin_pda("example1");
    Fragment f = explore(p, {cfg("q_in:_")}, Bounds{5, 3});
    RankProvider ranks(p);
    MarkedFragment m = mark_fragment(p, f, ranks);
    for (const auto& e : m.edges) {
        Rank from = ranks(e.from), to = ranks(e.to);
        if (e.marked) {
            CHECK(to < from);
            REQUIRE(from.is_finite());
            REQUIRE(to.is_finite());
            CHECK(to.value() + 1 == from.value());
        } else {
            CHECK(to >= from);
        }
    }
}

TEST_CASE("infinite-rank regions never carry marks") {
    Pda p = builtin_pda("example1-dead");
    Fragment f = explore(p, {cfg("q_dead:_")}, Bounds{3, 2});
    MarkedFragment m = mark_fragment(p, f);
    for (const auto& e : m.edges) CHECK(!e.marked);
}

namespace {

// Random valid automata: every rule respects the bottom discipline, keys are
// unique by construction.
Pda random_pda(std::mt19937_64& rng) {
    Pda p;
    std::size_t n_states = 2 + rng() % 3;
    for (std::size_t i = 0; i < n_states; ++i) p.states.push_back("q" + std::to_string(i));
    for (const char* a : {"a", "b", "c"}) p.input_alphabet.push_back(Letter{a});
    p.stack_alphabet = {plain_symbol("s0"), plain_symbol("s1"), bottom_symbol()};
    p.bottom = bottom_symbol();
    p.initial = p.states.front();
    p.finals.push_back(p.states[rng() % n_states]);

    const StackSymbol s0 = plain_symbol("s0"), s1 = plain_symbol("s1"), bot = bottom_symbol();
    auto random_symbol = [&]() { return rng() & 1 ? s0 : s1; };
    for (const auto& state : p.states) {
        for (const auto& top : {s0, s1, bot}) {
            for (const auto& letter : p.input_alphabet) {
                if (rng() % 5 == 0) continue; // keep delta partial
                TransitionRule r;
                r.state = state;
                r.top = top;
                r.input = letter;
                r.next_state = p.states[rng() % n_states];
                if (top.is_bottom) {
                    if (rng() & 1) r.push = {bot};
                    else r.push = {random_symbol(), bot};
                } else {
                    switch (rng() % 3) {
                        case 0: break; // pop
                        case 1: r.push = {random_symbol()}; break;
                        default: r.push = {random_symbol(), random_symbol()}; break;
                    }
                }
                p.rules.push_back(std::move(r));
            }
        }
    }
    return p;
}

} // namespace

TEST_CASE("the engines agree with each other and the oracle on random automata") {
    std::mt19937_64 rng(20240809);
    for (int trial = 0; trial < 30; ++trial) {
        Pda p = random_pda(rng);
        REQUIRE(validate(p).empty());
        LevelRankEngine levels(p);
        SaturationRankEngine saturation(p);
        test::CappedDistances tight(p, 9);
        test::CappedDistances wide(p, 10);
        for (const auto& c : tight.all_configs(3)) {
            Rank via_levels = levels.rank(c);
            Rank via_saturation = saturation.rank(c);
            CHECK(via_levels == via_saturation);
            auto d9 = tight.distance(c);
            auto d10 = wide.distance(c);
            if (d9) {
                // any path within the cap is a real path
                REQUIRE(via_levels.is_finite());
                CHECK(via_levels.value() <= *d9);
            }
            if (via_levels.is_infinite()) {
                CHECK(!d10); // no path at any height means none within the cap
            }
            if (d9 && d9 == d10 && *d9 <= 18) {
                // exact: a shorter path would have to climb past height 10,
                // costing at least 8 pushes up and 11 pops down
                CHECK(via_levels == Rank::finite(*d9));
            }
        }
    }
}

TEST_CASE("parsers survive junk without crashing") {
    std::mt19937_64 rng(777);
    const std::string alphabet = "q_in:ab,_{}[]\"#0123 \n";
    for (int trial = 0; trial < 300; ++trial) {
        std::string junk;
        std::size_t len = rng() % 40;
        for (std::size_t i = 0; i < len; ++i) junk += alphabet[rng() % alphabet.size()];
        try {
            parse_config(junk);
        } catch (const ParseError&) {
        }
        try {
            decode_fragment(junk);
        } catch (const ParseError&) {
        }
        try {
            decode_pda(junk);
        } catch (const ParseError&) {
        }
    }
}

TEST_CASE("automaton and rank table exports are canonical") {
    Pda p = builtin_pda("example1");
    PAutomaton pa = prestar(p);
    std::string once = encode_pautomaton(pa);
    CHECK(once == encode_pautomaton(pa));
    CHECK(once.find("\"states\"") != std::string::npos);
    CHECK(once.find("\"transitions\"") != std::string::npos);
    CHECK(once.find("\"accepting\"") != std::string::npos);

    RankTable table;
    table.entries.emplace_back(cfg("q_in:_"), Rank::finite(2));
    table.entries.emplace_back(cfg("q_dead:_"), Rank::infinite());
    std::string json = encode_rank_table(table);
    CHECK(json.find("\"q_in:_\": 2") != std::string::npos);
    CHECK(json.find("\"q_dead:_\": \"inf\"") != std::string::npos);
}
