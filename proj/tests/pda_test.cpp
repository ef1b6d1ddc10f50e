#include <doctest.h>

#include <algorithm>

#include "pdmark/fragment.hpp"
#include "pdmark/pda.hpp"
#include "support/brute_force.hpp"

using namespace pdmark;

namespace {

Config cfg(const std::string& text) { return parse_config(text); }

} // namespace

TEST_CASE("example1 validates cleanly") {
    CHECK(validate(builtin_pda("example1")).empty());
    CHECK(validate(builtin_pda("example1-dead")).empty());
}

TEST_CASE("validate flags a duplicate rule key") {
    Pda p = builtin_pda("example1");
    p.rules.push_back(TransitionRule{"q_in", bottom_symbol(), Letter{"a"}, "q_fin",
                                     {bottom_symbol()}});
    auto violations = validate(p);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("determinism") != std::string::npos);
}

TEST_CASE("validate flags a removed bottom") {
    Pda p = builtin_pda("example1");
    p.rules.push_back(TransitionRule{"q_fin", bottom_symbol(), Letter{"b"}, "q_fin", {}});
    // replace the conflicting rule first so only the bottom violation remains
    std::erase_if(p.rules, [](const TransitionRule& r) {
        return r.state == "q_fin" && r.input.name == "b" && !r.push.empty();
    });
    auto violations = validate(p);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("bottom removed") != std::string::npos);
}

TEST_CASE("validate flags undeclared names and pushed bottoms") {
    Pda p = builtin_pda("example1");
    p.rules.push_back(TransitionRule{"nowhere", plain_symbol("a"), Letter{"a"}, "q_in",
                                     {plain_symbol("a")}});
    p.rules.push_back(TransitionRule{"q_in", plain_symbol("a"), Letter{"zzz"}, "q_in",
                                     {plain_symbol("a")}});
    p.rules.push_back(TransitionRule{"q#", plain_symbol("a"), Letter{"zz2"}, "q#",
                                     {bottom_symbol(), bottom_symbol()}});
    auto violations = validate(p);
    CHECK(violations.size() >= 3);
    bool pushed_bottom = false;
    for (const auto& v : violations) pushed_bottom |= v.find("bottom pushed") != std::string::npos;
    CHECK(pushed_bottom);
}

TEST_CASE("step follows the example transitions") {
    Pda p = builtin_pda("example1");
    CHECK(step(p, cfg("q_in:_"), Letter{"a"}) == cfg("q_in:a,_"));
    CHECK(step(p, cfg("q#:a,_"), Letter{"a"}) == cfg("q#:_"));
    CHECK(step(p, cfg("q#:a,_"), Letter{"b"}) == cfg("q#:b,a,_"));
    CHECK(step(p, cfg("q_fin:a,_"), Letter{"a"}) == std::nullopt); // delta is partial
    CHECK_THROWS_AS(step(p, Config{"nowhere", make_stack({})}, Letter{"a"}), InputError);
    CHECK_THROWS_AS(step(p, Config{"q_in", StackWord{}}, Letter{"a"}), InputError);
}

TEST_CASE("successors enumerate the out-edges in letter order") {
    Pda p = builtin_pda("example1");
    auto succ = successors(p, cfg("q_in:_"));
    REQUIRE(succ.size() == 3);
    CHECK(succ[0] == std::pair{Letter{"#"}, cfg("q#:_")});
    CHECK(succ[1] == std::pair{Letter{"a"}, cfg("q_in:a,_")});
    CHECK(succ[2] == std::pair{Letter{"b"}, cfg("q_in:b,_")});

    auto loops = successors(p, cfg("q_fin:_"));
    REQUIRE(loops.size() == 3);
    for (const auto& [a, c] : loops) CHECK(c == cfg("q_fin:_"));

    CHECK(successors(p, cfg("q_fin:a,_")).empty());
}

TEST_CASE("predecessors invert the step relation") {
    Pda p = builtin_pda("example1");
    auto preds = predecessors(p, cfg("q_fin:_"));
    REQUIRE(preds.size() == 6);
    for (const auto& x : {"#", "a", "b"}) {
        CHECK(std::count(preds.begin(), preds.end(), std::pair{Letter{x}, cfg("q#:_")}) == 1);
        CHECK(std::count(preds.begin(), preds.end(), std::pair{Letter{x}, cfg("q_fin:_")}) == 1);
    }

    auto sharp_preds = predecessors(p, cfg("q#:_"));
    REQUIRE(sharp_preds.size() == 3);
    CHECK(std::count(sharp_preds.begin(), sharp_preds.end(),
                     std::pair{Letter{"#"}, cfg("q_in:_")}) == 1);
    CHECK(std::count(sharp_preds.begin(), sharp_preds.end(),
                     std::pair{Letter{"a"}, cfg("q#:a,_")}) == 1);
    CHECK(std::count(sharp_preds.begin(), sharp_preds.end(),
                     std::pair{Letter{"b"}, cfg("q#:b,_")}) == 1);
}

TEST_CASE("step/pre duality holds exhaustively up to height 4") {
    for (const auto& name : {"example1", "example1-dead"}) {
        Pda p = builtin_pda(name);
        test::CappedDistances universe(p, 5);
        auto configs = universe.all_configs(4);
        for (const auto& c : configs) {
            auto succ = successors(p, c);
            CHECK(succ.size() <= p.input_alphabet.size());
            for (const auto& [a, c2] : succ) {
                auto back = predecessors(p, c2);
                CHECK(std::count(back.begin(), back.end(), std::pair{a, c}) == 1);
            }
            auto preds = predecessors(p, c);
            CHECK(preds.size() <= p.rules.size());
            for (const auto& [a, c0] : preds) {
                CHECK(step(p, c0, a) == c);
            }
        }
    }
}

TEST_CASE("builtin lookup") {
    CHECK_THROWS_AS(builtin_pda("nosuch"), LookupError);
    // q_dead cannot reach the final configurations no matter the stack
    Pda dead = builtin_pda("example1-dead");
    test::CappedDistances oracle(dead, 4);
    CHECK(!oracle.distance(cfg("q_dead:_")).has_value());
    CHECK(!oracle.distance(cfg("q_dead:a,b,_")).has_value());
    CHECK(oracle.distance(cfg("q_in:_")).has_value());
}

TEST_CASE("reachable configurations stay well-formed") {
    for (const auto& name : {"example1", "example1-dead"}) {
        Pda p = builtin_pda(name);
        Fragment f = explore(p, {Config{p.initial, make_stack({})}}, Bounds{4, 4});
        for (const auto& v : f.vertices) CHECK(v.stack.well_formed());
    }
}

TEST_CASE("config text form round-trips") {
    for (const auto& text : {"q_in:_", "q#:a,b,_", "q_push:312,222,_"}) {
        CHECK(to_text(parse_config(text)) == text);
    }
    CHECK_THROWS_AS(parse_config("bogus"), ParseError);
    CHECK_THROWS_AS(parse_config("q_in:a,b"), ParseError);   // no bottom
    CHECK_THROWS_AS(parse_config("q_in:_,a,_"), ParseError); // bottom not last
    CHECK_THROWS_AS(parse_config(":a,_"), ParseError);       // empty state
    CHECK_THROWS_AS(parse_config("q_in:a,,_"), ParseError);  // empty symbol
}

TEST_CASE("pda JSON round-trips") {
    for (const auto& name : {"example1", "example1-dead"}) {
        Pda p = builtin_pda(name);
        CHECK(decode_pda(encode_pda(p)) == p);
    }
    CHECK_THROWS_AS(decode_pda("{"), ParseError);
    CHECK_THROWS_AS(decode_pda("{\"states\": []}"), ParseError);
    CHECK_THROWS_AS(
        decode_pda(R"({"states":["q"],"input_alphabet":["a"],"stack_alphabet":["a"],
                       "initial":"q","finals":[],"rules":[]})"),
        ParseError); // missing bottom symbol
}

TEST_CASE("final configurations are bottom-only stacks of final states") {
    Pda p = builtin_pda("example1");
    CHECK(is_final_config(p, cfg("q_fin:_")));
    CHECK(!is_final_config(p, cfg("q_fin:a,_")));
    CHECK(!is_final_config(p, cfg("q_in:_")));
    CHECK(final_configs(p) == std::vector<Config>{cfg("q_fin:_")});
}
