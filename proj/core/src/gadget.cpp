#include "pdmark/gadget.hpp"

#include <algorithm>
#include <set>

namespace pdmark {

namespace {

std::string pop_state(int i, int w) {
    return "p" + std::to_string(i) + "w" + std::to_string(w);
}

int component(const GadgetSymbol& s, int i) {
    switch (i) {
        case 1: return s.c1;
        case 2: return s.c2;
        default: return s.c3;
    }
}

Letter switch_letter(int i) { return Letter{"sw" + std::to_string(i)}; }

void require_gadget(const Pda& pda) {
    if (!pda.has_state("q_push") || !pda.has_letter(Letter{"sw1"}) ||
        !pda.has_letter(Letter{"push(2,2,2)"}))
        throw InputError("automaton is not the counter gadget");
}

void require_push_mode(const Pda& pda, const Config& config) {
    require_gadget(pda);
    require_config(pda, config);
    if (config.state != "q_push")
        throw InputError("config " + to_text(config) + ": zero tests start in q_push");
}

long long compared_component(const Triple& k, int which) { return which == 1 ? k.k1 : k.k2; }
long long raised_component(const Triple& k, int which) { return which == 1 ? k.k2 : k.k1; }

int check_which(int which) {
    if (which != 1 && which != 2) throw InputError("which must be 1 or 2");
    return which;
}

Config pushed(const Pda& pda, const Config& config, const Letter& letter) {
    auto next = step(pda, config, letter);
    if (!next) throw InputError("letter " + letter.name + " undefined at " + to_text(config));
    return *next;
}

// Ascent pairs needed until the raised component strictly exceeds both
// compared ones: smallest P with raise + 6P > max(cmp, k3) + 4P.
long long ascent_pairs(const Triple& k, int which) {
    long long excess = std::max(compared_component(k, which), k.k3) - raised_component(k, which);
    if (excess < 0) return 0;
    return excess / 2 + 1;
}

} // namespace

std::string gadget_symbol_name(const GadgetSymbol& s) {
    return std::to_string(s.c1) + std::to_string(s.c2) + std::to_string(s.c3);
}

GadgetSymbol parse_gadget_symbol(const StackSymbol& symbol) {
    const std::string& n = symbol.name;
    if (symbol.is_bottom || n.size() != 3)
        throw InputError("'" + n + "' is not a gadget stack symbol");
    GadgetSymbol s;
    s.c1 = n[0] - '0';
    s.c2 = n[1] - '0';
    s.c3 = n[2] - '0';
    if (s.c1 < 1 || s.c1 > 3 || s.c2 < 1 || s.c2 > 3 || s.c3 != 2)
        throw InputError("'" + n + "' is not a gadget stack symbol");
    return s;
}

Pda build_gadget() {
    Pda p;
    p.states.push_back("q_push");
    for (int i = 1; i <= 3; ++i)
        for (int w = 0; w <= 2; ++w) p.states.push_back(pop_state(i, w));
    p.states.push_back("q_fin");
    std::sort(p.states.begin(), p.states.end());
    p.initial = "q_push";
    p.finals = {"q_fin"};
    p.bottom = bottom_symbol();

    std::vector<GadgetSymbol> symbols;
    for (int c1 = 1; c1 <= 3; ++c1)
        for (int c2 = 1; c2 <= 3; ++c2) symbols.push_back(GadgetSymbol{c1, c2, 2});
    for (const auto& s : symbols) p.stack_alphabet.push_back(plain_symbol(gadget_symbol_name(s)));
    p.stack_alphabet.push_back(bottom_symbol());

    for (const auto& s : symbols)
        p.input_alphabet.push_back(Letter{"push(" + std::to_string(s.c1) + "," +
                                          std::to_string(s.c2) + "," + std::to_string(s.c3) +
                                          ")"});
    for (int i = 1; i <= 3; ++i) p.input_alphabet.push_back(switch_letter(i));
    p.input_alphabet.push_back(Letter{"t"});
    std::sort(p.input_alphabet.begin(), p.input_alphabet.end());

    auto rule = [&p](StateId state, StackSymbol top, Letter in, StateId next,
                     std::vector<StackSymbol> push) {
        p.rules.push_back(TransitionRule{std::move(state), std::move(top), std::move(in),
                                         std::move(next), std::move(push)});
    };

    std::vector<StackSymbol> tops;
    for (const auto& s : symbols) tops.push_back(plain_symbol(gadget_symbol_name(s)));
    tops.push_back(bottom_symbol());

    // push mode: push anything, switch anywhere (also on the bare bottom)
    for (const auto& top : tops) {
        for (const auto& s : symbols) {
            Letter in{"push(" + std::to_string(s.c1) + "," + std::to_string(s.c2) + "," +
                      std::to_string(s.c3) + ")"};
            rule("q_push", top, in, "q_push", {plain_symbol(gadget_symbol_name(s)), top});
        }
        for (int i = 1; i <= 3; ++i) rule("q_push", top, switch_letter(i), pop_state(i, 0), {top});
    }
    // pop mode: the i-th component of the top symbol is its popping cost
    for (int i = 1; i <= 3; ++i) {
        for (const auto& s : symbols) {
            StackSymbol top = plain_symbol(gadget_symbol_name(s));
            int c = component(s, i);
            if (c == 1) rule(pop_state(i, 0), top, Letter{"t"}, pop_state(i, 0), {});
            else rule(pop_state(i, 0), top, Letter{"t"}, pop_state(i, c - 1), {top});
            rule(pop_state(i, 1), top, Letter{"t"}, pop_state(i, 0), {});
            rule(pop_state(i, 2), top, Letter{"t"}, pop_state(i, 1), {top});
        }
        rule(pop_state(i, 0), bottom_symbol(), Letter{"t"}, "q_fin", {bottom_symbol()});
    }
    rule("q_fin", bottom_symbol(), Letter{"t"}, "q_fin", {bottom_symbol()});
    return p;
}

Triple triple_of(const Config& config) {
    if (!config.stack.well_formed())
        throw InputError("config " + to_text(config) + ": malformed stack word");
    Triple k;
    for (const auto& g : config.stack.symbols) {
        if (g.is_bottom) continue;
        GadgetSymbol s = parse_gadget_symbol(g);
        k.k1 += s.c1;
        k.k2 += s.c2;
        k.k3 += s.c3;
    }
    return k;
}

CounterPair counters_of(const Config& config) {
    Triple k = triple_of(config);
    return CounterPair{k.k1 - k.k3, k.k2 - k.k3};
}

Letter push_letter(int iota1, int iota2) {
    if (iota1 < -1 || iota1 > 1 || iota2 < -1 || iota2 > 1)
        throw InputError("counter deltas must be in {-1, 0, +1}");
    return Letter{"push(" + std::to_string(2 + iota1) + "," + std::to_string(2 + iota2) + ",2)"};
}

namespace {

bool switch_marked_canonical(const Config& config, int i, RankProvider& ranks) {
    Config target{pop_state(i, 0), config.stack};
    return ranks(target) < ranks(config);
}

} // namespace

bool zero_test_canonical(const Pda& pda, const Config& config, int which) {
    RankProvider ranks(pda);
    return zero_test_canonical(pda, config, which, ranks);
}

bool zero_test_canonical(const Pda& pda, const Config& config, int which, RankProvider& ranks) {
    check_which(which);
    require_push_mode(pda, config);
    Triple k = triple_of(config);
    long long bound =
        std::max<long long>(0, std::max(compared_component(k, which) - raised_component(k, which),
                                        k.k3 - raised_component(k, which))) +
        1;
    // raise the uncompared component while keeping k_which - k3 unchanged
    Letter ascent = which == 1 ? push_letter(0, +1) : push_letter(+1, 0);
    Config c = config;
    for (long long m = 0;; ++m) {
        if (switch_marked_canonical(c, which, ranks) &&
            switch_marked_canonical(c, 3, ranks))
            return true;
        if (m == bound) return false;
        c = pushed(pda, c, ascent);
    }
}

Fragment zero_test_region(const Pda& pda, const Config& config, int which,
                          std::size_t height_ceiling) {
    check_which(which);
    require_push_mode(pda, config);
    Triple k = triple_of(config);
    long long pairs = ascent_pairs(k, which);
    std::size_t max_height = config.stack.height() + 2 * static_cast<std::size_t>(pairs) + 2;
    if (max_height > height_ceiling)
        throw ResourceError("zero-test region for " + to_text(config) + " needs stack height " +
                            std::to_string(max_height) + ", ceiling is " +
                            std::to_string(height_ceiling));

    Letter ascent = which == 1 ? push_letter(0, +1) : push_letter(+1, 0);
    std::vector<Config> interior;
    Config c = config;
    interior.push_back(c);
    for (long long j = 0; j < 2 * pairs; ++j) {
        c = pushed(pda, c, ascent);
        interior.push_back(c);
    }
    // both probes at the fully ascended configuration
    interior.push_back(pushed(pda, c, push_letter(+1, +1)));
    interior.push_back(pushed(pda, c, which == 1 ? push_letter(-1, +1) : push_letter(+1, -1)));

    std::set<Config> vertices(interior.begin(), interior.end());
    std::vector<Edge> edges;
    for (const auto& v : interior) {
        for (const auto& [a, w] : successors(pda, v)) {
            edges.push_back(Edge{v, a, w});
            vertices.insert(w);
        }
    }
    std::set<Config> interior_set(interior.begin(), interior.end());

    Fragment f;
    f.roots = {config};
    f.bounds.depth = 2 * static_cast<std::size_t>(pairs) + 2;
    f.bounds.max_stack_height = max_height;
    f.vertices.assign(vertices.begin(), vertices.end());
    for (const auto& v : f.vertices) {
        if (!interior_set.count(v)) f.frontier.push_back(v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    f.edges = std::move(edges);
    return f;
}

namespace {

bool switch_marked_in(const MarkedFragment& marking, const Config& config, int i) {
    if (!marking.has_vertex(config) || marking.is_frontier(config))
        throw InputError("marking does not cover configuration " + to_text(config));
    const MarkedEdge* e = find_edge(marking, config, switch_letter(i));
    if (e == nullptr)
        throw InputError("marking does not cover configuration " + to_text(config));
    return e->marked;
}

} // namespace

bool zero_test_robust(const Pda& pda, const MarkedFragment& marking, const Config& config,
                      int which) {
    check_which(which);
    require_push_mode(pda, config);
    Triple k = triple_of(config);
    if (k.k1 % 2 != 0 || k.k2 % 2 != 0 || k.k3 % 2 != 0)
        throw InputError("config " + to_text(config) + " is not even");

    Letter ascent = which == 1 ? push_letter(0, +1) : push_letter(+1, 0);
    long long pairs = ascent_pairs(k, which);
    Config c = config;
    if (!marking.has_vertex(c) || marking.is_frontier(c))
        throw InputError("marking does not cover configuration " + to_text(c));
    for (long long j = 0; j < 2 * pairs; ++j) {
        c = pushed(pda, c, ascent);
        if (!marking.has_vertex(c) || marking.is_frontier(c))
            throw InputError("marking does not cover configuration " + to_text(c));
    }

    bool compared = switch_marked_in(marking, c, which);
    bool third = switch_marked_in(marking, c, 3);
    if (compared && third) return true;
    if (compared) {
        // k_which <= k3; the probe raises k_which by 3 and k3 by 2, so a
        // marked switch to p3 there forces equality on even inputs
        Config probe = pushed(pda, c, push_letter(+1, +1));
        return switch_marked_in(marking, probe, 3);
    }
    if (third) {
        // k3 <= k_which; symmetric probe
        Config probe = pushed(pda, c, which == 1 ? push_letter(-1, +1) : push_letter(+1, -1));
        return switch_marked_in(marking, probe, which);
    }
    throw InputError("marking has no marked switch edge at " + to_text(c) +
                     "; not a well-formed marking");
}

bool zero_oracle(const Config& config, int which) {
    check_which(which);
    Triple k = triple_of(config);
    return compared_component(k, which) == k.k3;
}

} // namespace pdmark
