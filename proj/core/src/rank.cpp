#include "pdmark/rank.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

namespace pdmark {

using nlohmann::json;

std::uint64_t Rank::value() const {
    if (!finite_) throw InputError("rank is infinite");
    return value_;
}

std::string Rank::to_string() const {
    return finite_ ? std::to_string(value_) : std::string("inf");
}

namespace {

// Dense, integer-indexed view of a valid Pda; all engines work on this.
struct CompiledRule {
    int state;
    int top;
    int next;
    int push[2];
    int push_len;
};

struct CompiledPda {
    std::vector<std::string> states;  // sorted
    std::vector<std::string> symbols; // sorted, includes "_"
    int bottom = -1;
    std::vector<CompiledRule> rules;
    std::vector<int> finals;

    int n_states() const { return static_cast<int>(states.size()); }

    int state_index(const std::string& name) const {
        auto it = std::lower_bound(states.begin(), states.end(), name);
        if (it == states.end() || *it != name) return -1;
        return static_cast<int>(it - states.begin());
    }
    int symbol_index(const std::string& name) const {
        auto it = std::lower_bound(symbols.begin(), symbols.end(), name);
        if (it == symbols.end() || *it != name) return -1;
        return static_cast<int>(it - symbols.begin());
    }
};

CompiledPda compile(const Pda& pda) {
    auto violations = validate(pda);
    if (!violations.empty())
        throw InputError("invalid automaton: " + violations.front());
    CompiledPda cp;
    cp.states = pda.states;
    std::sort(cp.states.begin(), cp.states.end());
    for (const auto& g : pda.stack_alphabet) cp.symbols.push_back(g.name);
    std::sort(cp.symbols.begin(), cp.symbols.end());
    cp.bottom = cp.symbol_index("_");
    for (const auto& f : pda.finals) cp.finals.push_back(cp.state_index(f));
    std::sort(cp.finals.begin(), cp.finals.end());
    for (const auto& r : pda.rules) {
        CompiledRule cr{};
        cr.state = cp.state_index(r.state);
        cr.top = cp.symbol_index(r.top.name);
        cr.next = cp.state_index(r.next_state);
        cr.push_len = static_cast<int>(r.push.size());
        for (int i = 0; i < cr.push_len; ++i) cr.push[i] = cp.symbol_index(r.push[i].name);
        cp.rules.push_back(cr);
    }
    return cp;
}

// Top-first symbol indices, including the bottom symbol.
std::vector<int> intern_stack(const CompiledPda& cp, const Pda& pda, const Config& config) {
    require_config(pda, config);
    std::vector<int> out;
    out.reserve(config.stack.symbols.size());
    for (const auto& g : config.stack.symbols) out.push_back(cp.symbol_index(g.name));
    return out;
}

// transitions present[from][sym] -> bitmap over targets; automaton states are
// the control states 0..S-1 plus the accepting sink S.
struct SaturationResult {
    int n_aut;
    int acc;
    std::vector<std::vector<std::vector<char>>> present; // [from][sym][to]
    std::vector<std::vector<std::vector<int>>> outs;     // [from][sym] -> targets
};

SaturationResult saturate(const CompiledPda& cp, SaturationOrder order) {
    const int S = cp.n_states();
    const int n_sym = static_cast<int>(cp.symbols.size());
    SaturationResult res;
    res.n_aut = S + 1;
    res.acc = S;
    res.present.assign(res.n_aut, std::vector<std::vector<char>>(
                                      n_sym, std::vector<char>(res.n_aut, 0)));
    res.outs.assign(res.n_aut, std::vector<std::vector<int>>(n_sym));

    std::deque<std::tuple<int, int, int>> work;
    auto add = [&](int from, int sym, int to) {
        auto& bit = res.present[from][sym][to];
        if (bit) return;
        bit = 1;
        res.outs[from][sym].push_back(to);
        work.emplace_back(from, sym, to);
    };

    for (int f : cp.finals) add(f, cp.bottom, res.acc);
    for (const auto& r : cp.rules) {
        if (r.push_len == 0) add(r.state, r.top, r.next);
    }

    // rule indexes keyed by the transitions that can trigger them
    std::vector<std::vector<int>> one_by_next(S); // push_len==1, indexed by next state
    std::vector<std::vector<int>> two_by_next(S); // push_len==2, first hop
    std::vector<std::vector<int>> two_by_second(n_sym);
    for (int i = 0; i < static_cast<int>(cp.rules.size()); ++i) {
        const auto& r = cp.rules[i];
        if (r.push_len == 1) one_by_next[r.next].push_back(i);
        if (r.push_len == 2) {
            two_by_next[r.next].push_back(i);
            two_by_second[r.push[1]].push_back(i);
        }
    }

    while (!work.empty()) {
        auto [p, s, t] = order == SaturationOrder::Fifo
                             ? work.front()
                             : work.back();
        if (order == SaturationOrder::Fifo) work.pop_front();
        else work.pop_back();

        if (p < S) {
            for (int i : one_by_next[p]) {
                const auto& r = cp.rules[i];
                if (r.push[0] == s) add(r.state, r.top, t);
            }
            for (int i : two_by_next[p]) {
                const auto& r = cp.rules[i];
                if (r.push[0] != s) continue;
                // (p, s, t) is the first hop; complete with every second hop
                for (int t2 : res.outs[t][r.push[1]]) add(r.state, r.top, t2);
            }
        }
        for (int i : two_by_second[s]) {
            const auto& r = cp.rules[i];
            // (p, s, t) is the second hop; the first must already exist
            if (res.present[r.next][r.push[0]][p]) add(r.state, r.top, t);
        }
    }
    return res;
}

std::string acc_state_name(const Pda& pda) {
    std::string name = "acc";
    while (pda.has_state(name)) name += "'";
    return name;
}

PAutomaton to_pautomaton(const Pda& pda, const CompiledPda& cp, const SaturationResult& sat) {
    PAutomaton pa;
    const std::string acc = acc_state_name(pda);
    pa.states = cp.states;
    pa.states.push_back(acc);
    std::sort(pa.states.begin(), pa.states.end());
    pa.accepting = {acc};
    pa.control_states = cp.states;
    pa.alphabet = pda.stack_alphabet;
    std::sort(pa.alphabet.begin(), pa.alphabet.end());
    auto name_of = [&](int id) {
        return id == sat.acc ? acc : cp.states[static_cast<std::size_t>(id)];
    };
    for (int from = 0; from < sat.n_aut; ++from) {
        for (int sym = 0; sym < static_cast<int>(cp.symbols.size()); ++sym) {
            for (int to : sat.outs[from][sym]) {
                StackSymbol g = cp.symbols[sym] == "_" ? bottom_symbol()
                                                       : plain_symbol(cp.symbols[sym]);
                pa.transitions.push_back(PATransition{name_of(from), g, name_of(to)});
            }
        }
    }
    std::sort(pa.transitions.begin(), pa.transitions.end());
    return pa;
}

} // namespace

LevelSets level_sets(const Pda& pda, std::size_t n) {
    auto violations = validate(pda);
    if (!violations.empty()) throw InputError("invalid automaton: " + violations.front());
    LevelSets out;
    std::set<Config> current;
    for (const auto& c : final_configs(pda)) current.insert(c);
    out.levels.push_back(std::vector<Config>(current.begin(), current.end()));
    std::vector<Config> newly(current.begin(), current.end());
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<Config> next_new;
        for (const auto& c : newly) {
            for (const auto& [a, p] : predecessors(pda, c)) {
                if (current.insert(p).second) next_new.push_back(p);
            }
        }
        out.levels.push_back(std::vector<Config>(current.begin(), current.end()));
        newly = std::move(next_new);
    }
    return out;
}

PAutomaton final_config_automaton(const Pda& pda) {
    CompiledPda cp = compile(pda);
    SaturationResult base;
    const int S = cp.n_states();
    base.n_aut = S + 1;
    base.acc = S;
    base.present.assign(base.n_aut, std::vector<std::vector<char>>(
                                        cp.symbols.size(), std::vector<char>(base.n_aut, 0)));
    base.outs.assign(base.n_aut, std::vector<std::vector<int>>(cp.symbols.size()));
    for (int f : cp.finals) {
        base.present[f][cp.bottom][base.acc] = 1;
        base.outs[f][cp.bottom].push_back(base.acc);
    }
    return to_pautomaton(pda, cp, base);
}

PAutomaton prestar(const Pda& pda, SaturationOrder order) {
    CompiledPda cp = compile(pda);
    return to_pautomaton(pda, cp, saturate(cp, order));
}

bool accepts(const PAutomaton& pa, const Config& config) {
    auto state_known = [&](const std::string& s) {
        return std::binary_search(pa.control_states.begin(), pa.control_states.end(), s);
    };
    if (!state_known(config.state))
        throw InputError("config " + to_text(config) + ": state not in the automaton");
    if (!config.stack.well_formed())
        throw InputError("config " + to_text(config) + ": malformed stack word");
    for (const auto& g : config.stack.symbols) {
        if (!std::binary_search(pa.alphabet.begin(), pa.alphabet.end(), g))
            throw InputError("config " + to_text(config) + ": symbol '" + g.name +
                             "' not in the automaton alphabet");
    }

    std::map<std::string, int> idx;
    for (std::size_t i = 0; i < pa.states.size(); ++i) idx[pa.states[i]] = static_cast<int>(i);
    std::vector<char> cur(pa.states.size(), 0);
    cur[static_cast<std::size_t>(idx.at(config.state))] = 1;
    for (const auto& g : config.stack.symbols) {
        std::vector<char> next(pa.states.size(), 0);
        for (const auto& t : pa.transitions) {
            if (t.symbol != g) continue;
            if (cur[static_cast<std::size_t>(idx.at(t.from))])
                next[static_cast<std::size_t>(idx.at(t.to))] = 1;
        }
        cur = std::move(next);
    }
    for (const auto& a : pa.accepting) {
        if (cur[static_cast<std::size_t>(idx.at(a))]) return true;
    }
    return false;
}

std::string encode_pautomaton(const PAutomaton& pa) {
    json j;
    j["states"] = pa.states;
    json trans = json::array();
    for (const auto& t : pa.transitions) {
        trans.push_back(json{{"from", t.from}, {"symbol", t.symbol.name}, {"to", t.to}});
    }
    j["transitions"] = trans;
    j["accepting"] = pa.accepting;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Level-set engine: layers of a membership automaton, one per W_i.
// Node 0 is the accepting sink; entry(i, q) accepts exactly the stacks sigma
// with (q, sigma) in W_i. Layer i+1 copies layer i (W_i subset of W_{i+1})
// and adds the one-step predecessor transitions.
// ---------------------------------------------------------------------------

struct LevelRankEngine::Impl {
    Pda pda;
    CompiledPda cp;
    SaturationResult wstar; // unweighted pre*, for the infinity pre-check
    std::vector<std::vector<std::vector<int>>> trans; // [node][sym] -> sorted targets
    int layers = 0;

    explicit Impl(const Pda& p) : pda(p), cp(compile(p)), wstar(saturate(cp, SaturationOrder::Fifo)) {
        trans.emplace_back(cp.symbols.size()); // node 0 = acc, no out-transitions
        add_layer();                           // W_0
    }

    int entry(int layer, int state) const { return 1 + layer * cp.n_states() + state; }

    void add_layer() {
        const int L = layers;
        const int S = cp.n_states();
        for (int q = 0; q < S; ++q) {
            trans.emplace_back(cp.symbols.size());
            const int node = entry(L, q);
            if (L == 0) {
                if (std::binary_search(cp.finals.begin(), cp.finals.end(), q))
                    trans[node][cp.bottom].push_back(0);
                continue;
            }
            trans[node] = trans[entry(L - 1, q)];
            for (const auto& r : cp.rules) {
                if (r.state != q) continue;
                auto& row = trans[node][r.top];
                if (r.push_len == 0) {
                    row.push_back(entry(L - 1, r.next));
                } else if (r.push_len == 1) {
                    const auto& t1 = trans[entry(L - 1, r.next)][r.push[0]];
                    row.insert(row.end(), t1.begin(), t1.end());
                } else {
                    for (int m : trans[entry(L - 1, r.next)][r.push[0]]) {
                        const auto& t2 = trans[m][r.push[1]];
                        row.insert(row.end(), t2.begin(), t2.end());
                    }
                }
            }
            for (auto& row : trans[node]) {
                std::sort(row.begin(), row.end());
                row.erase(std::unique(row.begin(), row.end()), row.end());
            }
        }
        ++layers;
    }

    bool in_prestar(int state, const std::vector<int>& stack) const {
        std::vector<char> cur(wstar.n_aut, 0);
        cur[static_cast<std::size_t>(state)] = 1;
        for (int sym : stack) {
            std::vector<char> next(wstar.n_aut, 0);
            for (int from = 0; from < wstar.n_aut; ++from) {
                if (!cur[static_cast<std::size_t>(from)]) continue;
                for (int to : wstar.outs[from][sym]) next[static_cast<std::size_t>(to)] = 1;
            }
            cur = std::move(next);
        }
        return cur[static_cast<std::size_t>(wstar.acc)] != 0;
    }

    // Least built layer whose entry accepts the stack, or -1.
    int least_layer(int state, const std::vector<int>& stack) const {
        const int inf = std::numeric_limits<int>::max();
        std::vector<int> best(trans.size(), inf);
        for (int i = 0; i < layers; ++i) best[entry(i, state)] = i;
        for (int sym : stack) {
            std::vector<int> next(trans.size(), inf);
            for (std::size_t node = 0; node < trans.size(); ++node) {
                if (best[node] == inf) continue;
                for (int t : trans[node][sym]) {
                    next[static_cast<std::size_t>(t)] =
                        std::min(next[static_cast<std::size_t>(t)], best[node]);
                }
            }
            best = std::move(next);
        }
        return best[0] == inf ? -1 : best[0];
    }
};

LevelRankEngine::LevelRankEngine(const Pda& pda) : impl_(std::make_unique<Impl>(pda)) {}
LevelRankEngine::~LevelRankEngine() = default;
LevelRankEngine::LevelRankEngine(LevelRankEngine&&) noexcept = default;
LevelRankEngine& LevelRankEngine::operator=(LevelRankEngine&&) noexcept = default;

Rank LevelRankEngine::rank(const Config& config) {
    const int state = impl_->cp.state_index(config.state);
    std::vector<int> stack = intern_stack(impl_->cp, impl_->pda, config);
    if (!impl_->in_prestar(state, stack)) return Rank::infinite();
    while (true) {
        int level = impl_->least_layer(state, stack);
        if (level >= 0) return Rank::finite(static_cast<std::uint64_t>(level));
        impl_->add_layer();
    }
}

// ---------------------------------------------------------------------------
// Weighted saturation engine: transition weights count PDA steps; the rank
// is the minimum weight of an accepting run.
// ---------------------------------------------------------------------------

struct SaturationRankEngine::Impl {
    Pda pda;
    CompiledPda cp;
    int n_aut;
    int acc;
    static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max() / 4;
    std::vector<std::vector<std::vector<std::uint64_t>>> w; // [from][sym][to]

    explicit Impl(const Pda& p) : pda(p), cp(compile(p)) {
        const int S = cp.n_states();
        n_aut = S + 1;
        acc = S;
        w.assign(n_aut, std::vector<std::vector<std::uint64_t>>(
                            cp.symbols.size(), std::vector<std::uint64_t>(n_aut, kInf)));
        for (int f : cp.finals) w[f][cp.bottom][acc] = 0;

        bool changed = true;
        while (changed) {
            changed = false;
            auto relax = [&](int from, int sym, int to, std::uint64_t cand) {
                if (cand < w[from][sym][to]) {
                    w[from][sym][to] = cand;
                    changed = true;
                }
            };
            for (const auto& r : cp.rules) {
                if (r.push_len == 0) {
                    relax(r.state, r.top, r.next, 1);
                } else if (r.push_len == 1) {
                    for (int t = 0; t < n_aut; ++t) {
                        std::uint64_t w1 = w[r.next][r.push[0]][t];
                        if (w1 < kInf) relax(r.state, r.top, t, 1 + w1);
                    }
                } else {
                    for (int m = 0; m < n_aut; ++m) {
                        std::uint64_t w1 = w[r.next][r.push[0]][m];
                        if (w1 >= kInf) continue;
                        for (int t = 0; t < n_aut; ++t) {
                            std::uint64_t w2 = w[m][r.push[1]][t];
                            if (w2 < kInf) relax(r.state, r.top, t, 1 + w1 + w2);
                        }
                    }
                }
            }
        }
    }

    Rank rank(const Config& config) const {
        const int state = cp.state_index(config.state);
        std::vector<int> stack = intern_stack(cp, pda, config);
        std::vector<std::uint64_t> best(n_aut, kInf);
        best[static_cast<std::size_t>(state)] = 0;
        for (int sym : stack) {
            std::vector<std::uint64_t> next(n_aut, kInf);
            for (int from = 0; from < n_aut; ++from) {
                if (best[static_cast<std::size_t>(from)] >= kInf) continue;
                for (int to = 0; to < n_aut; ++to) {
                    std::uint64_t wt = w[from][sym][to];
                    if (wt >= kInf) continue;
                    std::uint64_t cand = best[static_cast<std::size_t>(from)] + wt;
                    if (cand < next[static_cast<std::size_t>(to)])
                        next[static_cast<std::size_t>(to)] = cand;
                }
            }
            best = std::move(next);
        }
        std::uint64_t v = best[static_cast<std::size_t>(acc)];
        return v >= kInf ? Rank::infinite() : Rank::finite(v);
    }
};

SaturationRankEngine::SaturationRankEngine(const Pda& pda)
    : impl_(std::make_unique<Impl>(pda)) {}
SaturationRankEngine::~SaturationRankEngine() = default;
SaturationRankEngine::SaturationRankEngine(SaturationRankEngine&&) noexcept = default;
SaturationRankEngine& SaturationRankEngine::operator=(SaturationRankEngine&&) noexcept = default;

Rank SaturationRankEngine::rank(const Config& config) const { return impl_->rank(config); }

Rank rank_of(const Pda& pda, const Config& config) {
    LevelRankEngine engine(pda);
    return engine.rank(config);
}

Rank rank_via_saturation(const Pda& pda, const Config& config) {
    SaturationRankEngine engine(pda);
    return engine.rank(config);
}

RankProvider::RankProvider(const Pda& pda) : engine_(pda) {}

Rank RankProvider::operator()(const Config& config) {
    std::string key = to_text(config);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Rank r = engine_.rank(config);
    memo_.emplace(std::move(key), r);
    return r;
}

MarkedFragment mark_fragment(const Pda& pda, const Fragment& fragment) {
    RankProvider ranks(pda);
    return mark_fragment(pda, fragment, ranks);
}

MarkedFragment mark_fragment(const Pda&, const Fragment& fragment, RankProvider& ranks) {
    MarkedFragment out;
    out.vertices = fragment.vertices;
    out.frontier = fragment.frontier;
    out.roots = fragment.roots;
    out.bounds = fragment.bounds;
    out.pda_name = fragment.pda_name;
    for (const auto& e : fragment.edges) {
        bool marked = ranks(e.to) < ranks(e.from);
        out.edges.push_back(MarkedEdge{e.from, e.label, e.to, marked});
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::string encode_rank_table(const RankTable& table) {
    json j = json::object();
    for (const auto& [config, rank] : table.entries) {
        if (rank.is_infinite()) j[to_text(config)] = "inf";
        else j[to_text(config)] = rank.value();
    }
    return j.dump(2) + "\n";
}

} // namespace pdmark
