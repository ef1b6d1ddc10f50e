#include "pdmark/pda.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pdmark {

using nlohmann::json;

bool StackWord::well_formed() const {
    if (symbols.empty() || !symbols.back().is_bottom) return false;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        if (symbols[i].is_bottom) return false;
    }
    return true;
}

StackWord make_stack(const std::vector<std::string>& non_bottom_names) {
    StackWord w;
    w.symbols.reserve(non_bottom_names.size() + 1);
    for (const auto& n : non_bottom_names) w.symbols.push_back(plain_symbol(n));
    w.symbols.push_back(bottom_symbol());
    return w;
}

bool Pda::has_state(const StateId& s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
}
bool Pda::has_letter(const Letter& a) const {
    return std::find(input_alphabet.begin(), input_alphabet.end(), a) != input_alphabet.end();
}
bool Pda::has_symbol(const StackSymbol& g) const {
    return std::find(stack_alphabet.begin(), stack_alphabet.end(), g) != stack_alphabet.end();
}
bool Pda::is_final_state(const StateId& s) const {
    return std::find(finals.begin(), finals.end(), s) != finals.end();
}

const TransitionRule* Pda::find_rule(const StateId& state, const StackSymbol& top,
                                     const Letter& input) const {
    for (const auto& r : rules) {
        if (r.state == state && r.top == top && r.input == input) return &r;
    }
    return nullptr;
}

namespace {

bool token_ok(const std::string& name, bool allow_comma) {
    if (name.empty()) return false;
    for (char c : name) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ':') return false;
        if (!allow_comma && c == ',') return false;
    }
    return true;
}

std::string rule_text(const TransitionRule& r) {
    std::ostringstream os;
    os << "(" << r.state << ", " << r.top.name << ", " << r.input.name << ") -> ("
       << r.next_state << ", [";
    for (std::size_t i = 0; i < r.push.size(); ++i) {
        if (i) os << ",";
        os << r.push[i].name;
    }
    os << "])";
    return os.str();
}

} // namespace

std::vector<std::string> validate(const Pda& pda) {
    std::vector<std::string> out;
    auto bad = [&out](const std::string& msg) { out.push_back(msg); };

    std::set<StateId> state_set(pda.states.begin(), pda.states.end());
    if (state_set.size() != pda.states.size()) bad("states: duplicate state names");
    for (const auto& s : pda.states) {
        if (!token_ok(s, true)) bad("states: invalid name '" + s + "'");
    }

    std::set<std::string> letter_names;
    for (const auto& a : pda.input_alphabet) {
        if (!token_ok(a.name, true)) bad("input_alphabet: invalid letter name '" + a.name + "'");
        if (!letter_names.insert(a.name).second)
            bad("input_alphabet: duplicate letter '" + a.name + "'");
    }

    std::size_t bottoms = 0;
    std::set<std::string> sym_names;
    for (const auto& g : pda.stack_alphabet) {
        if (!token_ok(g.name, false)) bad("stack_alphabet: invalid symbol name '" + g.name + "'");
        if (!sym_names.insert(g.name).second)
            bad("stack_alphabet: duplicate symbol '" + g.name + "'");
        if (g.is_bottom) {
            ++bottoms;
            if (g.name != "_") bad("stack_alphabet: bottom symbol must be named '_'");
        } else if (g.name == "_") {
            bad("stack_alphabet: '_' is reserved for the bottom symbol");
        }
    }
    if (bottoms != 1) bad("stack_alphabet: expected exactly one bottom symbol");
    if (!pda.bottom.is_bottom || !pda.has_symbol(pda.bottom))
        bad("bottom: not a declared bottom symbol");

    if (!pda.has_state(pda.initial)) bad("initial: undeclared state '" + pda.initial + "'");
    for (const auto& f : pda.finals) {
        if (!pda.has_state(f)) bad("finals: undeclared state '" + f + "'");
    }

    std::set<std::tuple<StateId, std::string, std::string>> keys;
    for (const auto& r : pda.rules) {
        if (!pda.has_state(r.state)) bad("rule " + rule_text(r) + ": undeclared state");
        if (!pda.has_state(r.next_state)) bad("rule " + rule_text(r) + ": undeclared next state");
        if (!pda.has_symbol(r.top)) bad("rule " + rule_text(r) + ": undeclared top symbol");
        if (!pda.has_letter(r.input)) bad("rule " + rule_text(r) + ": undeclared input letter");
        for (const auto& g : r.push) {
            if (!pda.has_symbol(g)) bad("rule " + rule_text(r) + ": undeclared push symbol");
        }
        if (r.push.size() > 2) bad("rule " + rule_text(r) + ": push word longer than 2");
        if (r.top.is_bottom) {
            // bottom cannot be removed: replacement is bottom or one symbol over it
            bool ok = (r.push.size() == 1 && r.push[0].is_bottom) ||
                      (r.push.size() == 2 && !r.push[0].is_bottom && r.push[1].is_bottom);
            if (!ok) bad("rule " + rule_text(r) + ": bottom removed or malformed replacement");
        } else {
            // bottom cannot be pushed
            for (const auto& g : r.push) {
                if (g.is_bottom) bad("rule " + rule_text(r) + ": bottom pushed");
            }
        }
        if (!keys.insert({r.state, r.top.name, r.input.name}).second)
            bad("rule " + rule_text(r) + ": duplicate key, determinism violated");
    }
    return out;
}

void require_config(const Pda& pda, const Config& config) {
    if (!pda.has_state(config.state))
        throw InputError("config " + to_text(config) + ": undeclared state '" + config.state + "'");
    if (!config.stack.well_formed())
        throw InputError("config " + to_text(config) + ": malformed stack word");
    for (const auto& g : config.stack.symbols) {
        if (!pda.has_symbol(g))
            throw InputError("config " + to_text(config) + ": undeclared stack symbol '" +
                             g.name + "'");
    }
}

std::optional<Config> step(const Pda& pda, const Config& config, const Letter& letter) {
    require_config(pda, config);
    const TransitionRule* r = pda.find_rule(config.state, config.stack.symbols.front(), letter);
    if (r == nullptr) return std::nullopt;
    Config next;
    next.state = r->next_state;
    next.stack.symbols = r->push;
    next.stack.symbols.insert(next.stack.symbols.end(), config.stack.symbols.begin() + 1,
                              config.stack.symbols.end());
    return next;
}

std::vector<std::pair<Letter, Config>> successors(const Pda& pda, const Config& config) {
    require_config(pda, config);
    std::vector<std::pair<Letter, Config>> out;
    std::vector<Letter> letters = pda.input_alphabet;
    std::sort(letters.begin(), letters.end());
    for (const auto& a : letters) {
        const TransitionRule* r = pda.find_rule(config.state, config.stack.symbols.front(), a);
        if (r == nullptr) continue;
        Config next;
        next.state = r->next_state;
        next.stack.symbols = r->push;
        next.stack.symbols.insert(next.stack.symbols.end(), config.stack.symbols.begin() + 1,
                                  config.stack.symbols.end());
        out.emplace_back(a, std::move(next));
    }
    return out;
}

std::vector<std::pair<Letter, Config>> predecessors(const Pda& pda, const Config& config) {
    require_config(pda, config);
    std::vector<std::pair<Letter, Config>> out;
    const auto& target = config.stack.symbols;
    for (const auto& r : pda.rules) {
        if (r.next_state != config.state) continue;
        if (r.push.size() > target.size()) continue;
        if (!std::equal(r.push.begin(), r.push.end(), target.begin())) continue;
        Config pred;
        pred.state = r.state;
        pred.stack.symbols.push_back(r.top);
        pred.stack.symbols.insert(pred.stack.symbols.end(), target.begin() + r.push.size(),
                                  target.end());
        if (!pred.stack.well_formed()) continue;
        out.emplace_back(r.input, std::move(pred));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool is_final_config(const Pda& pda, const Config& config) {
    return config.stack.symbols.size() == 1 && config.stack.symbols.front().is_bottom &&
           pda.is_final_state(config.state);
}

std::vector<Config> final_configs(const Pda& pda) {
    std::vector<Config> out;
    for (const auto& f : pda.finals) out.push_back(Config{f, make_stack({})});
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

Pda build_example1() {
    Pda p;
    p.states = {"q#", "q_fin", "q_in"};
    p.input_alphabet = {Letter{"#"}, Letter{"a"}, Letter{"b"}};
    p.stack_alphabet = {plain_symbol("a"), plain_symbol("b"), bottom_symbol()};
    p.bottom = bottom_symbol();
    p.initial = "q_in";
    p.finals = {"q_fin"};

    auto rule = [&p](StateId s, StackSymbol top, std::string in, StateId next,
                     std::vector<StackSymbol> push) {
        p.rules.push_back(TransitionRule{std::move(s), std::move(top), Letter{std::move(in)},
                                         std::move(next), std::move(push)});
    };
    const StackSymbol a = plain_symbol("a"), b = plain_symbol("b"), bot = bottom_symbol();

    // q_in copies a/b on top of the stack and switches to q# on '#'.
    for (const auto& g : {a, b, bot}) {
        rule("q_in", g, "a", "q_in", {a, g});
        rule("q_in", g, "b", "q_in", {b, g});
        rule("q_in", g, "#", "q#", {g});
    }
    // q# pops a matching letter, copies a mismatching one, ignores '#'.
    rule("q#", a, "a", "q#", {});
    rule("q#", b, "b", "q#", {});
    rule("q#", a, "b", "q#", {b, a});
    rule("q#", b, "a", "q#", {a, b});
    rule("q#", a, "#", "q#", {a});
    rule("q#", b, "#", "q#", {b});
    // emptied stack: move to q_fin and stay there forever
    for (const auto& x : {"a", "b", "#"}) {
        rule("q#", bot, x, "q_fin", {bot});
        rule("q_fin", bot, x, "q_fin", {bot});
    }
    return p;
}

Pda build_example1_dead() {
    Pda p = build_example1();
    p.states.push_back("q_dead");
    std::sort(p.states.begin(), p.states.end());
    p.input_alphabet.push_back(Letter{"d"});
    std::sort(p.input_alphabet.begin(), p.input_alphabet.end());
    const StackSymbol a = plain_symbol("a"), b = plain_symbol("b"), bot = bottom_symbol();
    for (const auto& g : {a, b, bot}) {
        p.rules.push_back(TransitionRule{"q_in", g, Letter{"d"}, "q_dead", {g}});
        p.rules.push_back(TransitionRule{"q_dead", g, Letter{"d"}, "q_dead", {g}});
    }
    return p;
}

} // namespace

Pda builtin_pda(const std::string& name) {
    if (name == "example1") return build_example1();
    if (name == "example1-dead") return build_example1_dead();
    throw LookupError("unknown builtin automaton '" + name + "'");
}

std::string to_text(const Config& config) {
    std::string out = config.state;
    out += ':';
    for (std::size_t i = 0; i < config.stack.symbols.size(); ++i) {
        if (i) out += ',';
        out += config.stack.symbols[i].name;
    }
    return out;
}

Config parse_config(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0)
        throw ParseError("config", "expected 'state:sym,...,_' in '" + text + "'");
    Config c;
    c.state = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    if (rest.empty()) throw ParseError("config", "empty stack in '" + text + "'");
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        auto comma = rest.find(',', pos);
        if (comma == std::string::npos) {
            parts.push_back(rest.substr(pos));
            break;
        }
        parts.push_back(rest.substr(pos, comma - pos));
        pos = comma + 1;
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& n = parts[i];
        if (n.empty()) throw ParseError("config", "empty stack symbol in '" + text + "'");
        if (n == "_") {
            if (i + 1 != parts.size())
                throw ParseError("config", "bottom symbol before end of stack in '" + text + "'");
            c.stack.symbols.push_back(bottom_symbol());
        } else {
            c.stack.symbols.push_back(plain_symbol(n));
        }
    }
    if (!c.stack.well_formed())
        throw ParseError("config", "stack must end in the bottom symbol '_' in '" + text + "'");
    return c;
}

std::string encode_pda(const Pda& pda) {
    json j;
    j["states"] = pda.states;
    json letters = json::array();
    for (const auto& a : pda.input_alphabet) letters.push_back(a.name);
    j["input_alphabet"] = letters;
    json syms = json::array();
    for (const auto& g : pda.stack_alphabet) syms.push_back(g.name);
    j["stack_alphabet"] = syms;
    j["initial"] = pda.initial;
    j["finals"] = pda.finals;
    json rules = json::array();
    for (const auto& r : pda.rules) {
        json jr;
        jr["state"] = r.state;
        jr["top"] = r.top.name;
        jr["input"] = r.input.name;
        jr["next"] = r.next_state;
        json push = json::array();
        for (const auto& g : r.push) push.push_back(g.name);
        jr["push"] = push;
        rules.push_back(jr);
    }
    j["rules"] = rules;
    return j.dump(2) + "\n";
}

namespace {

const json& field(const json& j, const std::string& path, const std::string& key,
                  json::value_t type) {
    if (!j.is_object()) throw ParseError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(path + "." + key, "missing field");
    if (it->type() != type &&
        !(type == json::value_t::number_unsigned && it->is_number_integer()))
        throw ParseError(path + "." + key, "unexpected type");
    return *it;
}

std::vector<std::string> string_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string())
            throw ParseError(path + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

} // namespace

Pda decode_pda(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("pda", std::string("invalid JSON: ") + e.what());
    }
    Pda p;
    p.states = string_array(field(j, "pda", "states", json::value_t::array), "states");
    for (auto& n : string_array(field(j, "pda", "input_alphabet", json::value_t::array),
                                "input_alphabet"))
        p.input_alphabet.push_back(Letter{n});
    auto syms = string_array(field(j, "pda", "stack_alphabet", json::value_t::array),
                             "stack_alphabet");
    bool saw_bottom = false;
    for (auto& n : syms) {
        if (n == "_") {
            p.stack_alphabet.push_back(bottom_symbol());
            saw_bottom = true;
        } else {
            p.stack_alphabet.push_back(plain_symbol(n));
        }
    }
    if (!saw_bottom) throw ParseError("stack_alphabet", "must include the bottom symbol '_'");
    p.bottom = bottom_symbol();
    p.initial = field(j, "pda", "initial", json::value_t::string).get<std::string>();
    p.finals = string_array(field(j, "pda", "finals", json::value_t::array), "finals");
    const json& rules = field(j, "pda", "rules", json::value_t::array);
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const std::string path = "rules[" + std::to_string(i) + "]";
        TransitionRule r;
        r.state = field(rules[i], path, "state", json::value_t::string).get<std::string>();
        std::string top = field(rules[i], path, "top", json::value_t::string).get<std::string>();
        r.top = (top == "_") ? bottom_symbol() : plain_symbol(top);
        r.input = Letter{field(rules[i], path, "input", json::value_t::string).get<std::string>()};
        r.next_state = field(rules[i], path, "next", json::value_t::string).get<std::string>();
        auto push = string_array(field(rules[i], path, "push", json::value_t::array),
                                 path + ".push");
        if (push.size() > 2) throw ParseError(path + ".push", "push word longer than 2");
        for (auto& n : push) r.push.push_back(n == "_" ? bottom_symbol() : plain_symbol(n));
        p.rules.push_back(std::move(r));
    }
    return p;
}

} // namespace pdmark
