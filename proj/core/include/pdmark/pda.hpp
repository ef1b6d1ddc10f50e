#ifndef PDMARK_PDA_HPP
#define PDMARK_PDA_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdmark/errors.hpp"

namespace pdmark {

using StateId = std::string;

/// An input letter. Names are free-form tokens without whitespace or ':'
/// (commas are allowed; the counter gadget spells its push letters
/// "push(3,1,2)" and friends).
struct Letter {
    std::string name;

    auto operator<=>(const Letter&) const = default;
};

/// A stack symbol. The bottom-of-stack symbol is canonically named "_".
struct StackSymbol {
    std::string name;
    bool is_bottom = false;

    auto operator<=>(const StackSymbol&) const = default;
};

inline StackSymbol bottom_symbol() { return StackSymbol{"_", true}; }
inline StackSymbol plain_symbol(std::string name) { return StackSymbol{std::move(name), false}; }

/// A well-formed stack content, stored top-first. The bottom symbol is
/// materialized as the last element and occurs nowhere else.
struct StackWord {
    std::vector<StackSymbol> symbols;

    /// Number of non-bottom symbols.
    std::size_t height() const { return symbols.empty() ? 0 : symbols.size() - 1; }
    bool well_formed() const;

    auto operator<=>(const StackWord&) const = default;
};

/// Builds a stack word from the non-bottom symbol names, top-first.
StackWord make_stack(const std::vector<std::string>& non_bottom_names);

/// A control state plus a stack word; the vertex type of all graphs here.
struct Config {
    StateId state;
    StackWord stack;

    auto operator<=>(const Config&) const = default;
};

/// One entry of the partial transition function: in `state` with `top` on
/// the stack, reading `input`, go to `next_state` replacing `top` by `push`
/// (at most two symbols, top-first).
struct TransitionRule {
    StateId state;
    StackSymbol top;
    Letter input;
    StateId next_state;
    std::vector<StackSymbol> push;

    auto operator<=>(const TransitionRule&) const = default;
};

/// A deterministic real-time pushdown automaton. Plain data; `validate`
/// reports invariant violations on arbitrary candidate tuples.
struct Pda {
    std::vector<StateId> states;
    std::vector<Letter> input_alphabet;
    std::vector<StackSymbol> stack_alphabet;
    StackSymbol bottom;
    StateId initial;
    std::vector<StateId> finals;
    std::vector<TransitionRule> rules;

    bool has_state(const StateId& s) const;
    bool has_letter(const Letter& a) const;
    bool has_symbol(const StackSymbol& g) const;
    bool is_final_state(const StateId& s) const;

    /// The rule keyed by (state, top, input), or nullptr when undefined.
    const TransitionRule* find_rule(const StateId& state, const StackSymbol& top,
                                    const Letter& input) const;

    auto operator<=>(const Pda&) const = default;
};

/// Checks every Pda and TransitionRule invariant. Returns human-readable
/// violation descriptors; an empty list means the automaton is valid.
std::vector<std::string> validate(const Pda& pda);

/// Throws InputError unless `config` is well-formed over `pda`.
void require_config(const Pda& pda, const Config& config);

/// One transition step. Empty when delta is undefined on the key.
std::optional<Config> step(const Pda& pda, const Config& config, const Letter& letter);

/// All outgoing edges of `config`, sorted by letter name.
std::vector<std::pair<Letter, Config>> successors(const Pda& pda, const Config& config);

/// All incoming edges of `config`, sorted by (letter, source config).
/// At most |rules| entries.
std::vector<std::pair<Letter, Config>> predecessors(const Pda& pda, const Config& config);

/// Final configurations are exactly {(q, bottom-only stack) | q final}.
bool is_final_config(const Pda& pda, const Config& config);
std::vector<Config> final_configs(const Pda& pda);

/// Builtin example automata: "example1" (the three-state copy/pop automaton)
/// and "example1-dead" (same plus an absorbing q_dead state so that
/// infinite-rank configurations exist). Unknown names raise LookupError.
Pda builtin_pda(const std::string& name);

/// Textual form of a configuration: `state:sym,sym,...,_` (stack top-first,
/// "_" is the bottom symbol).
std::string to_text(const Config& config);
Config parse_config(const std::string& text);

/// Canonical JSON for the automaton tuple.
std::string encode_pda(const Pda& pda);
Pda decode_pda(const std::string& text);

} // namespace pdmark

#endif
