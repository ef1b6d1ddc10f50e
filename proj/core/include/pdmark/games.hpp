#ifndef PDMARK_GAMES_HPP
#define PDMARK_GAMES_HPP

#include <map>
#include <string>
#include <vector>

#include "pdmark/fragment.hpp"
#include "pdmark/pda.hpp"

namespace pdmark {

enum class Player { Eve, Adam };

/// A reachability game on a finite fragment: control states are partitioned
/// between Eve and Adam, Eve tries to reach a target configuration.
struct GameFragment {
    Fragment fragment;
    std::map<StateId, Player> owner;
    std::vector<Config> targets; // default: final configurations in the fragment
};

struct AttractorResult {
    std::vector<Config> winning;
    std::map<Config, std::size_t> levels;
    std::map<Config, Edge> strategy; // Eve's positional choices, level >= 1 only
};

/// Backward fixpoint on the fragment. Targets enter at level 0; a
/// non-frontier Eve vertex enters at level k+1 when some successor is in by
/// level k, a non-frontier Adam vertex when all of its successors are (and
/// it has at least one). Frontier non-targets and dead ends never enter, so
/// the fragment answer under-approximates the infinite game soundly. The
/// strategy picks a minimal-level successor, ties broken lexicographically.
AttractorResult attractor(const GameFragment& game);

/// Game JSON is the fragment payload plus {"owner": {state: "eve"|"adam"},
/// "targets": [config, ...]}. Omitted targets default to the final
/// configurations of `pda` present in the fragment.
GameFragment decode_game(const std::string& text, const Pda& pda);

std::string encode_attractor(const AttractorResult& result);

} // namespace pdmark

#endif
