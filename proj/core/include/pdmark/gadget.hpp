#ifndef PDMARK_GADGET_HPP
#define PDMARK_GADGET_HPP

#include <cstdint>
#include <string>

#include "pdmark/fragment.hpp"
#include "pdmark/rank.hpp"

namespace pdmark {

/// A stack symbol of the counter gadget: a triple with c1, c2 in {1,2,3} and
/// c3 fixed to 2. Symbol names concatenate the digits, e.g. "312".
struct GadgetSymbol {
    int c1 = 2;
    int c2 = 2;
    int c3 = 2;

    auto operator<=>(const GadgetSymbol&) const = default;
};

/// Componentwise sums over the non-bottom stack symbols.
struct Triple {
    long long k1 = 0;
    long long k2 = 0;
    long long k3 = 0;

    auto operator<=>(const Triple&) const = default;
};

/// The encoded counter pair (k1 - k3, k2 - k3); values range over all of Z.
struct CounterPair {
    long long c1 = 0;
    long long c2 = 0;

    auto operator<=>(const CounterPair&) const = default;
};

std::string gadget_symbol_name(const GadgetSymbol& s);
GadgetSymbol parse_gadget_symbol(const StackSymbol& symbol); // InputError on non-gadget names

/// The push-mode / pop-mode counter automaton. Input letters: one
/// push(c1,c2,c3) per stack symbol, the mode switches sw1 sw2 sw3, and the
/// pop-mode tick t. In push mode any symbol can be pushed (also on the bare
/// bottom) and any switch taken; in pop mode p_i the i-th component of the
/// top symbol dictates how many ticks it costs to pop it, so emptying the
/// stack from p_i costs exactly k_i ticks, plus one tick from the exposed
/// bottom into the final state. States: q_push, p1w0 .. p3w2, q_fin.
Pda build_gadget();

Triple triple_of(const Config& config);
CounterPair counters_of(const Config& config);

/// The input letter that shifts counter 1 by iota1 and counter 2 by iota2
/// (each in {-1, 0, +1}): push(2+iota1, 2+iota2, 2).
Letter push_letter(int iota1, int iota2);

/// Zero test against the canonical marking: ascends by counter-neutral
/// pushes that raise the uncompared component until the marked switch edges
/// reveal whether k_which equals k3. Marks are consulted as rank decreases;
/// the triple is used only to bound the ascent.
bool zero_test_canonical(const Pda& pda, const Config& config, int which);
bool zero_test_canonical(const Pda& pda, const Config& config, int which, RankProvider& ranks);

/// The finite fragment a robust zero test inspects: the ascent chain from
/// `config` (pairs of identical pushes), both probe pushes at the fully
/// ascended configuration, and the complete out-neighborhood of each, so
/// every consulted vertex is non-frontier. Raises ResourceError when the
/// region would exceed `height_ceiling` non-bottom symbols.
Fragment zero_test_region(const Pda& pda, const Config& config, int which,
                          std::size_t height_ceiling);

/// Zero test that works under ANY well-formed marking, not just the
/// canonical one. Requires an even configuration (all triple components
/// even); ascends by pairs of pushes, then decides from the marked switch
/// edges, using a single probe push to separate the one-sided cases.
/// The result is read off the marking only; the triple bounds the ascent.
bool zero_test_robust(const Pda& pda, const MarkedFragment& marking, const Config& config,
                      int which);

/// Ground truth by arithmetic: k_which == k3.
bool zero_oracle(const Config& config, int which);

} // namespace pdmark

#endif
