#ifndef PDMARK_RANK_HPP
#define PDMARK_RANK_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdmark/fragment.hpp"
#include "pdmark/pda.hpp"

namespace pdmark {

/// A shortest-path rank: a non-negative integer or infinity. Infinity is a
/// distinguished state of this type, never a sentinel integer.
class Rank {
public:
    Rank() : finite_(false), value_(0) {}

    static Rank finite(std::uint64_t v) { return Rank(true, v); }
    static Rank infinite() { return Rank(false, 0); }

    bool is_infinite() const { return !finite_; }
    bool is_finite() const { return finite_; }

    /// Finite value; raises InputError on infinity.
    std::uint64_t value() const;

    std::string to_string() const; // "4" or "inf"

    friend bool operator==(const Rank& a, const Rank& b) {
        return a.finite_ == b.finite_ && a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const Rank& a, const Rank& b) {
        if (a.finite_ && b.finite_) return a.value_ <=> b.value_;
        if (a.finite_) return std::strong_ordering::less;    // finite < inf
        if (b.finite_) return std::strong_ordering::greater; // inf > finite
        return std::strong_ordering::equal;
    }

private:
    Rank(bool finite, std::uint64_t v) : finite_(finite), value_(v) {}
    bool finite_;
    std::uint64_t value_;
};

/// The backward-reachability level sets W_0 .. W_n: W_0 is the set of final
/// configurations and each W_{i+1} adds all one-step predecessors of W_i.
struct LevelSets {
    std::vector<std::vector<Config>> levels;
};

/// Exact level sets, materialized by predecessor closure. Each W_i is finite
/// since every configuration has at most |rules| predecessors. Beware that
/// |W_i| can grow exponentially in i.
LevelSets level_sets(const Pda& pda, std::size_t n);

struct PATransition {
    std::string from;
    StackSymbol symbol;
    std::string to;

    auto operator<=>(const PATransition&) const = default;
};

/// A finite automaton over stack symbols whose states include the control
/// states. A configuration (q, sigma) is accepted iff reading sigma
/// (top-first) from q reaches an accepting state.
struct PAutomaton {
    std::vector<std::string> states;
    std::vector<PATransition> transitions;
    std::vector<std::string> accepting;
    // context kept for input validation and queries
    std::vector<std::string> control_states;
    std::vector<StackSymbol> alphabet;

    auto operator<=>(const PAutomaton&) const = default;
};

/// The automaton accepting exactly the final configurations (the
/// pre-saturation starting point).
PAutomaton final_config_automaton(const Pda& pda);

/// Worklist discipline for the saturation loop. The resulting automaton is
/// the same for every order; tests assert this.
enum class SaturationOrder { Fifo, Lifo };

/// Saturates the final-configuration automaton with the standard backward
/// rules; the result accepts exactly the configurations of finite rank.
PAutomaton prestar(const Pda& pda, SaturationOrder order = SaturationOrder::Fifo);

/// Membership query on a (saturated) automaton. Configurations over a wrong
/// alphabet raise InputError.
bool accepts(const PAutomaton& pa, const Config& config);

std::string encode_pautomaton(const PAutomaton& pa);

/// Rank engine that extends the level sets W_0, W_1, ... until the queried
/// configuration appears. The sets are represented exactly as layers of a
/// growing membership automaton, so queries stay polynomial even when the
/// materialized sets would be astronomically large; agreement with the
/// explicit level_sets() is asserted in tests. Growth is memoized across
/// queries; infinite rank is detected up front via prestar.
class LevelRankEngine {
public:
    explicit LevelRankEngine(const Pda& pda);
    ~LevelRankEngine();
    LevelRankEngine(LevelRankEngine&&) noexcept;
    LevelRankEngine& operator=(LevelRankEngine&&) noexcept;

    Rank rank(const Config& config);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Independent second engine: min-plus weighted saturation. Transitions of
/// the saturation automaton carry step counts; the rank of a configuration
/// is the minimum weight of an accepting run.
class SaturationRankEngine {
public:
    explicit SaturationRankEngine(const Pda& pda);
    ~SaturationRankEngine();
    SaturationRankEngine(SaturationRankEngine&&) noexcept;
    SaturationRankEngine& operator=(SaturationRankEngine&&) noexcept;

    Rank rank(const Config& config) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// rank(config): the least i with config in W_i, or infinity.
Rank rank_of(const Pda& pda, const Config& config);

/// Same value, computed through the weighted saturation engine.
Rank rank_via_saturation(const Pda& pda, const Config& config);

/// Memoizing rank source for bulk work (marking whole fragments, zero-test
/// sweeps). Backed by the saturation engine; the two engines are asserted
/// equal in the test suite.
class RankProvider {
public:
    explicit RankProvider(const Pda& pda);

    Rank operator()(const Config& config);

private:
    SaturationRankEngine engine_;
    std::unordered_map<std::string, Rank> memo_;
};

/// The canonical marking: every edge of the fragment is kept, marked iff the
/// global ranks strictly decrease across it (which is necessarily by exactly
/// one). Ranks come from the full graph, never fragment-relative distances.
MarkedFragment mark_fragment(const Pda& pda, const Fragment& fragment);
MarkedFragment mark_fragment(const Pda& pda, const Fragment& fragment, RankProvider& ranks);

struct RankTable {
    std::vector<std::pair<Config, Rank>> entries;
};

/// JSON object mapping config text to an integer or "inf".
std::string encode_rank_table(const RankTable& table);

} // namespace pdmark

#endif
