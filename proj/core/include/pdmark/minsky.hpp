#ifndef PDMARK_MINSKY_HPP
#define PDMARK_MINSKY_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pdmark/pda.hpp"

namespace pdmark {

using MachineStateId = std::string;

struct Inc {
    int counter = 1; // 1 or 2
    MachineStateId next;
    auto operator<=>(const Inc&) const = default;
};
struct Dec {
    int counter = 1;
    MachineStateId next;
    auto operator<=>(const Dec&) const = default;
};
struct IfZero {
    int counter = 1;
    MachineStateId then_state;
    MachineStateId else_state;
    auto operator<=>(const IfZero&) const = default;
};
struct Halt {
    auto operator<=>(const Halt&) const = default;
};

using Instruction = std::variant<Inc, Dec, IfZero, Halt>;

/// A 2-counter machine with tests for 0. Counters range over all of Z
/// (decrements are always permitted); zero tests compare with 0 exactly.
struct CounterMachine {
    std::vector<MachineStateId> states;
    MachineStateId initial;
    std::map<MachineStateId, Instruction> program;

    auto operator<=>(const CounterMachine&) const = default;
};

/// Raises InputError when states/program/initial are inconsistent.
void require_machine(const CounterMachine& machine);

struct TraceEntry {
    MachineStateId state;
    long long c1 = 0;
    long long c2 = 0;

    auto operator<=>(const TraceEntry&) const = default;
};

struct RunVerdict {
    enum class Outcome { Halted, StillRunning };
    Outcome outcome = Outcome::StillRunning;
    std::uint64_t steps = 0; // executed instructions when halted
    std::uint64_t fuel = 0;  // the fuel that ran out when still running
    std::vector<TraceEntry> trace; // (state, counters) at every instruction boundary
};

/// Verdict equality ignoring the trace.
bool same_verdict(const RunVerdict& a, const RunVerdict& b);

/// Direct simulation from (initial, (0,0)). A Halt instruction terminates
/// the run without being counted; otherwise `fuel` instructions execute and
/// the machine is still running.
RunVerdict run_direct(const CounterMachine& machine, std::uint64_t fuel);

struct MarkingMode {
    enum class Kind { Canonical, Sampled };
    Kind kind = Kind::Canonical;
    std::uint64_t seed = 0;

    static MarkingMode canonical() { return MarkingMode{Kind::Canonical, 0}; }
    static MarkingMode sampled(std::uint64_t seed) { return MarkingMode{Kind::Sampled, seed}; }
};

/// Default stack-height ceiling for zero-test region growth.
constexpr std::size_t kDefaultHeightCeiling = 64;

/// Simulation through the counter gadget: counter updates execute two
/// identical pushes (so configurations at instruction boundaries stay even,
/// encoding each counter as half the raw difference), and every IfZero is
/// answered by the marking — the canonical one directly, or a fresh seeded
/// well-formed sample over a region grown on demand. Region growth past
/// `height_ceiling` raises ResourceError.
RunVerdict run_via_marking(const CounterMachine& machine, const Pda& pda, const MarkingMode& mode,
                           std::uint64_t fuel, std::size_t height_ceiling = kDefaultHeightCeiling);

struct CompareEntry {
    MarkingMode mode;
    RunVerdict verdict;
};

struct CompareReport {
    RunVerdict direct;
    std::vector<CompareEntry> via;
    bool agree = false;
};

/// Runs the machine directly, then through the canonical marking and one
/// sampled marking per seed, and reports whether all verdicts agree.
CompareReport compare(const CounterMachine& machine, std::uint64_t fuel,
                      const std::vector<std::uint64_t>& seeds,
                      std::size_t height_ceiling = kDefaultHeightCeiling);

std::string encode_machine(const CounterMachine& machine);
CounterMachine decode_machine(const std::string& text);
std::string encode_run_verdict(const RunVerdict& verdict, bool with_trace = false);
std::string encode_report(const CompareReport& report);

} // namespace pdmark

#endif
