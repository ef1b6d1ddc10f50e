#include "pdmark/minsky.hpp"

#include <algorithm>

#include <json.hpp>

#include "pdmark/gadget.hpp"
#include "pdmark/marking.hpp"

namespace pdmark {

using nlohmann::json;

void require_machine(const CounterMachine& machine) {
    auto known = [&machine](const MachineStateId& s) {
        return std::find(machine.states.begin(), machine.states.end(), s) != machine.states.end();
    };
    if (!known(machine.initial))
        throw InputError("machine: initial state '" + machine.initial + "' not declared");
    for (const auto& [state, inst] : machine.program) {
        if (!known(state)) throw InputError("machine: program state '" + state + "' not declared");
        auto check_counter = [&state](int c) {
            if (c != 1 && c != 2)
                throw InputError("machine: state '" + state + "' uses counter " +
                                 std::to_string(c));
        };
        auto check_target = [&known, &state](const MachineStateId& t) {
            if (!known(t))
                throw InputError("machine: state '" + state + "' references undeclared state '" +
                                 t + "'");
        };
        if (const auto* i = std::get_if<Inc>(&inst)) {
            check_counter(i->counter);
            check_target(i->next);
        } else if (const auto* d = std::get_if<Dec>(&inst)) {
            check_counter(d->counter);
            check_target(d->next);
        } else if (const auto* z = std::get_if<IfZero>(&inst)) {
            check_counter(z->counter);
            check_target(z->then_state);
            check_target(z->else_state);
        }
    }
    for (const auto& s : machine.states) {
        if (!machine.program.count(s))
            throw InputError("machine: state '" + s + "' has no instruction");
    }
}

bool same_verdict(const RunVerdict& a, const RunVerdict& b) {
    if (a.outcome != b.outcome) return false;
    if (a.outcome == RunVerdict::Outcome::Halted) return a.steps == b.steps;
    return true;
}

RunVerdict run_direct(const CounterMachine& machine, std::uint64_t fuel) {
    if (fuel == 0) throw InputError("fuel must be positive");
    require_machine(machine);
    RunVerdict v;
    MachineStateId state = machine.initial;
    long long c1 = 0, c2 = 0;
    v.trace.push_back(TraceEntry{state, c1, c2});
    std::uint64_t steps = 0;
    while (true) {
        const Instruction& inst = machine.program.at(state);
        if (std::holds_alternative<Halt>(inst)) {
            v.outcome = RunVerdict::Outcome::Halted;
            v.steps = steps;
            v.fuel = fuel;
            return v;
        }
        if (steps == fuel) {
            v.outcome = RunVerdict::Outcome::StillRunning;
            v.fuel = fuel;
            v.steps = steps;
            return v;
        }
        if (const auto* i = std::get_if<Inc>(&inst)) {
            (i->counter == 1 ? c1 : c2) += 1;
            state = i->next;
        } else if (const auto* d = std::get_if<Dec>(&inst)) {
            (d->counter == 1 ? c1 : c2) -= 1;
            state = d->next;
        } else {
            const auto& z = std::get<IfZero>(inst);
            long long value = z.counter == 1 ? c1 : c2;
            state = value == 0 ? z.then_state : z.else_state;
        }
        ++steps;
        v.trace.push_back(TraceEntry{state, c1, c2});
    }
}

RunVerdict run_via_marking(const CounterMachine& machine, const Pda& pda, const MarkingMode& mode,
                           std::uint64_t fuel, std::size_t height_ceiling) {
    if (fuel == 0) throw InputError("fuel must be positive");
    require_machine(machine);
    RunVerdict v;
    MachineStateId state = machine.initial;
    Config config{"q_push", make_stack({})};
    RankProvider ranks(pda);

    auto machine_counters = [&config]() {
        CounterPair raw = counters_of(config);
        // the doubled-push discipline keeps raw counters at twice the
        // machine's values
        return std::pair<long long, long long>{raw.c1 / 2, raw.c2 / 2};
    };
    auto trace_entry = [&]() {
        auto [c1, c2] = machine_counters();
        v.trace.push_back(TraceEntry{state, c1, c2});
    };
    trace_entry();

    auto do_push = [&](int counter, int delta) {
        Letter letter = counter == 1 ? push_letter(delta, 0) : push_letter(0, delta);
        for (int rep = 0; rep < 2; ++rep) {
            auto next = step(pda, config, letter);
            if (!next) throw InputError("push letter undefined at " + to_text(config));
            config = *next;
        }
    };
    auto test_zero = [&](int counter) {
        if (mode.kind == MarkingMode::Kind::Canonical)
            return zero_test_canonical(pda, config, counter, ranks);
        Fragment region = zero_test_region(pda, config, counter, height_ceiling);
        MarkedFragment marking = sample_well_formed(pda, region, mode.seed, ranks);
        return zero_test_robust(pda, marking, config, counter);
    };

    std::uint64_t steps = 0;
    while (true) {
        const Instruction& inst = machine.program.at(state);
        if (std::holds_alternative<Halt>(inst)) {
            v.outcome = RunVerdict::Outcome::Halted;
            v.steps = steps;
            v.fuel = fuel;
            return v;
        }
        if (steps == fuel) {
            v.outcome = RunVerdict::Outcome::StillRunning;
            v.fuel = fuel;
            v.steps = steps;
            return v;
        }
        if (const auto* i = std::get_if<Inc>(&inst)) {
            do_push(i->counter, +1);
            state = i->next;
        } else if (const auto* d = std::get_if<Dec>(&inst)) {
            do_push(d->counter, -1);
            state = d->next;
        } else {
            const auto& z = std::get<IfZero>(inst);
            state = test_zero(z.counter) ? z.then_state : z.else_state;
        }
        ++steps;
        trace_entry();
    }
}

CompareReport compare(const CounterMachine& machine, std::uint64_t fuel,
                      const std::vector<std::uint64_t>& seeds, std::size_t height_ceiling) {
    CompareReport report;
    report.direct = run_direct(machine, fuel);
    Pda gadget = build_gadget();
    report.via.push_back(CompareEntry{
        MarkingMode::canonical(),
        run_via_marking(machine, gadget, MarkingMode::canonical(), fuel, height_ceiling)});
    for (std::uint64_t seed : seeds) {
        report.via.push_back(CompareEntry{
            MarkingMode::sampled(seed),
            run_via_marking(machine, gadget, MarkingMode::sampled(seed), fuel, height_ceiling)});
    }
    report.agree = true;
    for (const auto& entry : report.via) {
        if (!same_verdict(report.direct, entry.verdict)) report.agree = false;
    }
    return report;
}

std::string encode_machine(const CounterMachine& machine) {
    json j;
    std::vector<std::string> states = machine.states;
    std::sort(states.begin(), states.end());
    j["states"] = states;
    j["initial"] = machine.initial;
    json program = json::object();
    for (const auto& [state, inst] : machine.program) {
        json ji;
        if (const auto* i = std::get_if<Inc>(&inst)) {
            ji["op"] = "inc";
            ji["counter"] = i->counter;
            ji["next"] = i->next;
        } else if (const auto* d = std::get_if<Dec>(&inst)) {
            ji["op"] = "dec";
            ji["counter"] = d->counter;
            ji["next"] = d->next;
        } else if (const auto* z = std::get_if<IfZero>(&inst)) {
            ji["op"] = "ifzero";
            ji["counter"] = z->counter;
            ji["then"] = z->then_state;
            ji["else"] = z->else_state;
        } else {
            ji["op"] = "halt";
        }
        program[state] = ji;
    }
    j["program"] = program;
    return j.dump(2) + "\n";
}

CounterMachine decode_machine(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("machine", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("machine", "expected an object");
    CounterMachine m;
    if (!j.contains("states") || !j["states"].is_array())
        throw ParseError("states", "missing or not an array");
    for (std::size_t i = 0; i < j["states"].size(); ++i) {
        if (!j["states"][i].is_string())
            throw ParseError("states[" + std::to_string(i) + "]", "expected a string");
        m.states.push_back(j["states"][i].get<std::string>());
    }
    if (!j.contains("initial") || !j["initial"].is_string())
        throw ParseError("initial", "missing or not a string");
    m.initial = j["initial"].get<std::string>();
    if (!j.contains("program") || !j["program"].is_object())
        throw ParseError("program", "missing or not an object");
    for (auto it = j["program"].begin(); it != j["program"].end(); ++it) {
        const std::string path = "program." + it.key();
        const json& ji = it.value();
        if (!ji.is_object() || !ji.contains("op") || !ji["op"].is_string())
            throw ParseError(path, "expected an object with an 'op' field");
        const std::string op = ji["op"].get<std::string>();
        auto get_counter = [&]() {
            if (!ji.contains("counter") || !ji["counter"].is_number_integer())
                throw ParseError(path + ".counter", "expected 1 or 2");
            return ji["counter"].get<int>();
        };
        auto get_state = [&](const char* key) {
            if (!ji.contains(key) || !ji[key].is_string())
                throw ParseError(path + "." + key, "expected a state name");
            return ji[key].get<std::string>();
        };
        if (op == "inc") m.program[it.key()] = Inc{get_counter(), get_state("next")};
        else if (op == "dec") m.program[it.key()] = Dec{get_counter(), get_state("next")};
        else if (op == "ifzero")
            m.program[it.key()] = IfZero{get_counter(), get_state("then"), get_state("else")};
        else if (op == "halt") m.program[it.key()] = Halt{};
        else throw ParseError(path + ".op", "unknown op '" + op + "'");
    }
    return m;
}

namespace {

json verdict_json(const RunVerdict& verdict, bool with_trace) {
    json j;
    if (verdict.outcome == RunVerdict::Outcome::Halted) {
        j["outcome"] = "halted";
        j["steps"] = verdict.steps;
    } else {
        j["outcome"] = "still-running";
        j["fuel"] = verdict.fuel;
    }
    if (with_trace) {
        json trace = json::array();
        for (const auto& t : verdict.trace) {
            trace.push_back(json{{"state", t.state}, {"counters", json::array({t.c1, t.c2})}});
        }
        j["trace"] = trace;
    }
    return j;
}

} // namespace

std::string encode_run_verdict(const RunVerdict& verdict, bool with_trace) {
    return verdict_json(verdict, with_trace).dump(2) + "\n";
}

std::string encode_report(const CompareReport& report) {
    json j;
    j["direct"] = verdict_json(report.direct, false);
    json via = json::array();
    for (const auto& entry : report.via) {
        json je;
        if (entry.mode.kind == MarkingMode::Kind::Canonical) {
            je["mode"] = "canonical";
        } else {
            je["mode"] = "sampled";
            je["seed"] = entry.mode.seed;
        }
        je["verdict"] = verdict_json(entry.verdict, false);
        via.push_back(je);
    }
    j["via"] = via;
    j["agree"] = report.agree;
    return j.dump(2) + "\n";
}

} // namespace pdmark
