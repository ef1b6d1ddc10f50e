#include "cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdmark/fragment.hpp"
#include "pdmark/gadget.hpp"
#include "pdmark/games.hpp"
#include "pdmark/marking.hpp"
#include "pdmark/minsky.hpp"
#include "pdmark/pda.hpp"
#include "pdmark/rank.hpp"

namespace pdmark::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// --pda accepts a builtin name or a path to a PDA JSON file.
Pda load_pda(const std::string& name_or_path, std::string* builtin_name = nullptr) {
    if (name_or_path == "example1" || name_or_path == "example1-dead") {
        if (builtin_name) *builtin_name = name_or_path;
        return builtin_pda(name_or_path);
    }
    if (name_or_path == "gadget") {
        if (builtin_name) *builtin_name = name_or_path;
        return build_gadget();
    }
    return decode_pda(read_file(name_or_path));
}

struct CommandContext {
    std::ostream& out;
    std::ostream& err;
    int exit_code = 0;
};

void add_commands(CLI::App& app, CommandContext& ctx) {
    // pda validate | pda show
    auto* pda_cmd = app.add_subcommand("pda", "inspect or validate an automaton");
    pda_cmd->require_subcommand(1);
    {
        auto* validate_cmd = pda_cmd->add_subcommand("validate", "check the automaton invariants");
        auto pda_arg = std::make_shared<std::string>();
        validate_cmd->add_option("--pda", *pda_arg, "builtin name or PDA JSON file")->required();
        validate_cmd->callback([&ctx, pda_arg]() {
            auto violations = validate(load_pda(*pda_arg));
            json j = json::array();
            for (const auto& v : violations) j.push_back(v);
            ctx.out << j.dump(2) << "\n";
            ctx.exit_code = violations.empty() ? 0 : 1;
        });

        auto* show_cmd = pda_cmd->add_subcommand("show", "print the automaton as canonical JSON");
        auto show_arg = std::make_shared<std::string>();
        show_cmd->add_option("--pda", *show_arg, "builtin name or PDA JSON file")->required();
        show_cmd->callback([&ctx, show_arg]() { ctx.out << encode_pda(load_pda(*show_arg)); });
    }

    // explore
    {
        auto* cmd = app.add_subcommand("explore", "materialize a bounded fragment");
        auto pda_arg = std::make_shared<std::string>();
        auto roots = std::make_shared<std::vector<std::string>>();
        auto depth = std::make_shared<std::size_t>(0);
        auto height = std::make_shared<std::size_t>(0);
        cmd->add_option("--pda", *pda_arg)->required();
        cmd->add_option("--root", *roots, "root config text (repeatable; default: initial)");
        cmd->add_option("--depth", *depth, "BFS radius")->required();
        cmd->add_option("--height", *height, "max stack height")->required();
        cmd->callback([&ctx, pda_arg, roots, depth, height]() {
            std::string name;
            Pda pda = load_pda(*pda_arg, &name);
            std::vector<Config> root_configs;
            if (roots->empty()) root_configs.push_back(Config{pda.initial, make_stack({})});
            for (const auto& r : *roots) root_configs.push_back(parse_config(r));
            Fragment f = explore(pda, root_configs, Bounds{*depth, *height});
            if (!name.empty()) f.pda_name = name;
            ctx.out << encode_fragment(f);
        });
    }

    // rank
    {
        auto* cmd = app.add_subcommand("rank", "shortest-path rank to a final configuration");
        auto pda_arg = std::make_shared<std::string>();
        auto config = std::make_shared<std::string>();
        auto in = std::make_shared<std::string>();
        cmd->add_option("--pda", *pda_arg)->required();
        auto* config_opt = cmd->add_option("--config", *config, "single config text");
        cmd->add_option("--in", *in, "fragment file; ranks every vertex")->excludes(config_opt);
        cmd->callback([&ctx, pda_arg, config, in]() {
            Pda pda = load_pda(*pda_arg);
            if (!config->empty()) {
                Rank r = rank_of(pda, parse_config(*config));
                if (r.is_infinite()) ctx.out << "\"inf\"\n";
                else ctx.out << r.value() << "\n";
                return;
            }
            if (in->empty()) throw InputError("rank needs --config or --in");
            auto decoded = decode_fragment(read_file(*in));
            const auto& vertices = std::holds_alternative<Fragment>(decoded)
                                       ? std::get<Fragment>(decoded).vertices
                                       : std::get<MarkedFragment>(decoded).vertices;
            RankProvider ranks(pda);
            RankTable table;
            for (const auto& v : vertices) table.entries.emplace_back(v, ranks(v));
            ctx.out << encode_rank_table(table);
        });
    }

    // levels
    {
        auto* cmd = app.add_subcommand("levels", "backward level sets W_0 .. W_n");
        auto pda_arg = std::make_shared<std::string>();
        auto n = std::make_shared<std::size_t>(0);
        cmd->add_option("--pda", *pda_arg)->required();
        cmd->add_option("--n", *n, "last level index (they grow fast)")->required();
        cmd->callback([&ctx, pda_arg, n]() {
            LevelSets sets = level_sets(load_pda(*pda_arg), *n);
            json levels = json::array();
            for (const auto& level : sets.levels) {
                json jl = json::array();
                for (const auto& c : level) jl.push_back(to_text(c));
                levels.push_back(jl);
            }
            ctx.out << json{{"levels", levels}}.dump(2) << "\n";
        });
    }

    // prestar
    {
        auto* cmd = app.add_subcommand("prestar",
                                       "saturated backward-reachability automaton");
        auto pda_arg = std::make_shared<std::string>();
        auto config = std::make_shared<std::string>();
        cmd->add_option("--pda", *pda_arg)->required();
        cmd->add_option("--config", *config, "test membership instead of printing");
        cmd->callback([&ctx, pda_arg, config]() {
            PAutomaton pa = prestar(load_pda(*pda_arg));
            if (config->empty()) {
                ctx.out << encode_pautomaton(pa);
                return;
            }
            bool member = accepts(pa, parse_config(*config));
            ctx.out << (member ? "true" : "false") << "\n";
            ctx.exit_code = member ? 0 : 1;
        });
    }

    // mark
    {
        auto* cmd = app.add_subcommand("mark", "canonical rank-decrease marking of a fragment");
        auto pda_arg = std::make_shared<std::string>();
        auto in = std::make_shared<std::string>();
        cmd->add_option("--pda", *pda_arg)->required();
        cmd->add_option("--in", *in, "fragment file")->required();
        cmd->callback([&ctx, pda_arg, in]() {
            auto decoded = decode_fragment(read_file(*in));
            if (!std::holds_alternative<Fragment>(decoded))
                throw InputError("input fragment already carries marks");
            ctx.out << encode_fragment(
                mark_fragment(load_pda(*pda_arg), std::get<Fragment>(decoded)));
        });
    }

    // check-marking
    {
        auto* cmd = app.add_subcommand("check-marking",
                                       "judge a marking against the well-formedness conditions");
        auto pda_arg = std::make_shared<std::string>();
        auto in = std::make_shared<std::string>();
        cmd->add_option("--pda", *pda_arg)->required();
        cmd->add_option("--in", *in, "marked fragment file")->required();
        cmd->callback([&ctx, pda_arg, in]() {
            auto decoded = decode_fragment(read_file(*in));
            if (!std::holds_alternative<MarkedFragment>(decoded))
                throw InputError("input fragment carries no marks");
            MarkingVerdict verdict =
                check_well_formed(load_pda(*pda_arg), std::get<MarkedFragment>(decoded));
            ctx.out << encode_verdict(verdict);
            ctx.exit_code = verdict.ok ? 0 : 1;
        });
    }

    // sample-marking
    {
        auto* cmd = app.add_subcommand("sample-marking", "seeded random well-formed marking");
        auto pda_arg = std::make_shared<std::string>();
        auto in = std::make_shared<std::string>();
        auto seed = std::make_shared<std::uint64_t>(0);
        cmd->add_option("--pda", *pda_arg)->required();
        cmd->add_option("--in", *in, "fragment file")->required();
        cmd->add_option("--seed", *seed)->required();
        cmd->callback([&ctx, pda_arg, in, seed]() {
            auto decoded = decode_fragment(read_file(*in));
            if (!std::holds_alternative<Fragment>(decoded))
                throw InputError("input fragment already carries marks");
            ctx.out << encode_fragment(
                sample_well_formed(load_pda(*pda_arg), std::get<Fragment>(decoded), *seed));
        });
    }

    // export-dot
    {
        auto* cmd = app.add_subcommand("export-dot", "render a fragment as a DOT digraph");
        auto in = std::make_shared<std::string>();
        cmd->add_option("--in", *in, "fragment file")->required();
        cmd->callback([&ctx, in]() {
            auto decoded = decode_fragment(read_file(*in));
            if (std::holds_alternative<Fragment>(decoded))
                ctx.out << export_dot(std::get<Fragment>(decoded));
            else ctx.out << export_dot(std::get<MarkedFragment>(decoded));
        });
    }

    // gadget build | triple | zero-test
    auto* gadget_cmd = app.add_subcommand("gadget", "the counter-encoding automaton");
    gadget_cmd->require_subcommand(1);
    {
        auto* build_cmd = gadget_cmd->add_subcommand("build", "print the gadget as PDA JSON");
        build_cmd->callback([&ctx]() { ctx.out << encode_pda(build_gadget()); });

        auto* triple_cmd = gadget_cmd->add_subcommand("triple", "component sums and counters");
        auto config = std::make_shared<std::string>();
        triple_cmd->add_option("--config", *config)->required();
        triple_cmd->callback([&ctx, config]() {
            Config c = parse_config(*config);
            Triple k = triple_of(c);
            CounterPair counters = counters_of(c);
            json j;
            j["triple"] = json::array({k.k1, k.k2, k.k3});
            j["counters"] = json::array({counters.c1, counters.c2});
            ctx.out << j.dump(2) << "\n";
        });

        auto* zt_cmd = gadget_cmd->add_subcommand("zero-test",
                                                  "marking-driven counter zero test");
        auto zt_config = std::make_shared<std::string>();
        auto which = std::make_shared<int>(1);
        auto mode = std::make_shared<std::string>("canonical");
        auto seed = std::make_shared<std::uint64_t>(1);
        auto ceiling = std::make_shared<std::size_t>(kDefaultHeightCeiling);
        auto as_json = std::make_shared<bool>(false);
        zt_cmd->add_option("--config", *zt_config)->required();
        zt_cmd->add_option("--which", *which, "counter to test: 1 or 2")->required();
        zt_cmd->add_option("--mode", *mode)->check(CLI::IsMember({"canonical", "robust"}));
        zt_cmd->add_option("--seed", *seed, "marking seed (robust mode)");
        zt_cmd->add_option("--ceiling", *ceiling, "stack-height ceiling for the region");
        zt_cmd->add_flag("--json", *as_json, "print a JSON verdict, exit 0 either way");
        zt_cmd->callback([&ctx, zt_config, which, mode, seed, ceiling, as_json]() {
            Pda pda = build_gadget();
            Config c = parse_config(*zt_config);
            bool result;
            if (*mode == "canonical") {
                result = zero_test_canonical(pda, c, *which);
            } else {
                Fragment region = zero_test_region(pda, c, *which, *ceiling);
                MarkedFragment marking = sample_well_formed(pda, region, *seed);
                result = zero_test_robust(pda, marking, c, *which);
            }
            if (*as_json) {
                json j;
                j["config"] = to_text(c);
                j["which"] = *which;
                j["mode"] = *mode;
                if (*mode == "robust") j["seed"] = *seed;
                j["result"] = result;
                ctx.out << j.dump(2) << "\n";
            } else {
                ctx.out << (result ? "true" : "false") << "\n";
                ctx.exit_code = result ? 0 : 1;
            }
        });
    }

    // minsky run | reduce | compare
    auto* minsky_cmd = app.add_subcommand("minsky", "2-counter machines with zero tests");
    minsky_cmd->require_subcommand(1);
    {
        auto* run_cmd = minsky_cmd->add_subcommand("run", "direct simulation");
        auto in = std::make_shared<std::string>();
        auto fuel = std::make_shared<std::uint64_t>(200);
        auto trace = std::make_shared<bool>(false);
        run_cmd->add_option("--in", *in, "machine JSON file")->required();
        run_cmd->add_option("--fuel", *fuel);
        run_cmd->add_flag("--trace", *trace);
        run_cmd->callback([&ctx, in, fuel, trace]() {
            RunVerdict v = run_direct(decode_machine(read_file(*in)), *fuel);
            ctx.out << encode_run_verdict(v, *trace);
        });

        auto* reduce_cmd = minsky_cmd->add_subcommand(
            "reduce", "simulation through the marked counter gadget");
        auto rin = std::make_shared<std::string>();
        auto rfuel = std::make_shared<std::uint64_t>(200);
        auto rmode = std::make_shared<std::string>("canonical");
        auto rseed = std::make_shared<std::uint64_t>(1);
        auto rceiling = std::make_shared<std::size_t>(kDefaultHeightCeiling);
        auto rtrace = std::make_shared<bool>(false);
        reduce_cmd->add_option("--in", *rin)->required();
        reduce_cmd->add_option("--fuel", *rfuel);
        reduce_cmd->add_option("--mode", *rmode)->check(CLI::IsMember({"canonical", "sampled"}));
        reduce_cmd->add_option("--seed", *rseed, "marking seed (sampled mode)");
        reduce_cmd->add_option("--ceiling", *rceiling);
        reduce_cmd->add_flag("--trace", *rtrace);
        reduce_cmd->callback([&ctx, rin, rfuel, rmode, rseed, rceiling, rtrace]() {
            MarkingMode mode = *rmode == "canonical" ? MarkingMode::canonical()
                                                     : MarkingMode::sampled(*rseed);
            RunVerdict v = run_via_marking(decode_machine(read_file(*rin)), build_gadget(), mode,
                                           *rfuel, *rceiling);
            ctx.out << encode_run_verdict(v, *rtrace);
        });

        auto* compare_cmd = minsky_cmd->add_subcommand(
            "compare", "direct run vs marking runs; exit 0 iff all verdicts agree");
        auto cin_ = std::make_shared<std::string>();
        auto cfuel = std::make_shared<std::uint64_t>(200);
        auto cseeds = std::make_shared<std::vector<std::uint64_t>>();
        auto cceiling = std::make_shared<std::size_t>(kDefaultHeightCeiling);
        compare_cmd->add_option("--in", *cin_)->required();
        compare_cmd->add_option("--fuel", *cfuel);
        compare_cmd->add_option("--seed", *cseeds, "sampled-marking seed (repeatable)");
        compare_cmd->add_option("--ceiling", *cceiling);
        compare_cmd->callback([&ctx, cin_, cfuel, cseeds, cceiling]() {
            CompareReport report =
                compare(decode_machine(read_file(*cin_)), *cfuel, *cseeds, *cceiling);
            ctx.out << encode_report(report);
            ctx.exit_code = report.agree ? 0 : 1;
        });
    }

    // game attractor
    auto* game_cmd = app.add_subcommand("game", "reachability games on fragments");
    game_cmd->require_subcommand(1);
    {
        auto* attr_cmd = game_cmd->add_subcommand("attractor",
                                                  "winning region, levels and strategy");
        auto pda_arg = std::make_shared<std::string>();
        auto in = std::make_shared<std::string>();
        attr_cmd->add_option("--pda", *pda_arg)->required();
        attr_cmd->add_option("--in", *in, "game JSON file")->required();
        attr_cmd->callback([&ctx, pda_arg, in]() {
            Pda pda = load_pda(*pda_arg);
            GameFragment game = decode_game(read_file(*in), pda);
            ctx.out << encode_attractor(attractor(game));
        });
    }

    // version
    {
        auto* cmd = app.add_subcommand("version", "tool and schema versions");
        cmd->callback([&ctx]() {
            json j;
            j["name"] = kToolName;
            j["version"] = kToolVersion;
            j["schema_version"] = kFragmentSchemaVersion;
            ctx.out << j.dump(2) << "\n";
        });
    }
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"shortest-path ranks and markings on pushdown configuration graphs", kToolName};
    app.require_subcommand(1);
    CommandContext ctx{out, err};
    add_commands(app, ctx);

    std::vector<const char*> argv;
    argv.push_back(kToolName);
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return ctx.exit_code;
}

} // namespace pdmark::cli
