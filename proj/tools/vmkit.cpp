#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vmkit/analysis.hpp"
#include "vmkit/constructions.hpp"
#include "vmkit/io.hpp"
#include "vmkit/machine.hpp"
#include "vmkit/semantics.hpp"

namespace {

using namespace vmkit;

struct CommonOptions {
    std::string machine_path;  // empty = stdin
    std::uint32_t max_steps = 10000;
    std::optional<std::uint64_t> max_total_viruses;
    std::optional<std::size_t> max_frontier;
    std::string bounds;  // "steps[,viruses[,frontier]]" shorthand
    std::string format = "text";
    std::string out_path;  // empty = stdout
};

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open machine file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write to '" + path + "'");
    out << text;
}

VirusMachine load_machine(const CommonOptions& options) {
    return parse_machine(read_input(options.machine_path));
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
    std::vector<std::uint64_t> values;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        if (token.empty()) throw Error("empty entry in list '" + text + "'");
        values.push_back(std::stoull(token));
    }
    return values;
}

ExplorationBounds exploration_bounds(const CommonOptions& options) {
    ExplorationBounds bounds;
    bounds.max_steps = options.max_steps;
    bounds.max_total_viruses = options.max_total_viruses;
    bounds.max_frontier = options.max_frontier;
    if (!options.bounds.empty()) {
        const auto values = parse_uint_list(options.bounds);
        if (values.size() > 3) throw Error("--bounds takes at most steps,viruses,frontier");
        if (!values.empty()) bounds.max_steps = static_cast<std::uint32_t>(values[0]);
        if (values.size() > 1) bounds.max_total_viruses = values[1];
        if (values.size() > 2) bounds.max_frontier = static_cast<std::size_t>(values[2]);
    }
    if (!bounds.max_frontier) {
        if (const char* env = std::getenv("VM_MAX_FRONTIER")) {
            bounds.max_frontier = static_cast<std::size_t>(std::stoull(env));
        }
    }
    return bounds;
}

std::string format_numbers(const std::vector<std::uint64_t>& numbers) {
    constexpr std::size_t kShown = 32;
    std::string text = "{";
    for (std::size_t i = 0; i < numbers.size() && i < kShown; ++i) {
        if (i) text += ", ";
        text += std::to_string(numbers[i]);
    }
    if (numbers.size() > kShown) {
        text += ", ... (" + std::to_string(numbers.size()) + " values)";
    }
    return text + "}";
}

std::string format_report(const GeneratedSetReport& report) {
    std::string text = format_numbers(report.numbers);
    text += report.exact ? " (exact)" : " (truncated)";
    text += "\nobserved nvh: " + std::to_string(report.observed_nvh);
    text += "\nbranches: " + std::to_string(report.branch_count) + " halted, " +
            std::to_string(report.truncated_branch_count) + " truncated\n";
    return text;
}

std::string format_profile(const IngredientProfile& p) {
    std::string nvh = p.nvh_r ? std::to_string(*p.nvh_r) + (p.nvh_exact ? " (exact)" : " (observed)")
                              : std::string("unknown");
    return "beta=" + std::string(p.beta ? "T" : "F") + " hosts=" + std::to_string(p.hosts_p) +
           " instructions=" + std::to_string(p.instructions_q) + " nvh=" + nvh +
           " wc=" + std::to_string(p.wc_s) + " outd=" + std::to_string(p.outd_t) +
           " alpha_host=" + std::to_string(p.alpha_host_u) +
           " alpha_inst=" + std::to_string(p.alpha_inst_v);
}

std::string format_trace(const VirusMachine& m, const ComputationTrace& trace) {
    std::string text;
    for (const auto& c : trace.configurations) {
        text += "step " + std::to_string(c.step_index) + ": " + describe(m, c) + "\n";
    }
    for (const auto& choice : trace.choices) {
        text += "choice at step " + std::to_string(choice.step_index) + ": {";
        for (std::size_t i = 0; i < choice.tie.size(); ++i) {
            if (i) text += ", ";
            text += m.instructions[static_cast<std::size_t>(choice.tie[i])];
        }
        text += "} -> " + m.instructions[static_cast<std::size_t>(choice.tie[choice.chosen])] + "\n";
    }
    if (trace.halted) {
        text += "halted: emitted " + std::to_string(*trace.emitted) + "\n";
    } else {
        text += "not halted within the step budget\n";
    }
    return text;
}

VirusMachine build_from_args(const std::string& family, const std::vector<std::string>& args) {
    auto need = [&](std::size_t count) {
        if (args.size() != count) {
            throw Error("build " + family + " expects " + std::to_string(count) + " parameter(s)");
        }
    };
    if (family == "example") {
        need(0);
        return build_example();
    }
    if (family == "nat") {
        need(0);
        return build_nat();
    }
    if (family == "singleton") {
        need(1);
        return build_singleton(std::stoull(args[0]));
    }
    if (family == "finite") {
        need(1);
        return build_finite_set(parse_uint_list(args[0]));
    }
    if (family == "finite-one-host") {
        need(1);
        return build_finite_one_host(parse_uint_list(args[0]));
    }
    if (family == "finite-one-virus") {
        need(1);
        return build_finite_one_virus(parse_uint_list(args[0]));
    }
    if (family == "lin") {
        need(3);
        return build_lin_fin(std::stoull(args[0]), std::stoull(args[1]), std::stoull(args[2]));
    }
    if (family == "comb-a" || family == "comb-b") {
        need(5);
        const auto w1 = std::stoull(args[0]);
        const auto w2 = std::stoull(args[1]);
        const auto r = std::stoull(args[2]);
        const auto n1 = std::stoull(args[3]);
        const auto n2 = std::stoull(args[4]);
        return family == "comb-a" ? build_comb_a(w1, w2, r, n1, n2)
                                  : build_comb_b(w1, w2, r, n1, n2);
    }
    if (family == "arith") {
        need(2);
        return build_arith(std::stoull(args[0]), std::stoull(args[1]));
    }
    if (family == "union") {
        if (args.size() < 2) throw Error("build union expects at least two n,r pairs");
        std::vector<ArithParams> parts;
        for (const auto& arg : args) {
            const auto pair = parse_uint_list(arg);
            if (pair.size() != 2) throw Error("union part '" + arg + "' must be n,r");
            parts.push_back({pair[0], pair[1]});
        }
        return build_union(parts);
    }
    throw Error("unknown machine family '" + family +
                "' (expected example, nat, singleton, finite, finite-one-host, finite-one-virus, "
                "lin, comb-a, comb-b, arith or union)");
}

// validate prints structural violations as a report instead of aborting on
// the first one.
int do_validate(const CommonOptions& options) {
    const std::string text = read_input(options.machine_path);
    VirusMachine machine;
    try {
        machine = parse_machine(text);
    } catch (const Error& e) {
        std::cout << e.what() << "\n";
        return 1;
    }
    std::cout << "valid: machine '" << machine.name << "' with " << machine.hosts.size()
              << " host(s), " << machine.instructions.size() << " instruction(s)\n";
    return 0;
}

int do_run(const CommonOptions& options, const std::string& script, std::uint64_t seed,
           bool seed_given) {
    const auto machine = load_machine(options);
    ChoicePolicy policy = ChoicePolicy::seeded(seed_given ? seed : 0);
    if (!script.empty()) {
        std::vector<std::size_t> picks;
        for (const auto v : parse_uint_list(script)) picks.push_back(static_cast<std::size_t>(v));
        policy = ChoicePolicy::scripted(std::move(picks));
    }
    const auto trace = run_trace(machine, std::move(policy), options.max_steps);
    write_output(options.out_path, options.format == "json" ? trace_to_json(machine, trace)
                                                            : format_trace(machine, trace));
    return 0;
}

int do_enumerate(const CommonOptions& options) {
    const auto machine = load_machine(options);
    const auto report = enumerate_generated_set(machine, exploration_bounds(options));
    write_output(options.out_path,
                 options.format == "json" ? report_to_json(report) : format_report(report));
    return 0;
}

int do_analyze(const CommonOptions& options) {
    const auto machine = load_machine(options);
    const auto report = enumerate_generated_set(machine, exploration_bounds(options));
    const auto profile = ingredient_profile(machine, &report);
    const auto classification = classify(machine, profile);
    if (options.format == "json") {
        std::string text = profile_to_json(profile);
        text += classification_to_json(classification);
        write_output(options.out_path, text);
        return 0;
    }
    std::string text = "profile: " + format_profile(profile) + "\n";
    text += "generated (within bounds): " + format_numbers(report.numbers) +
            (report.exact ? " (exact)\n" : " (truncated)\n");
    text += "classification:\n";
    for (const auto& e : classification.entries) {
        text += std::string("  [") + (e.verdict == Verdict::Proven ? "proven" : "signature") + "] " +
                e.family + " via " + e.rule_id + ": " + e.justification + "\n";
    }
    if (classification.entries.empty()) text += "  (no rule applies)\n";
    write_output(options.out_path, text);
    return 0;
}

int do_build(const CommonOptions& options, const std::string& family,
             const std::vector<std::string>& args) {
    write_output(options.out_path, serialize_machine(build_from_args(family, args)));
    return 0;
}

int do_export_dot(const CommonOptions& options, const std::string& layer) {
    const auto machine = load_machine(options);
    DotLayer dot_layer = DotLayer::Combined;
    if (layer == "host") {
        dot_layer = DotLayer::Host;
    } else if (layer == "instruction") {
        dot_layer = DotLayer::Instruction;
    } else if (layer != "combined") {
        throw Error("unknown layer '" + layer + "' (expected host, instruction or combined)");
    }
    write_output(options.out_path, export_dot(machine, dot_layer));
    return 0;
}

struct Fixture {
    std::string family;
    VirusMachine machine;
    SetSpec spec;
    std::uint32_t max_steps;
    bool infinite;  // compare against the horizon-truncated prediction
    std::vector<std::uint64_t> allowed_extras;
};

std::uint64_t arith_horizon(const ArithParams& part, std::uint32_t max_steps, std::uint32_t shift) {
    // A part halts for multiplier m after shift + 3*n*m + 3*r transitions.
    const std::uint64_t budget = max_steps > shift ? max_steps - shift : 0;
    if (budget < 3 * part.r + 3 * part.n) return 0;
    const std::uint64_t m = (budget - 3 * part.r) / (3 * part.n);
    return part.n * m + part.r;
}

int do_reproduce(const CommonOptions& options) {
    const std::uint32_t steps = options.max_steps == 10000 ? 400 : options.max_steps;
    std::vector<Fixture> fixtures;
    auto add = [&fixtures](std::string family, VirusMachine machine, SetSpec spec,
                           std::uint32_t max_steps, bool infinite,
                           std::vector<std::uint64_t> extras = {}) {
        fixtures.push_back({std::move(family), std::move(machine), std::move(spec), max_steps,
                            infinite, std::move(extras)});
    };

    add("worked example", build_example(), SetSpec::finite_set({2, 4}), 10, false);
    add("naturals", build_nat(), SetSpec::nat(), 31, true);
    add("singleton", build_singleton(7), SetSpec::singleton(7), 3, false);
    add("finite set", build_finite_set({1, 3, 5}), SetSpec::finite_set({1, 3, 5}), 16, false);
    add("finite, one host", build_finite_one_host({2, 4}), SetSpec::finite_set({2, 4}), 10, false);
    add("finite, one virus", build_finite_one_virus({2, 4}), SetSpec::finite_set({2, 4}), 10, false);
    add("linear progression", build_lin_fin(1, 2, 3), SetSpec::lin_fin(1, 2, 3), 12, false);
    add("combination (chained loops)", build_comb_a(1, 2, 1, 2, 2), SetSpec::comb_a(1, 2, 1, 2, 2),
        12, false);
    add("combination (paired loop)", build_comb_b(1, 1, 1, 2, 3), SetSpec::comb_b(1, 1, 1, 2, 3),
        20, false, {5});
    add("arithmetic progression", build_arith(2, 3), SetSpec::arith(2, 3), steps, true);
    add("union of progressions", build_union({{2, 3}, {5, 1}}), SetSpec::union_of({{2, 3}, {5, 1}}),
        steps, true);

    std::size_t failures = 0;
    std::printf("%-28s | %-34s | %-7s | %s\n", "family", "resources", "status", "generated");
    std::printf("%s\n", std::string(110, '-').c_str());
    for (const auto& fixture : fixtures) {
        ExplorationBounds bounds;
        bounds.max_steps = fixture.max_steps;
        const auto report = enumerate_generated_set(fixture.machine, bounds);
        const auto profile = ingredient_profile(fixture.machine, &report);

        std::uint64_t horizon = ~0ull;
        if (fixture.infinite) {
            if (fixture.spec.kind == SetSpec::Kind::Nat) {
                horizon = fixture.max_steps >= 1 ? (fixture.max_steps - 1) / 3 : 0;
            } else if (fixture.spec.kind == SetSpec::Kind::Arith) {
                horizon = arith_horizon(fixture.spec.arith_part, fixture.max_steps, 0);
            } else if (fixture.spec.kind == SetSpec::Kind::Union) {
                horizon = 0;
                for (const auto& part : fixture.spec.parts) {
                    horizon = std::max(horizon, arith_horizon(part, fixture.max_steps, 1));
                }
            }
        }

        auto expected = predicted_set(fixture.spec, horizon);
        if (fixture.spec.kind == SetSpec::Kind::Union) {
            // Each part has its own horizon under a shared step budget.
            expected.clear();
            for (const auto& part : fixture.spec.parts) {
                const auto partial = predicted_set(SetSpec::arith(part.n, part.r),
                                                   arith_horizon(part, fixture.max_steps, 1));
                expected.insert(expected.end(), partial.begin(), partial.end());
            }
            std::sort(expected.begin(), expected.end());
            expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
        }

        std::vector<std::uint64_t> actual = report.numbers;
        for (const auto extra : fixture.allowed_extras) {
            std::erase(actual, extra);
        }
        const bool ok = actual == expected;
        failures += ok ? 0 : 1;
        std::printf("%-28s | %-34s | %-7s | %s\n", fixture.family.c_str(),
                    format_profile(profile).c_str(), ok ? "ok" : "MISMATCH",
                    format_numbers(report.numbers).c_str());
    }
    std::printf("%s\n", std::string(110, '-').c_str());
    if (failures == 0) {
        std::printf("all fixtures verified (%zu machines)\n", fixtures.size());
        return 0;
    }
    std::printf("%zu fixture(s) failed\n", failures);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"virus machine simulation and analysis toolkit"};
    app.require_subcommand(1);

    CommonOptions options;
    std::string script;
    std::uint64_t seed = 0;
    std::string layer = "combined";
    std::string family;
    std::vector<std::string> build_args;

    auto add_common = [&options](CLI::App* cmd, bool with_machine = true) {
        if (with_machine) {
            cmd->add_option("--machine", options.machine_path,
                            "machine document (.vm.json); stdin when omitted");
        }
        cmd->add_option("--max-steps", options.max_steps, "transition budget");
        cmd->add_option("--max-total-viruses", options.max_total_viruses,
                        "drop configurations whose host counts sum beyond this");
        cmd->add_option("--max-frontier", options.max_frontier,
                        "cap on simultaneously tracked configurations");
        cmd->add_option("--bounds", options.bounds, "shorthand steps[,viruses[,frontier]]");
        cmd->add_option("--out", options.out_path, "output file; stdout when omitted");
        cmd->add_option("--format", options.format, "text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* validate = app.add_subcommand("validate", "check a machine document");
    add_common(validate);

    auto* run = app.add_subcommand("run", "execute one computation");
    add_common(run);
    run->add_option("--script", script, "comma list of tie choices");
    auto* seed_option = run->add_option("--seed", seed, "seed for random tie choices");

    auto* enumerate = app.add_subcommand("enumerate", "explore the full computation tree");
    add_common(enumerate);

    auto* analyze = app.add_subcommand("analyze", "ingredient profile and classification");
    add_common(analyze);

    auto* build = app.add_subcommand("build", "emit a machine from the construction suite");
    build->add_option("family", family, "example|nat|singleton|finite|finite-one-host|"
                                        "finite-one-virus|lin|comb-a|comb-b|arith|union")
        ->required();
    build->add_option("params", build_args, "family parameters");
    add_common(build, /*with_machine=*/false);

    auto* export_dot_cmd = app.add_subcommand("export-dot", "render a graph layer as DOT");
    add_common(export_dot_cmd);
    export_dot_cmd->add_option("--layer", layer, "host, instruction or combined");

    auto* reproduce = app.add_subcommand("reproduce", "run the construction fixtures and "
                                                      "print a resource table");
    add_common(reproduce, /*with_machine=*/false);

    try {
        app.parse(argc, argv);
        if (validate->parsed()) return do_validate(options);
        if (run->parsed()) return do_run(options, script, seed, !seed_option->empty());
        if (enumerate->parsed()) return do_enumerate(options);
        if (analyze->parsed()) return do_analyze(options);
        if (build->parsed()) return do_build(options, family, build_args);
        if (export_dot_cmd->parsed()) return do_export_dot(options, layer);
        if (reproduce->parsed()) return do_reproduce(options);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const vmkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
