#include "vmkit/semantics.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace vmkit {

ChoicePolicy ChoicePolicy::scripted(std::vector<std::size_t> picks) {
    ChoicePolicy p;
    p.scripted_ = true;
    p.picks_ = std::move(picks);
    return p;
}

ChoicePolicy ChoicePolicy::seeded(std::uint64_t seed) {
    ChoicePolicy p;
    p.scripted_ = false;
    p.rng_.seed(seed);
    return p;
}

std::size_t ChoicePolicy::choose(std::uint32_t step_index, std::size_t tie_size) {
    if (!scripted_) {
        return static_cast<std::size_t>(rng_() % tie_size);
    }
    if (next_pick_ >= picks_.size()) {
        throw Error("choice script exhausted at step " + std::to_string(step_index) + " (tie of size " +
                    std::to_string(tie_size) + ")");
    }
    const std::size_t pick = picks_[next_pick_++];
    if (pick >= tie_size) {
        throw Error("choice script entry " + std::to_string(pick) + " out of range at step " +
                    std::to_string(step_index) + " (tie of size " + std::to_string(tie_size) + ")");
    }
    return pick;
}

TransitionTable::TransitionTable(const VirusMachine& m) : machine_(&m) {
    const auto report = validate_machine(m);
    if (!report.ok()) {
        std::string message = "invalid machine";
        if (!m.name.empty()) message += " '" + m.name + "'";
        message += ":";
        for (const auto& v : report.violations) message += "\n  - " + v;
        throw Error(message);
    }

    const std::size_t q = m.instructions.size();
    firings_.resize(q);
    max_candidates_.resize(q);
    min_candidates_.resize(q);

    for (std::size_t i = 0; i < q; ++i) {
        if (const Attachment* a = m.attachment_of(m.instructions[i])) {
            const Channel* c = m.find_channel(a->channel.from, a->channel.to);
            Firing& f = firings_[i];
            f.attached = true;
            f.source = static_cast<std::int32_t>(*m.host_index(c->from));
            f.target = c->to == kEnvironmentId ? -1 : static_cast<std::int32_t>(*m.host_index(c->to));
            f.weight = c->weight;
        }
    }

    for (std::size_t i = 0; i < q; ++i) {
        int max_weight = 0;
        int min_weight = 3;
        for (const auto& e : m.instruction_edges) {
            if (e.from != m.instructions[i]) continue;
            max_weight = std::max(max_weight, e.weight);
            min_weight = std::min(min_weight, e.weight);
        }
        for (const auto& e : m.instruction_edges) {
            if (e.from != m.instructions[i]) continue;
            const auto target = static_cast<std::int32_t>(*m.instruction_index(e.to));
            if (e.weight == max_weight) max_candidates_[i].push_back(target);
            if (e.weight == min_weight) min_candidates_[i].push_back(target);
        }
        std::sort(max_candidates_[i].begin(), max_candidates_[i].end());
        std::sort(min_candidates_[i].begin(), min_candidates_[i].end());
    }
}

void TransitionTable::append_successors(const Configuration& c, std::vector<Configuration>& out) const {
    if (c.halted()) return;
    if (c.next_instruction < 0 || static_cast<std::size_t>(c.next_instruction) >= firings_.size()) {
        throw Error("configuration references unknown instruction index " +
                    std::to_string(c.next_instruction));
    }
    if (c.host_counts.size() != machine_->hosts.size()) {
        throw Error("configuration has " + std::to_string(c.host_counts.size()) +
                    " host counts, machine has " + std::to_string(machine_->hosts.size()) + " hosts");
    }

    const auto i = static_cast<std::size_t>(c.next_instruction);
    const Firing& f = firings_[i];

    Configuration base = c;
    base.step_index = c.step_index + 1;

    bool transmitted = false;
    if (f.attached && c.host_counts[static_cast<std::size_t>(f.source)] > 0) {
        transmitted = true;
        base.host_counts[static_cast<std::size_t>(f.source)] -= 1;
        if (f.target < 0) {
            base.env_count = checked_add(base.env_count, f.weight);
        } else {
            auto& target = base.host_counts[static_cast<std::size_t>(f.target)];
            target = checked_add(target, f.weight);
        }
    }

    const auto& candidates = transmitted ? max_candidates_[i] : min_candidates_[i];
    if (candidates.empty()) {
        base.next_instruction = kHaltMarker;
        out.push_back(std::move(base));
        return;
    }
    for (const auto next : candidates) {
        Configuration succ = base;
        succ.next_instruction = next;
        out.push_back(std::move(succ));
    }
}

std::vector<Configuration> TransitionTable::successors(const Configuration& c) const {
    std::vector<Configuration> out;
    append_successors(c, out);
    return out;
}

std::vector<Configuration> successors(const VirusMachine& m, const Configuration& c) {
    return TransitionTable(m).successors(c);
}

namespace {

// Shared trace loop; returns an error message instead of throwing so that
// assert_trace can turn script exhaustion into a reported failure.
std::optional<std::string> run_loop(const TransitionTable& table, ChoicePolicy& policy,
                                    std::uint32_t max_steps, ComputationTrace& trace) {
    trace.configurations.push_back(initial_configuration(table.machine()));
    while (true) {
        const Configuration& current = trace.configurations.back();
        if (current.halted() || current.step_index >= max_steps) break;

        auto next = table.successors(current);
        std::size_t pick = 0;
        if (next.size() > 1) {
            ChoiceRecord record;
            record.step_index = current.step_index;
            for (const auto& s : next) record.tie.push_back(s.next_instruction);
            try {
                pick = policy.choose(current.step_index, next.size());
            } catch (const Error& e) {
                return e.what();
            }
            record.chosen = pick;
            trace.choices.push_back(std::move(record));
        }
        trace.configurations.push_back(std::move(next[pick]));
    }
    trace.halted = trace.configurations.back().halted();
    if (trace.halted) trace.emitted = trace.configurations.back().env_count;
    return std::nullopt;
}

}  // namespace

ComputationTrace run_trace(const VirusMachine& m, ChoicePolicy policy, std::uint32_t max_steps) {
    TransitionTable table(m);
    ComputationTrace trace;
    if (auto error = run_loop(table, policy, max_steps, trace)) throw Error(*error);
    return trace;
}

CheckReport assert_trace(const VirusMachine& m, ChoicePolicy policy,
                         const std::vector<TraceExpectation>& expectations) {
    TransitionTable table(m);
    std::uint32_t max_step = 0;
    for (const auto& e : expectations) max_step = std::max(max_step, e.step);

    ComputationTrace trace;
    const auto error = run_loop(table, policy, max_step, trace);

    CheckReport report;
    for (const auto& expectation : expectations) {
        if (expectation.step >= trace.configurations.size()) {
            report.mismatches.push_back(
                {expectation.step, "trace",
                 "configuration at step " + std::to_string(expectation.step),
                 error ? "trace aborted: " + *error
                       : "trace ended at step " +
                             std::to_string(trace.configurations.back().step_index)});
            continue;
        }
        const Configuration& actual = trace.configurations[expectation.step];
        const Configuration& expected = expectation.expected;
        if (expected.host_counts.size() != actual.host_counts.size()) {
            report.mismatches.push_back({expectation.step, "host_counts",
                                         std::to_string(expected.host_counts.size()) + " hosts",
                                         std::to_string(actual.host_counts.size()) + " hosts"});
        } else {
            for (std::size_t h = 0; h < actual.host_counts.size(); ++h) {
                if (expected.host_counts[h] != actual.host_counts[h]) {
                    report.mismatches.push_back({expectation.step, "host_counts[" + m.hosts[h].id + "]",
                                                 std::to_string(expected.host_counts[h]),
                                                 std::to_string(actual.host_counts[h])});
                }
            }
        }
        auto render = [&m](std::int32_t instruction) -> std::string {
            if (instruction == kHaltMarker) return "#";
            if (instruction >= 0 && static_cast<std::size_t>(instruction) < m.instructions.size()) {
                return m.instructions[static_cast<std::size_t>(instruction)];
            }
            return "?" + std::to_string(instruction);
        };
        if (expected.next_instruction != actual.next_instruction) {
            report.mismatches.push_back({expectation.step, "next_instruction",
                                         render(expected.next_instruction),
                                         render(actual.next_instruction)});
        }
        if (expected.env_count != actual.env_count) {
            report.mismatches.push_back({expectation.step, "env_count",
                                         std::to_string(expected.env_count),
                                         std::to_string(actual.env_count)});
        }
    }
    return report;
}

namespace {

std::uint64_t max_host_count(const Configuration& c) {
    std::uint64_t best = 0;
    for (const auto count : c.host_counts) best = std::max(best, count);
    return best;
}

std::uint64_t total_viruses(const Configuration& c) {
    std::uint64_t total = 0;
    for (const auto count : c.host_counts) total = checked_add(total, count);
    return total;
}

}  // namespace

GeneratedSetReport enumerate_generated_set(const VirusMachine& m, const ExplorationBounds& bounds) {
    TransitionTable table(m);

    GeneratedSetReport report;
    std::set<std::uint64_t> numbers;
    std::uint64_t truncated = 0;

    std::vector<Configuration> frontier{initial_configuration(m)};
    report.observed_nvh = max_host_count(frontier.front());

    for (std::uint32_t level = 0;; ++level) {
        std::vector<Configuration> live;
        live.reserve(frontier.size());
        for (auto& c : frontier) {
            if (c.halted()) {
                numbers.insert(c.env_count);
                ++report.branch_count;
            } else {
                live.push_back(std::move(c));
            }
        }
        if (live.empty()) break;
        if (level == bounds.max_steps) {
            truncated += live.size();
            break;
        }

        std::vector<Configuration> next;
        next.reserve(live.size() * 2);
        for (const auto& c : live) table.append_successors(c, next);

        for (const auto& c : next) {
            report.observed_nvh = std::max(report.observed_nvh, max_host_count(c));
        }

        if (bounds.max_total_viruses) {
            std::vector<Configuration> kept;
            kept.reserve(next.size());
            for (auto& c : next) {
                if (total_viruses(c) <= *bounds.max_total_viruses) {
                    kept.push_back(std::move(c));
                } else {
                    ++truncated;
                }
            }
            next = std::move(kept);
        }

        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());

        if (bounds.max_frontier && next.size() > *bounds.max_frontier) {
            truncated += next.size() - *bounds.max_frontier;
            next.resize(*bounds.max_frontier);
        }

        frontier = std::move(next);
    }

    report.numbers.assign(numbers.begin(), numbers.end());
    report.truncated_branch_count = truncated;
    report.exact = truncated == 0;
    return report;
}

GeneratedSetReport brute_force_oracle(const VirusMachine& m, std::uint32_t max_steps,
                                      std::uint64_t node_budget) {
    TransitionTable table(m);

    GeneratedSetReport report;
    std::set<std::uint64_t> numbers;
    std::uint64_t truncated = 0;
    std::uint64_t visited = 0;

    std::vector<Configuration> stack{initial_configuration(m)};
    std::vector<Configuration> scratch;
    while (!stack.empty()) {
        if (++visited > node_budget) {
            throw Error("brute-force oracle exceeded its budget of " + std::to_string(node_budget) +
                        " configurations");
        }
        Configuration c = std::move(stack.back());
        stack.pop_back();
        report.observed_nvh = std::max(report.observed_nvh, max_host_count(c));
        if (c.halted()) {
            numbers.insert(c.env_count);
            ++report.branch_count;
            continue;
        }
        if (c.step_index == max_steps) {
            ++truncated;
            continue;
        }
        scratch.clear();
        table.append_successors(c, scratch);
        for (auto& s : scratch) stack.push_back(std::move(s));
    }

    report.numbers.assign(numbers.begin(), numbers.end());
    report.truncated_branch_count = truncated;
    report.exact = truncated == 0;
    return report;
}

}  // namespace vmkit
