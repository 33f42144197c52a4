#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vmkit/machine.hpp"

namespace vmkit {

/// Selects among tied next-instruction candidates. A policy is either
/// scripted (a list of indices into the canonically ordered tie set, one per
/// nondeterministic point) or a seeded pseudo-random selector. Scripted
/// policies that run out of entries raise an Error identifying the step; ties
/// of size one never consume an entry.
class ChoicePolicy {
public:
    static ChoicePolicy scripted(std::vector<std::size_t> picks);
    static ChoicePolicy seeded(std::uint64_t seed);

    /// Returns the chosen position in [0, tie_size).
    std::size_t choose(std::uint32_t step_index, std::size_t tie_size);

private:
    ChoicePolicy() = default;

    bool scripted_ = false;
    std::vector<std::size_t> picks_;
    std::size_t next_pick_ = 0;
    std::mt19937_64 rng_;
};

/// One nondeterministic decision: the step the choice was taken from, the
/// tied candidate instructions in canonical order, and the position chosen.
struct ChoiceRecord {
    std::uint32_t step_index = 0;
    std::vector<std::int32_t> tie;
    std::size_t chosen = 0;
};

/// A single computation: the visited configurations (index = step), every
/// choice taken, and the emitted number when the computation halted.
struct ComputationTrace {
    std::vector<Configuration> configurations;
    std::vector<ChoiceRecord> choices;
    bool halted = false;
    std::optional<std::uint64_t> emitted;
};

/// Budget for exhaustive exploration. max_steps bounds the trace length;
/// the optional caps bound the total viruses per configuration and the
/// number of simultaneously tracked configurations. Exceeding a cap never
/// throws: affected branches are dropped and reported as truncated.
struct ExplorationBounds {
    std::uint32_t max_steps = 10000;
    std::optional<std::uint64_t> max_total_viruses;
    std::optional<std::size_t> max_frontier;
};

/// Result of exploring the nondeterministic computation tree. `numbers`
/// holds the environment count of every halting branch found, sorted and
/// deduplicated. `exact` is true iff no branch was cut off by any bound, in
/// which case `numbers` is the machine's full generated set and
/// `observed_nvh` realizes the per-host virus bound. The branch statistics
/// are engine-specific but deterministic for a given machine and bounds.
struct GeneratedSetReport {
    std::vector<std::uint64_t> numbers;
    bool exact = false;
    std::uint64_t observed_nvh = 0;
    std::uint64_t branch_count = 0;
    std::uint64_t truncated_branch_count = 0;

    bool operator==(const GeneratedSetReport&) const = default;
};

/// Precomputed per-instruction firing data for a validated machine: the
/// attached channel (if any) resolved to host indices, and the outgoing
/// instruction-edge candidates split into the maximal-weight set (followed
/// after a virus transmission) and the minimal-weight set (followed when the
/// source host was empty or the instruction is unattached). Candidate sets
/// are kept in canonical (declaration) order.
class TransitionTable {
public:
    /// Validates the machine; throws Error when it is invalid.
    explicit TransitionTable(const VirusMachine& m);

    const VirusMachine& machine() const { return *machine_; }

    /// The one-step transition relation. Empty iff `c` is halted. When the
    /// applicable candidate set is empty the single successor carries the
    /// halt marker, so halting is one explicit final transition.
    std::vector<Configuration> successors(const Configuration& c) const;

    /// Hot-path variant appending to an existing buffer.
    void append_successors(const Configuration& c, std::vector<Configuration>& out) const;

private:
    struct Firing {
        bool attached = false;
        std::int32_t source = -1;
        std::int32_t target = -1;  // -1 = environment
        std::uint64_t weight = 0;
    };

    const VirusMachine* machine_;
    std::vector<Firing> firings_;
    std::vector<std::vector<std::int32_t>> max_candidates_;
    std::vector<std::vector<std::int32_t>> min_candidates_;
};

/// One-shot form of TransitionTable::successors.
std::vector<Configuration> successors(const VirusMachine& m, const Configuration& c);

/// Runs a single computation from the initial configuration, consulting the
/// policy at every tie, until the machine halts or max_steps transitions
/// have been taken.
ComputationTrace run_trace(const VirusMachine& m, ChoicePolicy policy, std::uint32_t max_steps);

struct TraceExpectation {
    std::uint32_t step = 0;
    Configuration expected;
};

struct TraceMismatch {
    std::uint32_t step = 0;
    std::string field;
    std::string expected;
    std::string actual;
};

/// Field-by-field comparison of a policy-driven trace against expected
/// configurations at selected steps. A trace that ends (or a script that
/// runs out) before the largest expected step is reported as a mismatch,
/// not an exception.
struct CheckReport {
    std::vector<TraceMismatch> mismatches;

    bool passed() const { return mismatches.empty(); }
};

CheckReport assert_trace(const VirusMachine& m, ChoicePolicy policy,
                         const std::vector<TraceExpectation>& expectations);

/// Breadth-first exploration of the full nondeterministic computation tree
/// up to the given bounds. Identical configurations reached at the same step
/// are merged; the frontier is kept in canonical order, so the report is
/// byte-identical across runs regardless of internal evaluation order.
GeneratedSetReport enumerate_generated_set(const VirusMachine& m, const ExplorationBounds& bounds);

/// Independent oracle: walks every choice sequence up to max_steps directly,
/// with no shared frontier and no merging. Exponential; refuses (throws)
/// once node_budget configurations have been expanded. Intended to
/// cross-validate enumerate_generated_set on small machines.
GeneratedSetReport brute_force_oracle(const VirusMachine& m, std::uint32_t max_steps,
                                      std::uint64_t node_budget = 20'000'000);

}  // namespace vmkit
