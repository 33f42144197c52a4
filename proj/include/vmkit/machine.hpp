#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vmkit {

/// Error thrown for domain failures: invalid machines, exhausted choice
/// scripts, exploration budget refusals, arithmetic overflow.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Identifier of the environment region. It is not a host: it never appears
/// in VirusMachine::hosts and no channel may use it as a source.
inline constexpr std::string_view kEnvironmentId = "h0";

/// Sentinel stored in Configuration::next_instruction once a computation has
/// halted.
inline constexpr std::int32_t kHaltMarker = -1;

/// Overflow-checked arithmetic on virus counts. Counts are conceptually
/// unbounded naturals (channel weights compound multiplicatively); a checked
/// 64-bit representation keeps the simulator honest instead of wrapping.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

/// A process unit together with its initial virus count.
struct Host {
    std::string id;
    std::uint64_t initial_viruses = 0;

    bool operator==(const Host&) const = default;
};

/// Weighted arc of the host graph. `from` must be a declared host; `to` may
/// be a declared host or the environment. Opening the channel consumes one
/// virus at `from` and deposits `weight` replicated copies at `to`.
struct Channel {
    std::string from;
    std::string to;
    std::uint64_t weight = 1;

    bool operator==(const Channel&) const = default;
};

/// Ordered (source, target) pair identifying a channel. Parallel channels
/// between the same ordered pair are not allowed, so the key is unique.
struct ChannelKey {
    std::string from;
    std::string to;

    auto operator<=>(const ChannelKey&) const = default;
};

/// Weighted arc of the instruction graph; weights are restricted to 1 and 2.
struct InstructionEdge {
    std::string from;
    std::string to;
    int weight = 1;

    bool operator==(const InstructionEdge&) const = default;
};

/// Entry of the instruction-channel relation: activating `instruction` opens
/// `channel`. Each instruction appears in at most one attachment; a channel
/// may appear in many.
struct Attachment {
    std::string instruction;
    ChannelKey channel;

    bool operator==(const Attachment&) const = default;
};

/// Complete static description of a virus machine: hosts and channels (host
/// graph), instructions and their edges (instruction graph), attachments
/// (instruction-channel graph), initial virus counts and the initial
/// instruction. Virus objects carry no identity, only counts.
///
/// Declaration order of hosts and instructions is canonical: it fixes tie
/// ordering for nondeterministic choices and the serialized form. Machines
/// are plain values; once validated they are treated as immutable and may be
/// shared freely across threads.
struct VirusMachine {
    std::string name;
    std::vector<Host> hosts;
    std::vector<Channel> channels;
    std::vector<std::string> instructions;
    std::vector<InstructionEdge> instruction_edges;
    std::vector<Attachment> attachments;
    std::string initial_instruction;

    std::optional<std::size_t> host_index(std::string_view id) const;
    std::optional<std::size_t> instruction_index(std::string_view id) const;
    const Channel* find_channel(std::string_view from, std::string_view to) const;
    const Attachment* attachment_of(std::string_view instruction) const;

    bool operator==(const VirusMachine&) const = default;
};

/// Structural validation result. Every violated invariant yields one entry
/// naming the offender; an empty report means the machine is valid.
struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every structural constraint: unique ids, reserved environment id,
/// channel weights >= 1, no self-channels, no channels sourced at the
/// environment, instruction edge weights in {1,2}, no duplicate arcs, no
/// dangling references, at most one attachment per instruction, declared
/// initial instruction. Violations are reported, never thrown.
ValidationReport validate_machine(const VirusMachine& m);

/// Snapshot of a computation at one instant: per-host virus counts (aligned
/// with VirusMachine::hosts), the next instruction to activate (kHaltMarker
/// once halted), the environment count and the step index. A halted
/// configuration has no successors; env_count never decreases along a trace.
struct Configuration {
    std::vector<std::uint64_t> host_counts;
    std::int32_t next_instruction = kHaltMarker;
    std::uint64_t env_count = 0;
    std::uint32_t step_index = 0;

    bool halted() const { return next_instruction == kHaltMarker; }

    // Lexicographic order (counts, next, env, step) is the canonical
    // frontier order used by the exploration engine.
    auto operator<=>(const Configuration&) const = default;
};

/// (n_1,...,n_p, i_1, 0): initial counts, initial instruction, empty
/// environment. Refuses invalid machines.
Configuration initial_configuration(const VirusMachine& m);

/// Convenience constructor used by tests and the CLI: `next` is an
/// instruction id or "#" for the halt marker.
Configuration make_configuration(const VirusMachine& m, std::vector<std::uint64_t> counts,
                                 std::string_view next, std::uint64_t env_count,
                                 std::uint32_t step_index = 0);

/// Renders a configuration as the usual tuple, e.g. "(1, 2, i1, 1)".
std::string describe(const VirusMachine& m, const Configuration& c);

}  // namespace vmkit
