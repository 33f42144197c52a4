#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vmkit/machine.hpp"
#include "vmkit/semantics.hpp"

namespace vmkit {

/// Adjacency lists over vertex indices.
using Adjacency = std::vector<std::vector<std::int32_t>>;

/// Host graph restricted to declared hosts. Channels into the environment
/// are omitted: the environment has no outgoing channels, so they can never
/// close a cycle.
Adjacency host_adjacency(const VirusMachine& m);

/// Instruction graph over instruction indices.
Adjacency instruction_adjacency(const VirusMachine& m);

/// Instructions reachable from the initial instruction (including it), in
/// declaration order. Only these can ever be activated.
std::vector<std::string> reachable_instructions(const VirusMachine& m);

/// Restricts the machine to the instructions reachable from the initial
/// instruction, dropping their dangling edges and attachments. Hosts,
/// channels and initial viruses are unchanged; the pruned machine has the
/// same computations as the original.
VirusMachine prune_to_rooted_tree(const VirusMachine& m);

/// Vertex count of the longest simple cycle (0 for acyclic graphs,
/// 1 for a self-loop). Exhaustive search, exponential in the worst case;
/// refuses graphs with more than vertex_cap vertices.
std::size_t longest_simple_cycle(const Adjacency& g, std::size_t vertex_cap = 64);

/// Number of edges on the longest path from `root` in an acyclic graph.
/// Throws if the graph contains a cycle.
std::size_t tree_depth(const Adjacency& g, std::int32_t root);

/// The resource tuple of a machine: instruction-per-channel flag, host and
/// instruction counts, observed per-host virus bound, maximum channel
/// weight, maximum host out-degree, and the longest simple cycles of the two
/// graphs. nvh_r comes from an enumeration report when one is supplied and
/// is otherwise unknown.
struct IngredientProfile {
    bool beta = true;
    std::size_t hosts_p = 0;
    std::size_t instructions_q = 0;
    std::optional<std::uint64_t> nvh_r;
    bool nvh_exact = false;
    std::uint64_t wc_s = 1;
    std::size_t outd_t = 0;
    std::size_t alpha_host_u = 0;
    std::size_t alpha_inst_v = 0;

    bool operator==(const IngredientProfile&) const = default;
};

IngredientProfile ingredient_profile(const VirusMachine& m,
                                     const GeneratedSetReport* enumeration = nullptr,
                                     std::size_t cycle_vertex_cap = 64);

/// Upper bound on any number the machine can generate when its host graph is
/// acyclic: for each host, the maximum product of channel weights along any
/// path to the environment (0 when no path reaches it), summed weighted by
/// the initial virus counts. Throws when the host graph has a cycle.
std::uint64_t acyclic_host_bound(const VirusMachine& m);

enum class Verdict {
    Proven,          // sufficient condition established for this machine
    SignatureMatch,  // resources fit a characterization row; informational
};

struct ClassificationEntry {
    std::string rule_id;
    std::string family;  // Singleton, NFIN, NLinFIN, NCombFIN, SLIN-signature, NRE-signature
    Verdict verdict = Verdict::SignatureMatch;
    std::string justification;
};

struct ClassificationReport {
    std::vector<ClassificationEntry> entries;

    bool has(std::string_view family, Verdict verdict) const;
    bool has_rule(std::string_view rule_id) const;
};

/// Applies the sufficient conditions (acyclic host graph => finite with an
/// explicit output bound; acyclic reachable instruction graph => all
/// computations halt within depth+1 transitions => finite; small reachable
/// instruction counts => singleton / linear / combination families) and then
/// reports which characterization resource rows the profile fits. Never
/// claims a family membership that would require deciding infinite behavior.
ClassificationReport classify(const VirusMachine& m, const IngredientProfile& profile);

}  // namespace vmkit
