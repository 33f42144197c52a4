#include "vmkit/analysis.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace vmkit {

Adjacency host_adjacency(const VirusMachine& m) {
    Adjacency g(m.hosts.size());
    for (const auto& c : m.channels) {
        if (c.to == kEnvironmentId) continue;
        const auto from = m.host_index(c.from);
        const auto to = m.host_index(c.to);
        if (from && to) g[*from].push_back(static_cast<std::int32_t>(*to));
    }
    return g;
}

Adjacency instruction_adjacency(const VirusMachine& m) {
    Adjacency g(m.instructions.size());
    for (const auto& e : m.instruction_edges) {
        const auto from = m.instruction_index(e.from);
        const auto to = m.instruction_index(e.to);
        if (from && to) g[*from].push_back(static_cast<std::int32_t>(*to));
    }
    return g;
}

std::vector<std::string> reachable_instructions(const VirusMachine& m) {
    const auto initial = m.instruction_index(m.initial_instruction);
    if (!initial) throw Error("initial instruction '" + m.initial_instruction + "' is not declared");

    const Adjacency g = instruction_adjacency(m);
    std::vector<char> seen(g.size(), 0);
    std::vector<std::int32_t> stack{static_cast<std::int32_t>(*initial)};
    seen[*initial] = 1;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (const auto w : g[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }

    std::vector<std::string> result;
    for (std::size_t i = 0; i < m.instructions.size(); ++i) {
        if (seen[i]) result.push_back(m.instructions[i]);
    }
    return result;
}

VirusMachine prune_to_rooted_tree(const VirusMachine& m) {
    const auto reachable = reachable_instructions(m);
    const std::set<std::string> keep(reachable.begin(), reachable.end());

    VirusMachine pruned = m;
    pruned.instructions = reachable;
    pruned.instruction_edges.clear();
    for (const auto& e : m.instruction_edges) {
        if (keep.contains(e.from) && keep.contains(e.to)) pruned.instruction_edges.push_back(e);
    }
    pruned.attachments.clear();
    for (const auto& a : m.attachments) {
        if (keep.contains(a.instruction)) pruned.attachments.push_back(a);
    }
    return pruned;
}

std::size_t longest_simple_cycle(const Adjacency& g, std::size_t vertex_cap) {
    const std::size_t n = g.size();
    if (n > vertex_cap) {
        throw Error("cycle search refused: graph has " + std::to_string(n) +
                    " vertices, cap is " + std::to_string(vertex_cap));
    }

    std::size_t best = 0;
    std::vector<char> on_path(n, 0);

    // Anchor every cycle at its smallest vertex: explore simple paths using
    // only vertices >= anchor and close them back at the anchor.
    std::function<void(std::int32_t, std::int32_t, std::size_t)> extend =
        [&](std::int32_t anchor, std::int32_t v, std::size_t length) {
            for (const auto w : g[static_cast<std::size_t>(v)]) {
                if (w == anchor) {
                    best = std::max(best, length);
                } else if (w > anchor && !on_path[static_cast<std::size_t>(w)]) {
                    on_path[static_cast<std::size_t>(w)] = 1;
                    extend(anchor, w, length + 1);
                    on_path[static_cast<std::size_t>(w)] = 0;
                }
            }
        };

    for (std::size_t anchor = 0; anchor < n; ++anchor) {
        on_path[anchor] = 1;
        extend(static_cast<std::int32_t>(anchor), static_cast<std::int32_t>(anchor), 1);
        on_path[anchor] = 0;
    }
    return best;
}

namespace {

// Longest path (in edges) from every vertex of a DAG; throws on a cycle.
std::vector<std::size_t> longest_paths(const Adjacency& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> depth(n, 0);
    std::vector<char> state(n, 0);  // 0 unvisited, 1 on stack, 2 done

    std::function<std::size_t(std::size_t)> visit = [&](std::size_t v) -> std::size_t {
        if (state[v] == 1) throw Error("graph contains a cycle");
        if (state[v] == 2) return depth[v];
        state[v] = 1;
        std::size_t best = 0;
        for (const auto w : g[v]) best = std::max(best, 1 + visit(static_cast<std::size_t>(w)));
        state[v] = 2;
        depth[v] = best;
        return best;
    };

    for (std::size_t v = 0; v < n; ++v) visit(v);
    return depth;
}

}  // namespace

std::size_t tree_depth(const Adjacency& g, std::int32_t root) {
    if (root < 0 || static_cast<std::size_t>(root) >= g.size()) {
        throw Error("tree depth: root index " + std::to_string(root) + " out of range");
    }
    return longest_paths(g)[static_cast<std::size_t>(root)];
}

IngredientProfile ingredient_profile(const VirusMachine& m, const GeneratedSetReport* enumeration,
                                     std::size_t cycle_vertex_cap) {
    IngredientProfile profile;
    profile.hosts_p = m.hosts.size();
    profile.instructions_q = m.instructions.size();

    std::set<ChannelKey> attached_channels;
    profile.beta = true;
    for (const auto& a : m.attachments) {
        if (!attached_channels.insert(a.channel).second) profile.beta = false;
    }

    profile.wc_s = 1;
    for (const auto& c : m.channels) profile.wc_s = std::max(profile.wc_s, c.weight);

    profile.outd_t = 0;
    for (const auto& h : m.hosts) {
        std::size_t degree = 0;
        for (const auto& c : m.channels) {
            if (c.from == h.id) ++degree;
        }
        profile.outd_t = std::max(profile.outd_t, degree);
    }

    profile.alpha_host_u = longest_simple_cycle(host_adjacency(m), cycle_vertex_cap);
    profile.alpha_inst_v = longest_simple_cycle(instruction_adjacency(m), cycle_vertex_cap);

    if (enumeration != nullptr) {
        profile.nvh_r = enumeration->observed_nvh;
        profile.nvh_exact = enumeration->exact;
    }
    return profile;
}

std::uint64_t acyclic_host_bound(const VirusMachine& m) {
    const Adjacency g = host_adjacency(m);
    if (longest_simple_cycle(g) > 0) {
        throw Error("output bound requires an acyclic host graph");
    }

    // max_product[h]: largest product of channel weights along a path from h
    // to the environment, 0 when no path reaches it.
    const std::size_t n = m.hosts.size();
    std::vector<std::uint64_t> max_product(n, 0);
    std::vector<char> done(n, 0);

    std::function<std::uint64_t(std::size_t)> product = [&](std::size_t h) -> std::uint64_t {
        if (done[h]) return max_product[h];
        done[h] = 1;
        std::uint64_t best = 0;
        for (const auto& c : m.channels) {
            if (c.from != m.hosts[h].id) continue;
            if (c.to == kEnvironmentId) {
                best = std::max(best, c.weight);
            } else {
                best = std::max(best, checked_mul(c.weight, product(*m.host_index(c.to))));
            }
        }
        max_product[h] = best;
        return best;
    };

    std::uint64_t bound = 0;
    for (std::size_t h = 0; h < n; ++h) {
        bound = checked_add(bound, checked_mul(m.hosts[h].initial_viruses, product(h)));
    }
    return bound;
}

bool ClassificationReport::has(std::string_view family, Verdict verdict) const {
    return std::any_of(entries.begin(), entries.end(), [&](const ClassificationEntry& e) {
        return e.family == family && e.verdict == verdict;
    });
}

bool ClassificationReport::has_rule(std::string_view rule_id) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const ClassificationEntry& e) { return e.rule_id == rule_id; });
}

namespace {

struct ResourceRow {
    const char* rule_id;
    const char* family;
    bool requires_beta;  // row demands the one-instruction-per-channel flag
    // Bounds per ingredient; nullopt = unbounded.
    std::optional<std::uint64_t> p, q, r, s, t, u, v;
};

// The "=" characterization rows of the resource table, in the order they
// are stated. Inclusion-only rows are deliberately absent: fitting them
// proves nothing about the generated set.
constexpr std::optional<std::uint64_t> kAny = std::nullopt;
const ResourceRow kResourceRows[] = {
    {"row-singleton", "Singleton", true, 1, 1, 1, 1, 1, 0, 0},
    {"row-finite-one-host", "NFIN", false, 1, kAny, kAny, 1, 1, 0, 0},
    {"row-finite-one-virus", "NFIN", true, kAny, kAny, 1, kAny, 1, 0, 0},
    {"row-finite-two-hosts", "NFIN", false, 2, kAny, 2, 2, 2, 2, 0},
    {"row-slin-bounded-viruses", "SLIN-signature", true, kAny, kAny, 2, kAny, 2, 2, 3},
    {"row-slin-two-hosts", "SLIN-signature", false, 2, kAny, 2, 2, 2, 2, kAny},
    {"row-nre-weight-two", "NRE-signature", false, kAny, kAny, kAny, 2, kAny, kAny, kAny},
};

bool fits(std::optional<std::uint64_t> bound, std::uint64_t value) {
    return !bound || value <= *bound;
}

bool matches_row(const IngredientProfile& profile, const ResourceRow& row) {
    if (row.requires_beta && !profile.beta) return false;
    // Signature matches are informational; nvh is taken as observed, which
    // is only a lower bound when the enumeration was truncated.
    if (row.r && (!profile.nvh_r || *profile.nvh_r > *row.r)) return false;
    return fits(row.p, profile.hosts_p) && fits(row.q, profile.instructions_q) &&
           fits(row.s, profile.wc_s) && fits(row.t, profile.outd_t) &&
           fits(row.u, profile.alpha_host_u) && fits(row.v, profile.alpha_inst_v);
}

std::string row_description(const ResourceRow& row) {
    auto render = [](std::optional<std::uint64_t> bound) {
        return bound ? std::to_string(*bound) : std::string("*");
    };
    return std::string("hosts<=") + render(row.p) + " instructions<=" + render(row.q) +
           " nvh<=" + render(row.r) + " wc<=" + render(row.s) + " outd<=" + render(row.t) +
           " host-cycle<=" + render(row.u) + " instruction-cycle<=" + render(row.v) +
           (row.requires_beta ? " beta=T" : "");
}

}  // namespace

ClassificationReport classify(const VirusMachine& m, const IngredientProfile& profile) {
    ClassificationReport report;
    auto add = [&report](std::string rule, std::string family, Verdict verdict,
                         std::string justification) {
        report.entries.push_back(
            {std::move(rule), std::move(family), verdict, std::move(justification)});
    };

    if (profile.alpha_host_u == 0) {
        const auto bound = acyclic_host_bound(m);
        add("acyclic-host-graph", "NFIN", Verdict::Proven,
            "the host graph is acyclic, so every generated number is at most " +
                std::to_string(bound));
    }

    const VirusMachine pruned = prune_to_rooted_tree(m);
    const Adjacency pruned_instructions = instruction_adjacency(pruned);
    const std::size_t q_reachable = pruned.instructions.size();

    if (longest_simple_cycle(pruned_instructions) == 0) {
        const auto root = static_cast<std::int32_t>(*pruned.instruction_index(pruned.initial_instruction));
        const std::size_t depth = tree_depth(pruned_instructions, root);
        add("acyclic-instruction-graph", "NFIN", Verdict::Proven,
            "the reachable instruction graph is acyclic, so every computation halts within " +
                std::to_string(depth + 1) + " transitions");
    }

    if (q_reachable == 1) {
        add("single-instruction", "Singleton", Verdict::Proven,
            "only one instruction is reachable, so at most one number is generated");
    }
    if (profile.hosts_p == 1 && profile.nvh_r && *profile.nvh_r <= 1 && profile.nvh_exact) {
        add("one-host-one-virus", "Singleton", Verdict::Proven,
            "one host holding at most one virus can emit through one channel at most once");
    }
    if (q_reachable <= 2) {
        add("two-instructions", "NLinFIN", Verdict::Proven,
            "machines with at most two instructions generate finite linear progressions");
    }
    if (q_reachable <= 3) {
        add("three-instructions", "NCombFIN", Verdict::Proven,
            "machines with at most three instructions generate finite linear combinations");
    }

    for (const auto& row : kResourceRows) {
        if (matches_row(profile, row)) {
            std::string note = "matches resource signature " + row_description(row);
            if (row.r && !profile.nvh_exact) note += " (nvh observed, not certified)";
            add(row.rule_id, row.family, Verdict::SignatureMatch, std::move(note));
        }
    }
    return report;
}

}  // namespace vmkit
