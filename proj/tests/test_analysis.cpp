#include <doctest.h>

#include <algorithm>
#include <random>

#include "generators.hpp"
#include "vmkit/analysis.hpp"
#include "vmkit/constructions.hpp"
#include "vmkit/io.hpp"

using namespace vmkit;

namespace {

VirusMachine nat_with_isolated_instruction() {
    auto m = build_nat();
    m.instructions.push_back("i5");
    return m;
}

}  // namespace

TEST_CASE("reachable_instructions") {
    CHECK(reachable_instructions(build_nat()) ==
          std::vector<std::string>{"i1", "i2", "i3", "i4"});
    CHECK(reachable_instructions(nat_with_isolated_instruction()) ==
          std::vector<std::string>{"i1", "i2", "i3", "i4"});

    VirusMachine single;
    single.name = "single";
    single.hosts = {{"h1", 0}};
    single.instructions = {"i1"};
    single.initial_instruction = "i1";
    CHECK(reachable_instructions(single) == std::vector<std::string>{"i1"});
}

TEST_CASE("prune_to_rooted_tree") {
    SUBCASE("drops the isolated instruction") {
        const auto pruned = prune_to_rooted_tree(nat_with_isolated_instruction());
        CHECK(pruned.instructions.size() == 4);
        CHECK(pruned == build_nat());
    }
    SUBCASE("is the identity on already-rooted machines") {
        const auto m = build_example();
        CHECK(prune_to_rooted_tree(m) == m);
    }
    SUBCASE("preserves the generated set of the worked example plus junk") {
        std::mt19937 rng(11);
        const auto augmented = vmkit::testing::augment_with_junk(build_example(), rng);
        REQUIRE(validate_machine(augmented).ok());
        const auto pruned = prune_to_rooted_tree(augmented);
        CHECK(pruned.instructions.size() == 4);
        const ExplorationBounds bounds{.max_steps = 10};
        CHECK(report_to_json(enumerate_generated_set(pruned, bounds)) ==
              report_to_json(enumerate_generated_set(augmented, bounds)));
    }
}

TEST_CASE("longest_simple_cycle") {
    CHECK(longest_simple_cycle(instruction_adjacency(build_nat())) == 3);
    CHECK(longest_simple_cycle(host_adjacency(build_nat())) == 2);
    CHECK(longest_simple_cycle({{1}, {2}, {3}, {}}) == 0);  // chain
    CHECK(longest_simple_cycle({{0}}) == 1);                // self-loop
    CHECK(longest_simple_cycle({{1}, {2}, {0, 1}}) == 3);   // nested cycles
    CHECK_THROWS_WITH_AS((void)longest_simple_cycle(Adjacency(65), 64),
                         doctest::Contains("cap"), Error);
}

TEST_CASE("cycle-free is equivalent to a successful topological sort") {
    std::mt19937 rng(2718);
    for (int round = 0; round < 120; ++round) {
        const std::size_t n = vmkit::testing::pick(rng, 1, 7);
        Adjacency g(n);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t w = 0; w < n; ++w) {
                if (vmkit::testing::chance(rng, 0.2)) {
                    g[v].push_back(static_cast<std::int32_t>(w));
                }
            }
        }
        CHECK((longest_simple_cycle(g) == 0) == vmkit::testing::toposort_succeeds(g));
    }
}

TEST_CASE("tree_depth") {
    CHECK(tree_depth({{1}, {2}, {3}, {}}, 0) == 3);  // chain of four
    CHECK(tree_depth({{}}, 0) == 0);                 // single vertex
    CHECK(tree_depth(instruction_adjacency(build_singleton(5)), 0) == 0);
    CHECK_THROWS_WITH_AS((void)tree_depth({{1}, {0}}, 0), doctest::Contains("cycle"), Error);
    CHECK_THROWS_AS((void)tree_depth({{}}, 3), Error);
}

TEST_CASE("ingredient profiles of the construction machines") {
    SUBCASE("arithmetic progression machine") {
        const auto m = build_arith(2, 3);
        const auto report = enumerate_generated_set(m, {.max_steps = 40});
        const auto p = ingredient_profile(m, &report);
        CHECK_FALSE(p.beta);
        CHECK(p.hosts_p == 2);
        CHECK(p.instructions_q == 15);
        CHECK(p.nvh_r == 2);
        CHECK(p.wc_s == 2);
        CHECK(p.outd_t == 2);
        CHECK(p.alpha_host_u == 2);
        CHECK(p.alpha_inst_v == 6);
    }
    SUBCASE("singleton machine") {
        const auto m = build_singleton(5);
        const auto report = enumerate_generated_set(m, {.max_steps = 3});
        const auto p = ingredient_profile(m, &report);
        CHECK(p.beta);
        CHECK(p.hosts_p == 1);
        CHECK(p.instructions_q == 1);
        CHECK(p.nvh_r == 1);
        CHECK(p.nvh_exact);
        CHECK(p.wc_s == 5);
        CHECK(p.outd_t == 1);
        CHECK(p.alpha_host_u == 0);
        CHECK(p.alpha_inst_v == 0);
    }
    SUBCASE("worked example") {
        const auto m = build_example();
        const auto report = enumerate_generated_set(m, {.max_steps = 10});
        const auto p = ingredient_profile(m, &report);
        CHECK(p.beta);
        CHECK(p.hosts_p == 2);
        CHECK(p.instructions_q == 4);
        CHECK(p.nvh_r == 2);
        CHECK(p.nvh_exact);
        CHECK(p.wc_s == 2);
        CHECK(p.outd_t == 2);
        // The three reconstructed channels form no cycle; the only loop in
        // the machine is the self-edge on the first instruction.
        CHECK(p.alpha_host_u == 0);
        CHECK(p.alpha_inst_v == 1);
    }
    SUBCASE("nvh is unknown without an enumeration") {
        const auto p = ingredient_profile(build_nat());
        CHECK_FALSE(p.nvh_r.has_value());
        CHECK_FALSE(p.nvh_exact);
    }
}

TEST_CASE("acyclic_host_bound") {
    SUBCASE("two-stage chain") {
        VirusMachine m;
        m.name = "chain-2-3";
        m.hosts = {{"h1", 1}, {"h2", 1}};
        m.channels = {{"h1", "h2", 2}, {"h2", "h0", 3}};
        m.instructions = {"i1"};
        m.initial_instruction = "i1";
        CHECK(acyclic_host_bound(m) == 9);  // 2*3*1 + 3*1
    }
    SUBCASE("hosts with no path to the environment contribute nothing") {
        VirusMachine m;
        m.name = "stranded";
        m.hosts = {{"h1", 5}, {"h2", 1}};
        m.channels = {{"h2", "h0", 4}};
        m.instructions = {"i1"};
        m.initial_instruction = "i1";
        CHECK(acyclic_host_bound(m) == 4);
    }
    SUBCASE("singleton machine is bounded by its own value") {
        for (const std::uint64_t v : {1ull, 7ull, 100ull}) {
            CHECK(acyclic_host_bound(build_singleton(v)) == v);
        }
    }
    SUBCASE("cyclic host graphs are refused") {
        CHECK_THROWS_WITH_AS((void)acyclic_host_bound(build_nat()), doctest::Contains("acyclic"),
                             Error);
    }
}

TEST_CASE("classification") {
    SUBCASE("acyclic instruction graph proves finiteness") {
        const auto m = build_finite_set({2, 5});
        const auto report = enumerate_generated_set(m, {.max_steps = 20});
        const auto c = classify(m, ingredient_profile(m, &report));
        CHECK(c.has("NFIN", Verdict::Proven));
        CHECK(c.has_rule("acyclic-instruction-graph"));
        CHECK_FALSE(c.has_rule("acyclic-host-graph"));  // shuttle hosts form a cycle
    }
    SUBCASE("singleton machine is classified as a singleton") {
        const auto m = build_singleton(3);
        const auto report = enumerate_generated_set(m, {.max_steps = 3});
        const auto c = classify(m, ingredient_profile(m, &report));
        CHECK(c.has("Singleton", Verdict::Proven));
        CHECK(c.has("NFIN", Verdict::Proven));
    }
    SUBCASE("arith(1,1) gets no finiteness verdict but fits the two-host row") {
        const auto m = build_arith(1, 1);
        const auto report = enumerate_generated_set(m, {.max_steps = 40});
        const auto c = classify(m, ingredient_profile(m, &report));
        CHECK_FALSE(c.has("NFIN", Verdict::Proven));
        CHECK_FALSE(c.has("Singleton", Verdict::Proven));
        CHECK(c.has_rule("row-slin-two-hosts"));
        CHECK_FALSE(c.has_rule("row-slin-bounded-viruses"));  // needs one instruction per channel
        CHECK(c.has("SLIN-signature", Verdict::SignatureMatch));
    }
    SUBCASE("two reachable instructions prove a linear progression family") {
        const auto m = build_lin_fin(1, 2, 3);
        const auto report = enumerate_generated_set(m, {.max_steps = 10});
        const auto c = classify(m, ingredient_profile(m, &report));
        CHECK(c.has("NLinFIN", Verdict::Proven));
        CHECK(c.has("NCombFIN", Verdict::Proven));
    }
}

TEST_CASE("profile ingredients under pruning: s, t, u fixed; beta, v move one way only") {
    std::mt19937 rng(5150);
    for (int round = 0; round < 40; ++round) {
        const auto m = vmkit::testing::random_machine(rng, 3, 5);
        const auto augmented = vmkit::testing::augment_with_junk(m, rng);
        const auto before = ingredient_profile(augmented);
        const auto after = ingredient_profile(prune_to_rooted_tree(augmented));
        CHECK(after.wc_s == before.wc_s);
        CHECK(after.outd_t == before.outd_t);
        CHECK(after.alpha_host_u == before.alpha_host_u);
        CHECK(after.hosts_p == before.hosts_p);
        CHECK(after.alpha_inst_v <= before.alpha_inst_v);
        if (before.beta) CHECK(after.beta);  // pruning only removes attachments
    }
}
