#include <doctest.h>

#include <algorithm>

#include "vmkit/constructions.hpp"
#include "vmkit/io.hpp"

using namespace vmkit;

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t at = haystack.find(needle); at != std::string::npos;
         at = haystack.find(needle, at + needle.size())) {
        ++count;
    }
    return count;
}

std::vector<VirusMachine> construction_corpus() {
    return {
        build_example(),
        build_singleton(0),
        build_singleton(7),
        build_nat(),
        build_finite_set({1, 3}),
        build_finite_one_host({2, 4}),
        build_finite_one_virus({2, 4}),
        build_lin_fin(1, 2, 3),
        build_comb_a(1, 2, 1, 2, 2),
        build_comb_b(1, 1, 1, 2, 3),
        build_arith(2, 3),
        build_union({{2, 3}, {5, 1}}),
    };
}

}  // namespace

TEST_CASE("round-trip identity over the construction corpus") {
    for (const auto& m : construction_corpus()) {
        INFO(m.name);
        const auto text = serialize_machine(m);
        const auto parsed = parse_machine(text);
        CHECK(parsed == m);
        CHECK(serialize_machine(parsed) == text);
    }
}

TEST_CASE("serialization is byte-stable across calls") {
    const auto m = build_nat();
    CHECK(serialize_machine(m) == serialize_machine(m));
}

TEST_CASE("serialized arith(1,1) lists six instructions") {
    const auto text = serialize_machine(build_arith(1, 1));
    const auto parsed = parse_machine(text);
    CHECK(parsed.instructions.size() == 6);
}

TEST_CASE("malformed documents are rejected with context") {
    SUBCASE("unknown top-level key") {
        auto text = serialize_machine(build_example());
        text.insert(text.find("\"name\""), "\"mystery\": 1,\n  ");
        CHECK_THROWS_WITH_AS((void)parse_machine(text), doctest::Contains("unknown key"), Error);
    }
    SUBCASE("environment id under hosts") {
        auto m = build_singleton(2);
        m.hosts.push_back({"h9", 0});
        auto text = serialize_machine(m);
        const auto at = text.find("\"h9\"");
        text.replace(at, 4, "\"h0\"");
        CHECK_THROWS_WITH_AS((void)parse_machine(text), doctest::Contains("reserved"), Error);
    }
    SUBCASE("instruction edge weight outside {1,2}") {
        auto m = build_nat();
        m.instruction_edges[0].weight = 3;
        CHECK_THROWS_WITH_AS((void)parse_machine(serialize_machine(m)),
                             doctest::Contains("weight must be 1 or 2"), Error);
    }
    SUBCASE("missing key") {
        CHECK_THROWS_WITH_AS((void)parse_machine("{\"name\": \"x\"}"),
                             doctest::Contains("missing key"), Error);
    }
    SUBCASE("negative virus count") {
        auto text = serialize_machine(build_singleton(2));
        const auto at = text.find("\"viruses\": 1");
        text.replace(at, 12, "\"viruses\": -1");
        CHECK_THROWS_WITH_AS((void)parse_machine(text),
                             doctest::Contains("nonnegative integer"), Error);
    }
    SUBCASE("not json at all") {
        CHECK_THROWS_AS((void)parse_machine("hosts: nope"), Error);
    }
}

TEST_CASE("dot export") {
    SUBCASE("host layer of singleton(5): one box, one arc labeled 5") {
        const auto dot = export_dot(build_singleton(5), DotLayer::Host);
        CHECK(count_occurrences(dot, "shape=box") == 1);
        CHECK(count_occurrences(dot, "label=\"5\"") == 1);
        CHECK(dot.find("\"h1\" -> \"h0\"") != std::string::npos);
    }
    SUBCASE("weight-1 labels are omitted") {
        const auto dot = export_dot(build_nat(), DotLayer::Host);
        CHECK(dot.find("label=\"1\"") == std::string::npos);
        CHECK(dot.find("label=\"2\"") != std::string::npos);
    }
    SUBCASE("instruction layer of the naturals machine: 4 nodes, 4 arcs") {
        const auto dot = export_dot(build_nat(), DotLayer::Instruction);
        CHECK(count_occurrences(dot, "shape=circle") == 4);
        CHECK(count_occurrences(dot, " -> ") == 4);
    }
    SUBCASE("combined layer of the worked example has 3 dashed attachment edges") {
        const auto dot = export_dot(build_example(), DotLayer::Combined);
        CHECK(count_occurrences(dot, "style=dashed") == 3);
    }
    SUBCASE("deterministic output") {
        CHECK(export_dot(build_arith(1, 2), DotLayer::Combined) ==
              export_dot(build_arith(1, 2), DotLayer::Combined));
    }
}

TEST_CASE("report json carries the full result") {
    GeneratedSetReport report;
    report.numbers = {2, 4};
    report.exact = true;
    report.observed_nvh = 2;
    report.branch_count = 2;
    const auto text = report_to_json(report);
    CHECK(text.find("\"numbers\": [") != std::string::npos);
    CHECK(text.find("\"exact\": true") != std::string::npos);
    CHECK(text.find("\"observed_nvh\": 2") != std::string::npos);
}
