#include <doctest.h>

#include <algorithm>
#include <random>

#include "generators.hpp"
#include "vmkit/constructions.hpp"
#include "vmkit/machine.hpp"

using namespace vmkit;

TEST_CASE("worked example machine validates cleanly") {
    const auto report = validate_machine(build_example());
    CHECK(report.ok());
    CHECK(report.violations.empty());
}

TEST_CASE("an instruction with two attachments is reported by name") {
    auto m = build_example();
    m.attachments.push_back({"i1", {"h2", "h0"}});
    const auto report = validate_machine(m);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0] == "instruction 'i1' has more than one attachment");
}

TEST_CASE("a zero-weight channel is reported by channel name") {
    auto m = build_example();
    m.channels[0].weight = 0;
    const auto report = validate_machine(m);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].find("(h1,h0)") != std::string::npos);
    CHECK(report.violations[0].find("weight") != std::string::npos);
}

TEST_CASE("structural violations are each reported") {
    VirusMachine m;
    m.name = "broken";
    m.hosts = {{"h1", 1}, {"h1", 2}, {"h0", 0}};
    m.channels = {{"h1", "h1", 1}, {"h0", "h1", 1}, {"hx", "h1", 1}, {"h1", "hy", 1},
                  {"h1", "h0", 1}, {"h1", "h0", 2}};
    m.instructions = {"i1", "i1"};
    m.instruction_edges = {{"i1", "i1", 3}, {"ix", "i1", 1}, {"i1", "iy", 1}};
    m.attachments = {{"iz", {"h1", "h0"}}, {"i1", {"h9", "h9"}}};
    m.initial_instruction = "nope";

    const auto report = validate_machine(m);
    auto has = [&report](const char* needle) {
        return std::any_of(report.violations.begin(), report.violations.end(),
                           [needle](const std::string& v) { return v.find(needle) != std::string::npos; });
    };
    CHECK(has("duplicate host id 'h1'"));
    CHECK(has("reserved for the environment"));
    CHECK(has("source and target must differ"));
    CHECK(has("environment cannot be a channel source"));
    CHECK(has("unknown source host 'hx'"));
    CHECK(has("unknown target host 'hy'"));
    CHECK(has("duplicate channel (h1,h0)"));
    CHECK(has("duplicate instruction id 'i1'"));
    CHECK(has("weight must be 1 or 2"));
    CHECK(has("unknown instruction 'ix'"));
    CHECK(has("unknown instruction 'iy'"));
    CHECK(has("attachment references unknown instruction 'iz'"));
    CHECK(has("unknown channel (h9,h9)"));
    CHECK(has("initial instruction 'nope' is not declared"));
}

TEST_CASE("initial configurations") {
    SUBCASE("worked example starts at (2,2,i1,0)") {
        const auto m = build_example();
        const auto c = initial_configuration(m);
        CHECK(c == make_configuration(m, {2, 2}, "i1", 0));
    }
    SUBCASE("naturals machine starts at (1,0,i1,0)") {
        const auto m = build_nat();
        const auto c = initial_configuration(m);
        CHECK(c == make_configuration(m, {1, 0}, "i1", 0));
    }
    SUBCASE("all-zero machine starts with all-zero counts") {
        VirusMachine m;
        m.name = "zeros";
        m.hosts = {{"h1", 0}, {"h2", 0}};
        m.instructions = {"i1"};
        m.initial_instruction = "i1";
        const auto c = initial_configuration(m);
        CHECK(c.host_counts == std::vector<std::uint64_t>{0, 0});
        CHECK(c.env_count == 0);
        CHECK(c.step_index == 0);
        CHECK_FALSE(c.halted());
    }
    SUBCASE("invalid machines are refused") {
        VirusMachine m;
        m.name = "invalid";
        m.hosts = {{"h0", 1}};
        m.instructions = {"i1"};
        m.initial_instruction = "i1";
        CHECK_THROWS_AS((void)initial_configuration(m), Error);
    }
}

TEST_CASE("validation is idempotent and permutation-insensitive") {
    std::mt19937 rng(20240901);
    for (int round = 0; round < 40; ++round) {
        auto m = vmkit::testing::random_machine(rng, 3, 4);
        // Half the rounds damage the machine so invalid reports are
        // exercised as well.
        if (round % 2 == 1 && !m.channels.empty()) {
            m.channels.push_back(m.channels.front());
            m.attachments.push_back({m.instructions.front(), {"no", "pe"}});
        }

        auto sorted_violations = [](const VirusMachine& machine) {
            auto v = validate_machine(machine).violations;
            std::sort(v.begin(), v.end());
            return v;
        };
        const auto baseline = sorted_violations(m);
        CHECK(sorted_violations(m) == baseline);  // idempotent

        auto shuffled = m;
        std::shuffle(shuffled.hosts.begin(), shuffled.hosts.end(), rng);
        std::shuffle(shuffled.channels.begin(), shuffled.channels.end(), rng);
        std::shuffle(shuffled.instructions.begin(), shuffled.instructions.end(), rng);
        std::shuffle(shuffled.instruction_edges.begin(), shuffled.instruction_edges.end(), rng);
        std::shuffle(shuffled.attachments.begin(), shuffled.attachments.end(), rng);
        CHECK(sorted_violations(shuffled) == baseline);
    }
}

TEST_CASE("the environment id never appears among the hosts of a valid machine") {
    std::mt19937 rng(7);
    for (int round = 0; round < 20; ++round) {
        const auto m = vmkit::testing::random_machine(rng);
        REQUIRE(validate_machine(m).ok());
        CHECK_FALSE(m.host_index(kEnvironmentId).has_value());
        CHECK(m.instruction_index(m.initial_instruction).has_value());
    }
}

TEST_CASE("checked arithmetic reports overflow") {
    CHECK(checked_add(2, 3) == 5);
    CHECK(checked_mul(6, 7) == 42);
    CHECK_THROWS_AS((void)checked_add(~0ull, 1), Error);
    CHECK_THROWS_AS((void)checked_mul(~0ull, 2), Error);
}
