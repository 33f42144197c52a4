#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vmkit/machine.hpp"

namespace vmkit {

/// Parameters of one arithmetic-progression component {n*i + r : i >= 1}.
struct ArithParams {
    std::uint64_t n = 1;
    std::uint64_t r = 1;

    bool operator==(const ArithParams&) const = default;
};

/// Closed-form description of a set family, used as the expected value in
/// oracle comparisons against the corresponding builder.
struct SetSpec {
    enum class Kind {
        Singleton,
        FiniteSet,
        Nat,
        LinFin,
        CombA,
        CombB,
        Arith,
        Union,
    };

    Kind kind = Kind::Singleton;
    std::uint64_t v = 0;                       // Singleton
    std::vector<std::uint64_t> elements;       // FiniteSet
    std::uint64_t x = 0, n = 0, big_n = 0;     // LinFin
    std::uint64_t w1 = 0, w2 = 0, r = 0;       // CombA / CombB
    std::uint64_t n1 = 0, n2 = 0;              // CombA / CombB
    ArithParams arith_part;                         // Arith
    std::vector<ArithParams> parts;            // Union

    static SetSpec singleton(std::uint64_t v);
    static SetSpec finite_set(std::vector<std::uint64_t> elements);
    static SetSpec nat();
    static SetSpec lin_fin(std::uint64_t x, std::uint64_t n, std::uint64_t big_n);
    static SetSpec comb_a(std::uint64_t w1, std::uint64_t w2, std::uint64_t r, std::uint64_t n1,
                          std::uint64_t n2);
    static SetSpec comb_b(std::uint64_t w1, std::uint64_t w2, std::uint64_t r, std::uint64_t n1,
                          std::uint64_t n2);
    static SetSpec arith(std::uint64_t n, std::uint64_t r);
    static SetSpec union_of(std::vector<ArithParams> parts);
};

/// The closed-form set, keeping only values <= cap (the cap is what bounds
/// the infinite families). Sorted and deduplicated.
std::vector<std::uint64_t> predicted_set(const SetSpec& spec, std::uint64_t cap);

/// The degree-(2,4) worked example: generates {2, 4}.
VirusMachine build_example();

/// One host, one instruction; generates {v}. For v = 0 the instruction is
/// left unattached so nothing ever reaches the environment.
VirusMachine build_singleton(std::uint64_t v);

/// Two hosts, four instructions, a three-instruction loop emitting one virus
/// per pass; generates every natural number except zero.
VirusMachine build_nat();

/// Shuttle machine for a finite set F of positive numbers: an instruction
/// chain of length 2*max(F) bounces two viruses between the hosts, emitting
/// one per pair, with a tie exit to the terminal instruction at each element.
VirusMachine build_finite_set(const std::vector<std::uint64_t>& elements);

/// Single-host variant: max(F) viruses drained one at a time with tie exits
/// at each element of F.
VirusMachine build_finite_one_host(const std::vector<std::uint64_t>& elements);

/// Single-virus variant: one host per unit, each holding one virus.
VirusMachine build_finite_one_virus(const std::vector<std::uint64_t>& elements);

/// Two instructions; generates {x + n*i : 1 <= i <= N}. For x = 0 the exit
/// instruction is left unattached.
VirusMachine build_lin_fin(std::uint64_t x, std::uint64_t n, std::uint64_t big_n);

/// Three instructions with self-loops on the first two; generates
/// {w1*x + w2*y + r : 1 <= x <= N1, 1 <= y <= N2}.
VirusMachine build_comb_a(std::uint64_t w1, std::uint64_t w2, std::uint64_t r, std::uint64_t n1,
                          std::uint64_t n2);

/// Three instructions with a two-instruction loop; generates the paired
/// drain sets (see predicted_set for the closed form and its documented
/// boundary element).
VirusMachine build_comb_b(std::uint64_t w1, std::uint64_t w2, std::uint64_t r, std::uint64_t n1,
                          std::uint64_t n2);

/// 3(n+r) instructions in a loop-plus-tail layout; generates
/// {n*i + r : i >= 1}. Each three-instruction block doubles the single virus
/// across the hosts, emits one and restores the state.
VirusMachine build_arith(std::uint64_t n, std::uint64_t r);

/// Shared-host union of arithmetic progressions: an unattached initial
/// instruction branches nondeterministically into one block per part.
/// Requires at least two parts.
VirusMachine build_union(const std::vector<ArithParams>& parts);

}  // namespace vmkit
