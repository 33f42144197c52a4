#include "vmkit/constructions.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace vmkit {

SetSpec SetSpec::singleton(std::uint64_t v) {
    SetSpec s;
    s.kind = Kind::Singleton;
    s.v = v;
    return s;
}

SetSpec SetSpec::finite_set(std::vector<std::uint64_t> elements) {
    SetSpec s;
    s.kind = Kind::FiniteSet;
    s.elements = std::move(elements);
    return s;
}

SetSpec SetSpec::nat() {
    SetSpec s;
    s.kind = Kind::Nat;
    return s;
}

SetSpec SetSpec::lin_fin(std::uint64_t x, std::uint64_t n, std::uint64_t big_n) {
    SetSpec s;
    s.kind = Kind::LinFin;
    s.x = x;
    s.n = n;
    s.big_n = big_n;
    return s;
}

SetSpec SetSpec::comb_a(std::uint64_t w1, std::uint64_t w2, std::uint64_t r, std::uint64_t n1,
                        std::uint64_t n2) {
    SetSpec s;
    s.kind = Kind::CombA;
    s.w1 = w1;
    s.w2 = w2;
    s.r = r;
    s.n1 = n1;
    s.n2 = n2;
    return s;
}

SetSpec SetSpec::comb_b(std::uint64_t w1, std::uint64_t w2, std::uint64_t r, std::uint64_t n1,
                        std::uint64_t n2) {
    SetSpec s = comb_a(w1, w2, r, n1, n2);
    s.kind = Kind::CombB;
    return s;
}

SetSpec SetSpec::arith(std::uint64_t n, std::uint64_t r) {
    SetSpec s;
    s.kind = Kind::Arith;
    s.arith_part = {n, r};
    return s;
}

SetSpec SetSpec::union_of(std::vector<ArithParams> parts) {
    SetSpec s;
    s.kind = Kind::Union;
    s.parts = std::move(parts);
    return s;
}

namespace {

void insert_arith(std::set<std::uint64_t>& out, const ArithParams& p, std::uint64_t cap) {
    if (p.n == 0) throw Error("arithmetic progression requires n >= 1");
    std::uint64_t value = checked_add(p.n, p.r);
    while (value <= cap) {
        out.insert(value);
        if (cap - value < p.n) break;
        value += p.n;
    }
}

}  // namespace

std::vector<std::uint64_t> predicted_set(const SetSpec& spec, std::uint64_t cap) {
    std::set<std::uint64_t> out;
    switch (spec.kind) {
        case SetSpec::Kind::Singleton:
            if (spec.v <= cap) out.insert(spec.v);
            break;
        case SetSpec::Kind::FiniteSet:
            for (const auto m : spec.elements) {
                if (m <= cap) out.insert(m);
            }
            break;
        case SetSpec::Kind::Nat:
            for (std::uint64_t v = 1; v <= cap; ++v) out.insert(v);
            break;
        case SetSpec::Kind::LinFin:
            // One transmission is unavoidable before the exit, so the
            // progression starts at i = 1.
            for (std::uint64_t i = 1; i <= spec.big_n; ++i) {
                const auto value = checked_add(spec.x, checked_mul(spec.n, i));
                if (value <= cap) out.insert(value);
            }
            break;
        case SetSpec::Kind::CombA:
            for (std::uint64_t x = 1; x <= spec.n1; ++x) {
                for (std::uint64_t y = 1; y <= spec.n2; ++y) {
                    const auto value = checked_add(
                        checked_add(checked_mul(spec.w1, x), checked_mul(spec.w2, y)), spec.r);
                    if (value <= cap) out.insert(value);
                }
            }
            break;
        case SetSpec::Kind::CombB: {
            const std::uint64_t lo = std::min(spec.n1, spec.n2);
            const std::uint64_t paired = checked_add(spec.w1, spec.w2);
            for (std::uint64_t x = 1; x < lo; ++x) {
                const auto value = checked_add(checked_mul(paired, x), spec.r);
                if (value <= cap) out.insert(value);
            }
            // Once the smaller host drains, only the other one keeps feeding.
            const std::uint64_t leftover = spec.n1 < spec.n2 ? spec.n2 - spec.n1 : spec.n1 - spec.n2;
            const std::uint64_t tail_weight = spec.n1 < spec.n2 ? spec.w2 : spec.w1;
            for (std::uint64_t y = 1; y <= leftover; ++y) {
                const auto value = checked_add(
                    checked_add(checked_mul(paired, lo), checked_mul(tail_weight, y)), spec.r);
                if (value <= cap) out.insert(value);
            }
            break;
        }
        case SetSpec::Kind::Arith:
            insert_arith(out, spec.arith_part, cap);
            break;
        case SetSpec::Kind::Union:
            for (const auto& part : spec.parts) insert_arith(out, part, cap);
            break;
    }
    return {out.begin(), out.end()};
}

namespace {

std::string instruction_name(std::uint64_t index) { return "i" + std::to_string(index); }

ChannelKey key(std::string from, std::string to) { return {std::move(from), std::move(to)}; }

}  // namespace

VirusMachine build_example() {
    VirusMachine m;
    m.name = "example";
    m.hosts = {{"h1", 2}, {"h2", 2}};
    m.channels = {{"h1", "h0", 1}, {"h2", "h1", 1}, {"h2", "h0", 2}};
    m.instructions = {"i1", "i2", "i3", "i4"};
    m.instruction_edges = {{"i1", "i1", 2}, {"i1", "i2", 1}, {"i2", "i3", 1}, {"i2", "i4", 1}};
    m.attachments = {{"i1", key("h1", "h0")}, {"i2", key("h2", "h1")}, {"i3", key("h2", "h0")}};
    m.initial_instruction = "i1";
    return m;
}

VirusMachine build_singleton(std::uint64_t v) {
    VirusMachine m;
    m.name = "singleton(" + std::to_string(v) + ")";
    m.hosts = {{"h1", 1}};
    m.channels = {{"h1", "h0", std::max<std::uint64_t>(v, 1)}};
    m.instructions = {"i1"};
    if (v >= 1) m.attachments = {{"i1", key("h1", "h0")}};
    m.initial_instruction = "i1";
    return m;
}

VirusMachine build_nat() {
    VirusMachine m;
    m.name = "nat";
    m.hosts = {{"h1", 1}, {"h2", 0}};
    m.channels = {{"h1", "h2", 2}, {"h2", "h0", 1}, {"h2", "h1", 1}};
    m.instructions = {"i1", "i2", "i3", "i4"};
    m.instruction_edges = {{"i1", "i2", 1}, {"i2", "i3", 1}, {"i3", "i1", 1}, {"i3", "i4", 1}};
    m.attachments = {{"i1", key("h1", "h2")}, {"i2", key("h2", "h1")}, {"i3", key("h2", "h0")}};
    m.initial_instruction = "i1";
    return m;
}

namespace {

std::vector<std::uint64_t> checked_elements(const std::vector<std::uint64_t>& elements,
                                            const char* what) {
    if (elements.empty()) throw Error(std::string(what) + " requires a nonempty set");
    std::set<std::uint64_t> sorted(elements.begin(), elements.end());
    if (sorted.contains(0)) throw Error(std::string(what) + " requires every element to be positive");
    return {sorted.begin(), sorted.end()};
}

std::string finite_name(const char* prefix, const std::vector<std::uint64_t>& elements) {
    std::string name = std::string(prefix) + "{";
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i) name += ",";
        name += std::to_string(elements[i]);
    }
    return name + "}";
}

}  // namespace

VirusMachine build_finite_set(const std::vector<std::uint64_t>& elements) {
    const auto sorted = checked_elements(elements, "finite set builder");
    const std::uint64_t last = sorted.back();

    VirusMachine m;
    m.name = finite_name("finite", sorted);
    m.hosts = {{"h1", 2}, {"h2", 0}};
    m.channels = {{"h1", "h2", 2}, {"h1", "h0", 1}, {"h2", "h1", 2}, {"h2", "h0", 1}};

    for (std::uint64_t j = 1; j <= 2 * last; ++j) m.instructions.push_back(instruction_name(j));

    for (std::uint64_t a = 1; a < 2 * last; ++a) {
        m.instruction_edges.push_back({instruction_name(a), instruction_name(a + 1), 1});
    }
    for (const auto element : sorted) {
        if (element == last) continue;  // the chain edge already lands on the terminal
        m.instruction_edges.push_back({instruction_name(2 * element - 1), instruction_name(2 * last), 1});
    }

    // Odd instructions emit, alternating source host; interior even
    // instructions shuttle the pair across (doubling the survivor); the
    // terminal opens the channel whose source is empty on arrival.
    for (std::uint64_t j = 0; j < last; ++j) {
        m.attachments.push_back(
            {instruction_name(2 * j + 1), j % 2 == 0 ? key("h1", "h0") : key("h2", "h0")});
    }
    for (std::uint64_t j = 1; j < last; ++j) {
        m.attachments.push_back(
            {instruction_name(2 * j), j % 2 == 1 ? key("h1", "h2") : key("h2", "h1")});
    }
    m.attachments.push_back(
        {instruction_name(2 * last), last % 2 == 1 ? key("h2", "h1") : key("h1", "h2")});

    m.initial_instruction = "i1";
    return m;
}

namespace {

// Shared layout of the two single-resource finite-set machines: a chain of
// emitting instructions with tie exits into a final unattached instruction
// at every element of F.
VirusMachine finite_chain(const std::vector<std::uint64_t>& sorted, VirusMachine m) {
    const std::uint64_t last = sorted.back();
    const std::string terminal = instruction_name(last + 1);

    for (std::uint64_t j = 1; j <= last + 1; ++j) m.instructions.push_back(instruction_name(j));
    for (std::uint64_t a = 1; a < last; ++a) {
        m.instruction_edges.push_back({instruction_name(a), instruction_name(a + 1), 1});
    }
    for (const auto element : sorted) {
        m.instruction_edges.push_back({instruction_name(element), terminal, 1});
    }
    m.initial_instruction = "i1";
    return m;
}

}  // namespace

VirusMachine build_finite_one_host(const std::vector<std::uint64_t>& elements) {
    const auto sorted = checked_elements(elements, "finite set builder");
    const std::uint64_t last = sorted.back();

    VirusMachine m;
    m.name = finite_name("finite-one-host", sorted);
    m.hosts = {{"h1", last}};
    m.channels = {{"h1", "h0", 1}};
    m = finite_chain(sorted, std::move(m));
    for (std::uint64_t j = 1; j <= last; ++j) {
        m.attachments.push_back({instruction_name(j), key("h1", "h0")});
    }
    return m;
}

VirusMachine build_finite_one_virus(const std::vector<std::uint64_t>& elements) {
    const auto sorted = checked_elements(elements, "finite set builder");
    const std::uint64_t last = sorted.back();

    VirusMachine m;
    m.name = finite_name("finite-one-virus", sorted);
    for (std::uint64_t j = 1; j <= last; ++j) {
        const std::string host = "h" + std::to_string(j);
        m.hosts.push_back({host, 1});
        m.channels.push_back({host, "h0", 1});
    }
    m = finite_chain(sorted, std::move(m));
    for (std::uint64_t j = 1; j <= last; ++j) {
        m.attachments.push_back({instruction_name(j), key("h" + std::to_string(j), "h0")});
    }
    return m;
}

VirusMachine build_lin_fin(std::uint64_t x, std::uint64_t n, std::uint64_t big_n) {
    if (n < 1 || big_n < 1) throw Error("linear progression builder requires n >= 1 and N >= 1");

    VirusMachine m;
    m.name = "lin(" + std::to_string(x) + "," + std::to_string(n) + "," + std::to_string(big_n) + ")";
    m.hosts = {{"h1", big_n}, {"h2", 1}};
    m.channels = {{"h1", "h0", n}, {"h2", "h0", std::max<std::uint64_t>(x, 1)}};
    m.instructions = {"i1", "i2"};
    m.instruction_edges = {{"i1", "i1", 1}, {"i1", "i2", 1}};
    m.attachments = {{"i1", key("h1", "h0")}};
    if (x >= 1) m.attachments.push_back({"i2", key("h2", "h0")});
    m.initial_instruction = "i1";
    return m;
}

namespace {

VirusMachine comb_base(const char* kind, std::uint64_t w1, std::uint64_t w2, std::uint64_t r,
                       std::uint64_t n1, std::uint64_t n2) {
    if (w1 < 1 || w2 < 1 || n1 < 1 || n2 < 1) {
        throw Error("combination builder requires w1, w2, N1, N2 >= 1");
    }
    VirusMachine m;
    m.name = std::string(kind) + "(" + std::to_string(w1) + "," + std::to_string(w2) + "," +
             std::to_string(r) + "," + std::to_string(n1) + "," + std::to_string(n2) + ")";
    m.hosts = {{"h1", n1}, {"h2", n2}, {"h3", 1}};
    m.channels = {{"h1", "h0", w1}, {"h2", "h0", w2}, {"h3", "h0", std::max<std::uint64_t>(r, 1)}};
    m.instructions = {"i1", "i2", "i3"};
    m.attachments = {{"i1", key("h1", "h0")}, {"i2", key("h2", "h0")}};
    if (r >= 1) m.attachments.push_back({"i3", key("h3", "h0")});
    m.initial_instruction = "i1";
    return m;
}

}  // namespace

VirusMachine build_comb_a(std::uint64_t w1, std::uint64_t w2, std::uint64_t r, std::uint64_t n1,
                          std::uint64_t n2) {
    VirusMachine m = comb_base("comb-a", w1, w2, r, n1, n2);
    m.instruction_edges = {{"i1", "i1", 1}, {"i1", "i2", 1}, {"i2", "i2", 1}, {"i2", "i3", 1}};
    return m;
}

VirusMachine build_comb_b(std::uint64_t w1, std::uint64_t w2, std::uint64_t r, std::uint64_t n1,
                          std::uint64_t n2) {
    VirusMachine m = comb_base("comb-b", w1, w2, r, n1, n2);
    m.instruction_edges = {{"i1", "i2", 1}, {"i2", "i1", 1}, {"i2", "i3", 1}};
    return m;
}

namespace {

// Attachment pattern of one three-instruction block: double the virus into
// h2, emit one from h2, return the survivor to h1.
ChannelKey arith_attachment(std::uint64_t position) {
    switch (position % 3) {
        case 1: return key("h1", "h2");
        case 2: return key("h2", "h0");
        default: return key("h2", "h1");
    }
}

void append_arith_block(VirusMachine& m, const std::string& prefix, std::uint64_t n,
                        std::uint64_t r) {
    const std::uint64_t total = 3 * (n + r);
    for (std::uint64_t j = 1; j <= total; ++j) {
        m.instructions.push_back(prefix + instruction_name(j));
    }
    for (std::uint64_t j = 1; j < total; ++j) {
        m.instruction_edges.push_back({prefix + instruction_name(j), prefix + instruction_name(j + 1), 1});
    }
    m.instruction_edges.push_back({prefix + instruction_name(3 * n), prefix + "i1", 1});
    for (std::uint64_t j = 1; j <= total; ++j) {
        m.attachments.push_back({prefix + instruction_name(j), arith_attachment(j)});
    }
}

}  // namespace

VirusMachine build_arith(std::uint64_t n, std::uint64_t r) {
    if (n < 1 || r < 1) throw Error("arithmetic progression builder requires n >= 1 and r >= 1");

    VirusMachine m;
    m.name = "arith(" + std::to_string(n) + "," + std::to_string(r) + ")";
    m.hosts = {{"h1", 1}, {"h2", 0}};
    m.channels = {{"h1", "h2", 2}, {"h2", "h0", 1}, {"h2", "h1", 1}};
    append_arith_block(m, "", n, r);
    m.initial_instruction = "i1";
    return m;
}

VirusMachine build_union(const std::vector<ArithParams>& parts) {
    if (parts.size() < 2) throw Error("union builder requires at least two parts");

    VirusMachine m;
    m.name = "union[";
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].n < 1 || parts[k].r < 1) {
            throw Error("arithmetic progression builder requires n >= 1 and r >= 1");
        }
        if (k) m.name += ",";
        m.name += "arith(" + std::to_string(parts[k].n) + "," + std::to_string(parts[k].r) + ")";
    }
    m.name += "]";

    m.hosts = {{"h1", 1}, {"h2", 0}};
    m.channels = {{"h1", "h2", 2}, {"h2", "h0", 1}, {"h2", "h1", 1}};
    m.instructions = {"i0"};
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const std::string prefix = "p" + std::to_string(k + 1) + ".";
        append_arith_block(m, prefix, parts[k].n, parts[k].r);
        m.instruction_edges.push_back({"i0", prefix + "i1", 1});
    }
    m.initial_instruction = "i0";
    return m;
}

}  // namespace vmkit
