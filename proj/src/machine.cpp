#include "vmkit/machine.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace vmkit {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
        throw Error("virus count overflow in addition");
    }
    return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        throw Error("virus count overflow in multiplication");
    }
    return a * b;
}

std::optional<std::size_t> VirusMachine::host_index(std::string_view id) const {
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        if (hosts[i].id == id) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> VirusMachine::instruction_index(std::string_view id) const {
    for (std::size_t i = 0; i < instructions.size(); ++i) {
        if (instructions[i] == id) return i;
    }
    return std::nullopt;
}

const Channel* VirusMachine::find_channel(std::string_view from, std::string_view to) const {
    for (const auto& c : channels) {
        if (c.from == from && c.to == to) return &c;
    }
    return nullptr;
}

const Attachment* VirusMachine::attachment_of(std::string_view instruction) const {
    for (const auto& a : attachments) {
        if (a.instruction == instruction) return &a;
    }
    return nullptr;
}

namespace {

std::string channel_name(const std::string& from, const std::string& to) {
    return "(" + from + "," + to + ")";
}

}  // namespace

ValidationReport validate_machine(const VirusMachine& m) {
    ValidationReport report;
    auto violation = [&report](std::string text) { report.violations.push_back(std::move(text)); };

    std::set<std::string> host_ids;
    for (const auto& h : m.hosts) {
        if (h.id == kEnvironmentId) {
            violation("host id 'h0' is reserved for the environment");
            continue;
        }
        if (!host_ids.insert(h.id).second) violation("duplicate host id '" + h.id + "'");
    }

    std::set<std::pair<std::string, std::string>> channel_keys;
    for (const auto& c : m.channels) {
        const std::string name = channel_name(c.from, c.to);
        if (c.weight < 1) violation("channel " + name + ": weight must be at least 1");
        if (c.from == c.to) violation("channel " + name + ": source and target must differ");
        if (c.from == kEnvironmentId) {
            violation("channel " + name + ": the environment cannot be a channel source");
        } else if (!host_ids.contains(c.from)) {
            violation("channel " + name + ": unknown source host '" + c.from + "'");
        }
        if (c.to != kEnvironmentId && !host_ids.contains(c.to)) {
            violation("channel " + name + ": unknown target host '" + c.to + "'");
        }
        if (!channel_keys.insert({c.from, c.to}).second) {
            violation("duplicate channel " + name);
        }
    }

    std::set<std::string> instruction_ids;
    for (const auto& i : m.instructions) {
        if (!instruction_ids.insert(i).second) violation("duplicate instruction id '" + i + "'");
    }

    std::set<std::pair<std::string, std::string>> edge_keys;
    for (const auto& e : m.instruction_edges) {
        const std::string name = channel_name(e.from, e.to);
        if (e.weight != 1 && e.weight != 2) {
            violation("instruction edge " + name + ": weight must be 1 or 2");
        }
        if (!instruction_ids.contains(e.from)) {
            violation("instruction edge " + name + ": unknown instruction '" + e.from + "'");
        }
        if (!instruction_ids.contains(e.to)) {
            violation("instruction edge " + name + ": unknown instruction '" + e.to + "'");
        }
        if (!edge_keys.insert({e.from, e.to}).second) {
            violation("duplicate instruction edge " + name);
        }
    }

    std::map<std::string, int> attachments_per_instruction;
    for (const auto& a : m.attachments) {
        const std::string name = channel_name(a.channel.from, a.channel.to);
        if (!instruction_ids.contains(a.instruction)) {
            violation("attachment references unknown instruction '" + a.instruction + "'");
        }
        if (!channel_keys.contains({a.channel.from, a.channel.to})) {
            violation("attachment of '" + a.instruction + "': unknown channel " + name);
        }
        if (++attachments_per_instruction[a.instruction] == 2) {
            violation("instruction '" + a.instruction + "' has more than one attachment");
        }
    }

    if (!instruction_ids.contains(m.initial_instruction)) {
        violation("initial instruction '" + m.initial_instruction + "' is not declared");
    }

    return report;
}

Configuration initial_configuration(const VirusMachine& m) {
    const auto report = validate_machine(m);
    if (!report.ok()) {
        std::string message = "invalid machine";
        if (!m.name.empty()) message += " '" + m.name + "'";
        message += ":";
        for (const auto& v : report.violations) message += "\n  - " + v;
        throw Error(message);
    }
    Configuration c;
    c.host_counts.reserve(m.hosts.size());
    for (const auto& h : m.hosts) c.host_counts.push_back(h.initial_viruses);
    c.next_instruction = static_cast<std::int32_t>(*m.instruction_index(m.initial_instruction));
    c.env_count = 0;
    c.step_index = 0;
    return c;
}

Configuration make_configuration(const VirusMachine& m, std::vector<std::uint64_t> counts,
                                 std::string_view next, std::uint64_t env_count,
                                 std::uint32_t step_index) {
    if (counts.size() != m.hosts.size()) {
        throw Error("configuration has " + std::to_string(counts.size()) + " host counts, machine has " +
                    std::to_string(m.hosts.size()) + " hosts");
    }
    Configuration c;
    c.host_counts = std::move(counts);
    if (next == "#") {
        c.next_instruction = kHaltMarker;
    } else {
        const auto idx = m.instruction_index(next);
        if (!idx) throw Error("unknown instruction '" + std::string(next) + "'");
        c.next_instruction = static_cast<std::int32_t>(*idx);
    }
    c.env_count = env_count;
    c.step_index = step_index;
    return c;
}

std::string describe(const VirusMachine& m, const Configuration& c) {
    std::ostringstream out;
    out << "(";
    for (const auto count : c.host_counts) out << count << ", ";
    if (c.halted()) {
        out << "#";
    } else if (c.next_instruction >= 0 &&
               static_cast<std::size_t>(c.next_instruction) < m.instructions.size()) {
        out << m.instructions[static_cast<std::size_t>(c.next_instruction)];
    } else {
        out << "?" << c.next_instruction;
    }
    out << ", " << c.env_count << ")";
    return out.str();
}

}  // namespace vmkit
