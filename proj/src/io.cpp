#include "vmkit/io.hpp"

#include <json.hpp>

#include <sstream>

namespace vmkit {

namespace {

using Json = nlohmann::ordered_json;

void require_keys(const Json& object, std::initializer_list<const char*> keys,
                  const std::string& context) {
    for (const char* k : keys) {
        if (!object.contains(k)) {
            throw Error("machine document: " + context + ": missing key '" + k + "'");
        }
    }
    for (const auto& [k, _] : object.items()) {
        bool known = false;
        for (const char* expected : keys) {
            if (k == expected) {
                known = true;
                break;
            }
        }
        if (!known) throw Error("machine document: " + context + ": unknown key '" + k + "'");
    }
}

std::string get_string(const Json& object, const char* k, const std::string& context) {
    const auto& value = object.at(k);
    if (!value.is_string()) {
        throw Error("machine document: " + context + "." + k + ": expected a string");
    }
    return value.get<std::string>();
}

std::uint64_t get_uint(const Json& object, const char* k, const std::string& context) {
    const auto& value = object.at(k);
    if (!value.is_number_unsigned()) {
        throw Error("machine document: " + context + "." + k + ": expected a nonnegative integer");
    }
    return value.get<std::uint64_t>();
}

const Json& get_array(const Json& object, const char* k, const std::string& context) {
    const auto& value = object.at(k);
    if (!value.is_array()) {
        throw Error("machine document: " + context + "." + k + ": expected an array");
    }
    return value;
}

std::string item(const std::string& field, std::size_t index) {
    return field + "[" + std::to_string(index) + "]";
}

}  // namespace

VirusMachine parse_machine(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(std::string("machine document: ") + e.what());
    }
    if (!doc.is_object()) throw Error("machine document: expected a JSON object");
    require_keys(doc,
                 {"name", "hosts", "channels", "instructions", "instruction_edges", "attachments",
                  "initial_instruction"},
                 "top level");

    VirusMachine m;
    m.name = get_string(doc, "name", "top level");

    const auto& hosts = get_array(doc, "hosts", "top level");
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        const auto context = item("hosts", i);
        require_keys(hosts[i], {"id", "viruses"}, context);
        m.hosts.push_back({get_string(hosts[i], "id", context), get_uint(hosts[i], "viruses", context)});
    }

    const auto& channels = get_array(doc, "channels", "top level");
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto context = item("channels", i);
        require_keys(channels[i], {"from", "to", "weight"}, context);
        m.channels.push_back({get_string(channels[i], "from", context),
                              get_string(channels[i], "to", context),
                              get_uint(channels[i], "weight", context)});
    }

    const auto& instructions = get_array(doc, "instructions", "top level");
    for (std::size_t i = 0; i < instructions.size(); ++i) {
        if (!instructions[i].is_string()) {
            throw Error("machine document: " + item("instructions", i) + ": expected a string");
        }
        m.instructions.push_back(instructions[i].get<std::string>());
    }

    const auto& edges = get_array(doc, "instruction_edges", "top level");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto context = item("instruction_edges", i);
        require_keys(edges[i], {"from", "to", "weight"}, context);
        m.instruction_edges.push_back({get_string(edges[i], "from", context),
                                       get_string(edges[i], "to", context),
                                       static_cast<int>(get_uint(edges[i], "weight", context))});
    }

    const auto& attachments = get_array(doc, "attachments", "top level");
    for (std::size_t i = 0; i < attachments.size(); ++i) {
        const auto context = item("attachments", i);
        require_keys(attachments[i], {"instruction", "channel"}, context);
        const auto& channel = attachments[i].at("channel");
        if (!channel.is_object()) {
            throw Error("machine document: " + context + ".channel: expected an object");
        }
        require_keys(channel, {"from", "to"}, context + ".channel");
        m.attachments.push_back({get_string(attachments[i], "instruction", context),
                                 {get_string(channel, "from", context + ".channel"),
                                  get_string(channel, "to", context + ".channel")}});
    }

    m.initial_instruction = get_string(doc, "initial_instruction", "top level");

    const auto report = validate_machine(m);
    if (!report.ok()) {
        std::string message = "machine document failed validation:";
        for (const auto& v : report.violations) message += "\n  - " + v;
        throw Error(message);
    }
    return m;
}

std::string serialize_machine(const VirusMachine& m) {
    Json doc;
    doc["name"] = m.name;
    doc["hosts"] = Json::array();
    for (const auto& h : m.hosts) {
        doc["hosts"].push_back({{"id", h.id}, {"viruses", h.initial_viruses}});
    }
    doc["channels"] = Json::array();
    for (const auto& c : m.channels) {
        doc["channels"].push_back({{"from", c.from}, {"to", c.to}, {"weight", c.weight}});
    }
    doc["instructions"] = m.instructions;
    doc["instruction_edges"] = Json::array();
    for (const auto& e : m.instruction_edges) {
        doc["instruction_edges"].push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
    }
    doc["attachments"] = Json::array();
    for (const auto& a : m.attachments) {
        doc["attachments"].push_back(
            {{"instruction", a.instruction},
             {"channel", {{"from", a.channel.from}, {"to", a.channel.to}}}});
    }
    doc["initial_instruction"] = m.initial_instruction;
    return doc.dump(2) + "\n";
}

namespace {

std::string quoted(std::string_view id) {
    std::string out = "\"";
    out += id;
    out += "\"";
    return out;
}

void write_host_layer(const VirusMachine& m, std::ostringstream& out, const char* indent) {
    for (const auto& h : m.hosts) {
        out << indent << quoted(h.id) << " [shape=box, label=\"" << h.id << "\\n"
            << h.initial_viruses << "\"];\n";
    }
    out << indent << quoted(kEnvironmentId) << " [shape=plaintext, label=\"" << kEnvironmentId
        << "\"];\n";
    for (const auto& c : m.channels) {
        out << indent << quoted(c.from) << " -> " << quoted(c.to);
        if (c.weight != 1) out << " [label=\"" << c.weight << "\"]";
        out << ";\n";
    }
}

void write_instruction_layer(const VirusMachine& m, std::ostringstream& out, const char* indent) {
    for (const auto& i : m.instructions) {
        out << indent << quoted(i) << " [shape=circle];\n";
    }
    for (const auto& e : m.instruction_edges) {
        out << indent << quoted(e.from) << " -> " << quoted(e.to);
        if (e.weight != 1) out << " [label=\"" << e.weight << "\"]";
        out << ";\n";
    }
}

}  // namespace

std::string export_dot(const VirusMachine& m, DotLayer layer) {
    std::ostringstream out;
    switch (layer) {
        case DotLayer::Host:
            out << "digraph host_graph {\n  rankdir=LR;\n";
            write_host_layer(m, out, "  ");
            out << "}\n";
            break;
        case DotLayer::Instruction:
            out << "digraph instruction_graph {\n  rankdir=LR;\n";
            write_instruction_layer(m, out, "  ");
            out << "}\n";
            break;
        case DotLayer::Combined:
            out << "digraph machine {\n  rankdir=LR;\n";
            out << "  subgraph cluster_hosts {\n    label=\"hosts\";\n";
            write_host_layer(m, out, "    ");
            out << "  }\n";
            out << "  subgraph cluster_instructions {\n    label=\"instructions\";\n";
            write_instruction_layer(m, out, "    ");
            out << "  }\n";
            for (const auto& a : m.attachments) {
                out << "  " << quoted(a.instruction) << " -> " << quoted(a.channel.from)
                    << " [style=dashed, label=\"(" << a.channel.from << "," << a.channel.to
                    << ")\"];\n";
            }
            out << "}\n";
            break;
    }
    return out.str();
}

std::string report_to_json(const GeneratedSetReport& report) {
    Json doc;
    doc["numbers"] = report.numbers;
    doc["exact"] = report.exact;
    doc["observed_nvh"] = report.observed_nvh;
    doc["branch_count"] = report.branch_count;
    doc["truncated_branch_count"] = report.truncated_branch_count;
    return doc.dump(2) + "\n";
}

std::string profile_to_json(const IngredientProfile& profile) {
    Json doc;
    doc["beta"] = profile.beta;
    doc["hosts"] = profile.hosts_p;
    doc["instructions"] = profile.instructions_q;
    if (profile.nvh_r) {
        doc["nvh"] = *profile.nvh_r;
    } else {
        doc["nvh"] = nullptr;
    }
    doc["nvh_exact"] = profile.nvh_exact;
    doc["max_channel_weight"] = profile.wc_s;
    doc["max_host_out_degree"] = profile.outd_t;
    doc["longest_host_cycle"] = profile.alpha_host_u;
    doc["longest_instruction_cycle"] = profile.alpha_inst_v;
    return doc.dump(2) + "\n";
}

std::string classification_to_json(const ClassificationReport& report) {
    Json entries = Json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"rule", e.rule_id},
                           {"family", e.family},
                           {"verdict", e.verdict == Verdict::Proven ? "proven" : "signature"},
                           {"justification", e.justification}});
    }
    Json doc;
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

std::string trace_to_json(const VirusMachine& m, const ComputationTrace& trace) {
    Json configurations = Json::array();
    for (const auto& c : trace.configurations) {
        Json entry;
        entry["step"] = c.step_index;
        entry["counts"] = c.host_counts;
        entry["next"] = c.halted() ? "#" : m.instructions[static_cast<std::size_t>(c.next_instruction)];
        entry["environment"] = c.env_count;
        configurations.push_back(std::move(entry));
    }
    Json choices = Json::array();
    for (const auto& choice : trace.choices) {
        Json tie = Json::array();
        for (const auto i : choice.tie) tie.push_back(m.instructions[static_cast<std::size_t>(i)]);
        choices.push_back(
            {{"step", choice.step_index}, {"tie", std::move(tie)}, {"chosen", choice.chosen}});
    }
    Json doc;
    doc["configurations"] = std::move(configurations);
    doc["choices"] = std::move(choices);
    doc["halted"] = trace.halted;
    if (trace.emitted) {
        doc["emitted"] = *trace.emitted;
    } else {
        doc["emitted"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

}  // namespace vmkit
