#pragma once

#include <string>
#include <string_view>

#include "vmkit/analysis.hpp"
#include "vmkit/machine.hpp"
#include "vmkit/semantics.hpp"

namespace vmkit {

/// Parses a machine document (see serialize_machine for the schema) and runs
/// structural validation. Malformed documents, unknown keys and validation
/// violations all raise Error with field context.
VirusMachine parse_machine(std::string_view text);

/// Canonical JSON form, conventionally stored as `<name>.vm.json`:
///
///   {
///     "name": "...",
///     "hosts": [{"id": "h1", "viruses": 2}, ...],
///     "channels": [{"from": "h1", "to": "h0", "weight": 1}, ...],
///     "instructions": ["i1", ...],
///     "instruction_edges": [{"from": "i1", "to": "i2", "weight": 1}, ...],
///     "attachments": [{"instruction": "i1", "channel": {"from": "h1", "to": "h0"}}, ...],
///     "initial_instruction": "i1"
///   }
///
/// "h0" denotes the environment and never appears under hosts. Field and
/// element order follow declaration order, so the output is byte-identical
/// across runs and parse(serialize(m)) == m.
std::string serialize_machine(const VirusMachine& m);

enum class DotLayer {
    Host,         // hosts as boxes with their initial virus counts
    Instruction,  // instruction graph; weight-1 labels omitted
    Combined,     // both graphs plus dashed attachment edges
};

/// Deterministic DOT rendering of the selected graph layer.
std::string export_dot(const VirusMachine& m, DotLayer layer);

std::string report_to_json(const GeneratedSetReport& report);
std::string profile_to_json(const IngredientProfile& profile);
std::string classification_to_json(const ClassificationReport& report);
std::string trace_to_json(const VirusMachine& m, const ComputationTrace& trace);

}  // namespace vmkit
