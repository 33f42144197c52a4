#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vmkit/analysis.hpp"
#include "vmkit/constructions.hpp"
#include "vmkit/io.hpp"
#include "vmkit/machine.hpp"
#include "vmkit/semantics.hpp"

namespace py = pybind11;
using namespace vmkit;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Virus machine simulation and analysis toolkit";

    py::register_exception<Error>(m, "VmError");

    m.attr("ENVIRONMENT_ID") = std::string(kEnvironmentId);
    m.attr("HALT_MARKER") = kHaltMarker;

    py::class_<Host>(m, "Host")
        .def(py::init<std::string, std::uint64_t>(), py::arg("id"), py::arg("initial_viruses") = 0)
        .def_readwrite("id", &Host::id)
        .def_readwrite("initial_viruses", &Host::initial_viruses)
        .def("__repr__", [](const Host& h) {
            return "Host(" + h.id + ", " + std::to_string(h.initial_viruses) + ")";
        });

    py::class_<Channel>(m, "Channel")
        .def(py::init<std::string, std::string, std::uint64_t>(), py::arg("source"),
             py::arg("target"), py::arg("weight") = 1)
        .def_readwrite("source", &Channel::from)
        .def_readwrite("target", &Channel::to)
        .def_readwrite("weight", &Channel::weight);

    py::class_<ChannelKey>(m, "ChannelKey")
        .def(py::init<std::string, std::string>(), py::arg("source"), py::arg("target"))
        .def_readwrite("source", &ChannelKey::from)
        .def_readwrite("target", &ChannelKey::to);

    py::class_<InstructionEdge>(m, "InstructionEdge")
        .def(py::init<std::string, std::string, int>(), py::arg("source"), py::arg("target"),
             py::arg("weight") = 1)
        .def_readwrite("source", &InstructionEdge::from)
        .def_readwrite("target", &InstructionEdge::to)
        .def_readwrite("weight", &InstructionEdge::weight);

    py::class_<Attachment>(m, "Attachment")
        .def(py::init<std::string, ChannelKey>(), py::arg("instruction"), py::arg("channel"))
        .def_readwrite("instruction", &Attachment::instruction)
        .def_readwrite("channel", &Attachment::channel);

    py::class_<VirusMachine>(m, "VirusMachine")
        .def(py::init<>())
        .def_readwrite("name", &VirusMachine::name)
        .def_readwrite("hosts", &VirusMachine::hosts)
        .def_readwrite("channels", &VirusMachine::channels)
        .def_readwrite("instructions", &VirusMachine::instructions)
        .def_readwrite("instruction_edges", &VirusMachine::instruction_edges)
        .def_readwrite("attachments", &VirusMachine::attachments)
        .def_readwrite("initial_instruction", &VirusMachine::initial_instruction)
        .def("__eq__", [](const VirusMachine& a, const VirusMachine& b) { return a == b; })
        .def("__repr__",
             [](const VirusMachine& machine) { return "VirusMachine('" + machine.name + "')"; });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("violations", &ValidationReport::violations)
        .def("ok", &ValidationReport::ok)
        .def("__bool__", &ValidationReport::ok);

    py::class_<Configuration>(m, "Configuration")
        .def(py::init<>())
        .def_readwrite("host_counts", &Configuration::host_counts)
        .def_readwrite("next_instruction", &Configuration::next_instruction)
        .def_readwrite("env_count", &Configuration::env_count)
        .def_readwrite("step_index", &Configuration::step_index)
        .def("halted", &Configuration::halted)
        .def("__eq__", [](const Configuration& a, const Configuration& b) { return a == b; });

    py::class_<ChoicePolicy>(m, "ChoicePolicy")
        .def_static("scripted", &ChoicePolicy::scripted, py::arg("picks"))
        .def_static("seeded", &ChoicePolicy::seeded, py::arg("seed"));

    py::class_<ChoiceRecord>(m, "ChoiceRecord")
        .def_readonly("step_index", &ChoiceRecord::step_index)
        .def_readonly("tie", &ChoiceRecord::tie)
        .def_readonly("chosen", &ChoiceRecord::chosen);

    py::class_<ComputationTrace>(m, "ComputationTrace")
        .def_readonly("configurations", &ComputationTrace::configurations)
        .def_readonly("choices", &ComputationTrace::choices)
        .def_readonly("halted", &ComputationTrace::halted)
        .def_readonly("emitted", &ComputationTrace::emitted);

    py::class_<ExplorationBounds>(m, "ExplorationBounds")
        .def(py::init([](std::uint32_t max_steps, std::optional<std::uint64_t> max_total_viruses,
                         std::optional<std::size_t> max_frontier) {
                 return ExplorationBounds{max_steps, max_total_viruses, max_frontier};
             }),
             py::arg("max_steps") = 10000, py::arg("max_total_viruses") = py::none(),
             py::arg("max_frontier") = py::none())
        .def_readwrite("max_steps", &ExplorationBounds::max_steps)
        .def_readwrite("max_total_viruses", &ExplorationBounds::max_total_viruses)
        .def_readwrite("max_frontier", &ExplorationBounds::max_frontier);

    py::class_<GeneratedSetReport>(m, "GeneratedSetReport")
        .def_readonly("numbers", &GeneratedSetReport::numbers)
        .def_readonly("exact", &GeneratedSetReport::exact)
        .def_readonly("observed_nvh", &GeneratedSetReport::observed_nvh)
        .def_readonly("branch_count", &GeneratedSetReport::branch_count)
        .def_readonly("truncated_branch_count", &GeneratedSetReport::truncated_branch_count)
        .def("__repr__", [](const GeneratedSetReport& r) { return report_to_json(r); });

    py::class_<TraceMismatch>(m, "TraceMismatch")
        .def_readonly("step", &TraceMismatch::step)
        .def_readonly("field", &TraceMismatch::field)
        .def_readonly("expected", &TraceMismatch::expected)
        .def_readonly("actual", &TraceMismatch::actual);

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("mismatches", &CheckReport::mismatches)
        .def("passed", &CheckReport::passed)
        .def("__bool__", &CheckReport::passed);

    py::class_<IngredientProfile>(m, "IngredientProfile")
        .def_readonly("beta", &IngredientProfile::beta)
        .def_readonly("hosts_p", &IngredientProfile::hosts_p)
        .def_readonly("instructions_q", &IngredientProfile::instructions_q)
        .def_readonly("nvh_r", &IngredientProfile::nvh_r)
        .def_readonly("nvh_exact", &IngredientProfile::nvh_exact)
        .def_readonly("wc_s", &IngredientProfile::wc_s)
        .def_readonly("outd_t", &IngredientProfile::outd_t)
        .def_readonly("alpha_host_u", &IngredientProfile::alpha_host_u)
        .def_readonly("alpha_inst_v", &IngredientProfile::alpha_inst_v)
        .def("__repr__", [](const IngredientProfile& p) { return profile_to_json(p); });

    py::enum_<Verdict>(m, "Verdict")
        .value("PROVEN", Verdict::Proven)
        .value("SIGNATURE_MATCH", Verdict::SignatureMatch);

    py::class_<ClassificationEntry>(m, "ClassificationEntry")
        .def_readonly("rule_id", &ClassificationEntry::rule_id)
        .def_readonly("family", &ClassificationEntry::family)
        .def_readonly("verdict", &ClassificationEntry::verdict)
        .def_readonly("justification", &ClassificationEntry::justification);

    py::class_<ClassificationReport>(m, "ClassificationReport")
        .def_readonly("entries", &ClassificationReport::entries)
        .def("__repr__", [](const ClassificationReport& r) { return classification_to_json(r); });

    py::class_<ArithParams>(m, "ArithParams")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("n"), py::arg("r"))
        .def_readwrite("n", &ArithParams::n)
        .def_readwrite("r", &ArithParams::r);

    py::class_<SetSpec>(m, "SetSpec")
        .def_static("singleton", &SetSpec::singleton, py::arg("v"))
        .def_static("finite_set", &SetSpec::finite_set, py::arg("elements"))
        .def_static("nat", &SetSpec::nat)
        .def_static("lin_fin", &SetSpec::lin_fin, py::arg("x"), py::arg("n"), py::arg("N"))
        .def_static("comb_a", &SetSpec::comb_a, py::arg("w1"), py::arg("w2"), py::arg("r"),
                    py::arg("N1"), py::arg("N2"))
        .def_static("comb_b", &SetSpec::comb_b, py::arg("w1"), py::arg("w2"), py::arg("r"),
                    py::arg("N1"), py::arg("N2"))
        .def_static("arith", &SetSpec::arith, py::arg("n"), py::arg("r"))
        .def_static("union_of", &SetSpec::union_of, py::arg("parts"));

    py::enum_<DotLayer>(m, "DotLayer")
        .value("HOST", DotLayer::Host)
        .value("INSTRUCTION", DotLayer::Instruction)
        .value("COMBINED", DotLayer::Combined);

    // core
    m.def("validate_machine", &validate_machine, py::arg("machine"));
    m.def("initial_configuration", &initial_configuration, py::arg("machine"));
    m.def("make_configuration", &make_configuration, py::arg("machine"), py::arg("counts"),
          py::arg("next"), py::arg("env_count"), py::arg("step_index") = 0);
    m.def("describe", &describe, py::arg("machine"), py::arg("configuration"));

    // semantics
    m.def("successors",
          py::overload_cast<const VirusMachine&, const Configuration&>(&successors),
          py::arg("machine"), py::arg("configuration"));
    m.def("run_trace", &run_trace, py::arg("machine"), py::arg("policy"), py::arg("max_steps"));
    m.def(
        "assert_trace",
        [](const VirusMachine& machine, ChoicePolicy policy,
           const std::vector<std::pair<std::uint32_t, Configuration>>& expectations) {
            std::vector<TraceExpectation> expected;
            expected.reserve(expectations.size());
            for (const auto& [step, configuration] : expectations) {
                expected.push_back({step, configuration});
            }
            return assert_trace(machine, std::move(policy), expected);
        },
        py::arg("machine"), py::arg("policy"), py::arg("expectations"));
    m.def("enumerate_generated_set", &enumerate_generated_set, py::arg("machine"),
          py::arg("bounds") = ExplorationBounds{});
    m.def("brute_force_oracle", &brute_force_oracle, py::arg("machine"), py::arg("max_steps"),
          py::arg("node_budget") = 20'000'000);

    // analysis
    m.def("host_adjacency", &host_adjacency, py::arg("machine"));
    m.def("instruction_adjacency", &instruction_adjacency, py::arg("machine"));
    m.def("reachable_instructions", &reachable_instructions, py::arg("machine"));
    m.def("prune_to_rooted_tree", &prune_to_rooted_tree, py::arg("machine"));
    m.def("longest_simple_cycle", &longest_simple_cycle, py::arg("graph"),
          py::arg("vertex_cap") = 64);
    m.def("tree_depth", &tree_depth, py::arg("graph"), py::arg("root"));
    m.def(
        "ingredient_profile",
        [](const VirusMachine& machine, const std::optional<GeneratedSetReport>& enumeration,
           std::size_t cycle_vertex_cap) {
            return ingredient_profile(machine, enumeration ? &*enumeration : nullptr,
                                      cycle_vertex_cap);
        },
        py::arg("machine"), py::arg("enumeration") = py::none(),
        py::arg("cycle_vertex_cap") = 64);
    m.def("acyclic_host_bound", &acyclic_host_bound, py::arg("machine"));
    m.def("classify", &classify, py::arg("machine"), py::arg("profile"));

    // constructions
    m.def("build_example", &build_example);
    m.def("build_singleton", &build_singleton, py::arg("v"));
    m.def("build_nat", &build_nat);
    m.def("build_finite_set", &build_finite_set, py::arg("elements"));
    m.def("build_finite_one_host", &build_finite_one_host, py::arg("elements"));
    m.def("build_finite_one_virus", &build_finite_one_virus, py::arg("elements"));
    m.def("build_lin_fin", &build_lin_fin, py::arg("x"), py::arg("n"), py::arg("N"));
    m.def("build_comb_a", &build_comb_a, py::arg("w1"), py::arg("w2"), py::arg("r"), py::arg("N1"),
          py::arg("N2"));
    m.def("build_comb_b", &build_comb_b, py::arg("w1"), py::arg("w2"), py::arg("r"), py::arg("N1"),
          py::arg("N2"));
    m.def("build_arith", &build_arith, py::arg("n"), py::arg("r"));
    m.def("build_union", &build_union, py::arg("parts"));
    m.def("predicted_set", &predicted_set, py::arg("spec"), py::arg("cap"));

    // io
    m.def("parse_machine", [](const std::string& text) { return parse_machine(text); },
          py::arg("text"));
    m.def("serialize_machine", &serialize_machine, py::arg("machine"));
    m.def("export_dot", &export_dot, py::arg("machine"), py::arg("layer"));
    m.def("report_to_json", &report_to_json, py::arg("report"));
    m.def("profile_to_json", &profile_to_json, py::arg("profile"));
    m.def("classification_to_json", &classification_to_json, py::arg("report"));
    m.def("trace_to_json", &trace_to_json, py::arg("machine"), py::arg("trace"));
}
