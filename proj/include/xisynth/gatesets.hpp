#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xisynth/error.hpp"
#include "xisynth/gates.hpp"
#include "xisynth/normalize.hpp"

namespace xisynth {

/// A named gate set: cost-zero group, field, and seed gates placed on the
/// lowest qubits.
struct GateSetSpec {
    std::string name;
    std::string field;
    CostZeroKind kind;
    int min_qubits;
    // seed label -> factors (gate name, targets) multiplied together
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::vector<int>>>>> seeds;
};

inline const std::vector<GateSetSpec>& gate_set_specs() {
    static const std::vector<GateSetSpec> specs{
        {"clifford+t", "Qzeta8", CostZeroKind::kClifford, 1, {{"T", {{"T", {0}}}}}},
        {"clifford+t+sqrtT", "Qzeta16", CostZeroKind::kClifford, 1, {{"T", {{"T", {0}}}}, {"sqrtT", {{"sqrtT", {0}}}}}},
        {"clifford+cs", "Qi", CostZeroKind::kClifford, 2, {{"CS", {{"CS", {0, 1}}}}}},
        {"clifford+ch", "Qsqrt2", CostZeroKind::kRealClifford, 2, {{"CH", {{"CH", {0, 1}}}}}},
        {"clifford+t,tt,ct",
         "Qzeta8",
         CostZeroKind::kClifford,
         2,
         {{"T", {{"T", {0}}}}, {"TT", {{"T", {0}}, {"T", {1}}}}, {"CT", {{"CT", {0, 1}}}}}},
        {"clifford+ty,csy,cty",
         "Qcos_pi8",
         CostZeroKind::kRealClifford,
         2,
         {{"Ty", {{"Ty", {0}}}}, {"CSy", {{"CSy", {0, 1}}}}, {"CTy", {{"CTy", {0, 1}}}}}},
        {"clifford+ccz", "Qi", CostZeroKind::kClifford, 3, {{"CCZ", {{"CCZ", {0, 1, 2}}}}}},
        {"clifford+cs,ccz,ccs",
         "Qi",
         CostZeroKind::kClifford,
         3,
         {{"CS", {{"CS", {0, 1}}}}, {"CCZ", {{"CCZ", {0, 1, 2}}}}, {"CCS", {{"CCS", {0, 1, 2}}}}}},
    };
    return specs;
}

inline const GateSetSpec& gate_set_spec(const std::string& name) {
    for (const auto& s : gate_set_specs())
        if (s.name == name) return s;
    fail(ErrorCode::kUnsupported, "unknown gate set: " + name);
}

inline std::vector<Seed> gate_set_seeds(const GateSetSpec& spec, int n) {
    require(n >= spec.min_qubits, ErrorCode::kUnsupported,
            spec.name + " needs at least " + std::to_string(spec.min_qubits) + " qubits");
    const FieldSpec& f = field_spec(spec.field);
    std::vector<Seed> out;
    for (const auto& [label, factors] : spec.seeds) {
        ExactMatrix m = ExactMatrix::identity(f, std::size_t{1} << n);
        for (const auto& [gate, targets] : factors) m = m * standard_gate(gate, n, targets, f);
        out.push_back({label, std::move(m), std::nullopt});
    }
    return out;
}

inline GateSet make_gate_set(const std::string& name, int n) {
    const GateSetSpec& spec = gate_set_spec(name);
    return normalize_gate_set(gate_set_seeds(spec, n), spec.kind, n, field_spec(spec.field), spec.name);
}

/// Gate sets for which best-first search is known to terminate.
inline bool supports_best_first(const std::string& name) {
    return name == "clifford+cs" || name == "clifford+ch" || name == "clifford+t,tt,ct" ||
           name == "clifford+ty,csy,cty";
}

}  // namespace xisynth
