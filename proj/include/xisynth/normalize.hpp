#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "xisynth/canon.hpp"
#include "xisynth/error.hpp"
#include "xisynth/exact.hpp"
#include "xisynth/gates.hpp"

namespace xisynth {

enum class CostZeroKind { kClifford, kRealClifford };

inline BasisKind basis_kind(CostZeroKind k) {
    return k == CostZeroKind::kClifford ? BasisKind::kComplex : BasisKind::kReal;
}

inline const char* to_string(CostZeroKind k) { return k == CostZeroKind::kClifford ? "clifford" : "real_clifford"; }

struct LabeledMatrix {
    std::string label;
    ExactMatrix matrix;
};

/// Generators of the cost-zero group on n qubits, each checked to have nu = 0.
inline std::vector<LabeledMatrix> cost_zero_generators(CostZeroKind kind, int n, const FieldSpec& f) {
    require(n >= 1, ErrorCode::kInvalidArgument, "need at least one qubit");
    if (kind == CostZeroKind::kClifford)
        require(!f.totally_real, ErrorCode::kUnsupported, "complex Clifford group needs a non-real field");
    std::vector<LabeledMatrix> out;
    auto add = [&](const std::string& name, std::vector<int> t) {
        std::string label = name;
        for (int q : t) label += ":" + std::to_string(q);
        out.push_back({label, standard_gate(name, n, t, f)});
    };
    if (kind == CostZeroKind::kClifford) {
        for (int j = 0; j < n; ++j) add("Htilde", {j});
        for (int j = 0; j < n; ++j) add("S", {j});
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (j != k) add("CX", {j, k});
    } else {
        for (int j = 0; j < n; ++j) add("H", {j});
        for (int j = 0; j < n; ++j) add("X", {j});
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (j != k) add("CX", {j, k});
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) add("CZ", {j, k});
        for (int j = 0; j < n; ++j) add("Sy", {j});
    }
    auto basis = make_basis_change(basis_kind(kind), n, n, f);
    for (const auto& g : out)
        require(nu(g.matrix, basis) == 0, ErrorCode::kUnsupported,
                g.label + " is not cost-zero in this basis over " + f.name);
    return out;
}

struct Seed {
    std::string label;
    ExactMatrix matrix;
    std::optional<BigInt> cost;  // defaults to the scale-1 heuristic of its coordinates
};

struct Generator {
    std::string label;
    std::string seed;
    ExactMatrix matrix;
    BigInt cost;
    Coords coords;
    VertexKey key;
    // xi^nu B^-1 g^dagger B, used for both left and right multiplication in the B basis
    OMatrix dagger_tilde;
    int dagger_nu = 0;
};

struct GateSet {
    std::string name;
    const FieldSpec* field = nullptr;
    int n = 0;
    CostZeroKind kind = CostZeroKind::kClifford;
    std::vector<Seed> seeds;
    std::vector<Generator> generators;

    const FieldSpec& field_ref() const { return *field; }
    BasisChange basis(int n_in) const { return make_basis_change(basis_kind(kind), n, n_in, *field); }

    const Generator& find(const std::string& label) const {
        for (const auto& g : generators)
            if (g.label == label) return g;
        fail(ErrorCode::kUnknownLabel, "unknown generator label: " + label);
    }
};

/// Completes a generator record from its matrix.
inline Generator make_generator(std::string label, std::string seed, ExactMatrix g, const BasisChange& basis,
                                const std::optional<BigInt>& cost) {
    Generator out;
    VertexInfo info = analyze(g, basis);
    Tilde dt = tilde_of(dagger(g), basis);
    out.label = std::move(label);
    out.seed = std::move(seed);
    out.matrix = std::move(g);
    out.coords = info.coords;
    out.key = std::move(info.key);
    out.cost = cost ? *cost : heuristic_value(out.coords, 1);
    out.dagger_tilde = std::move(dt.m);
    out.dagger_nu = dt.nu;
    return out;
}

/// Closure of the seeds under conjugation by cost-zero generators, one
/// representative per vertex in breadth-first discovery order.
inline GateSet normalize_gate_set(const std::vector<Seed>& seeds, CostZeroKind kind, int n, const FieldSpec& f,
                                  std::string name = "") {
    GateSet gs;
    gs.name = std::move(name);
    gs.field = &f;
    gs.n = n;
    gs.kind = kind;
    gs.seeds = seeds;
    const auto cz = cost_zero_generators(kind, n, f);
    std::vector<ExactMatrix> cz_dagger;
    for (const auto& c : cz) cz_dagger.push_back(dagger(c.matrix));
    const BasisChange basis = gs.basis(n);
    std::unordered_set<VertexKey, VertexKeyHash> seen;
    std::map<std::string, int> orbit_size;

    struct Item {
        ExactMatrix g;
        std::size_t seed;
    };
    std::vector<Item> frontier;
    auto admit = [&](ExactMatrix g, std::size_t seed) {
        VertexKey key = vertex_key(g, basis);
        if (!seen.insert(key).second) return;
        const std::string& base = seeds[seed].label;
        std::string label = base + ":" + std::to_string(orbit_size[base]++);
        gs.generators.push_back(make_generator(std::move(label), base, g, basis, seeds[seed].cost));
        frontier.push_back({std::move(g), seed});
    };
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        const auto& m = seeds[s].matrix;
        require(m.field() == f, ErrorCode::kFieldMismatch, "seed " + seeds[s].label + " is over another field");
        require(m.rows() == (std::size_t{1} << n) && m.cols() == m.rows(), ErrorCode::kDimension,
                "seed " + seeds[s].label + " has the wrong size");
        require(nu(m, basis) > 0, ErrorCode::kInvalidArgument, "invalid-seed: " + seeds[s].label + " is cost-zero");
        const std::size_t before = gs.generators.size();
        admit(m, s);
        require(gs.generators.size() > before, ErrorCode::kInvalidArgument,
                "invalid-seed: " + seeds[s].label + " duplicates an earlier seed vertex");
    }
    while (!frontier.empty()) {
        std::vector<Item> current;
        current.swap(frontier);
        for (std::size_t c = 0; c < cz.size(); ++c)
            for (const auto& item : current) admit(cz[c].matrix * item.g * cz_dagger[c], item.seed);
    }
    return gs;
}

}  // namespace xisynth
