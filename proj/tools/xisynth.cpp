#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "xisynth/gatesets.hpp"
#include "xisynth/io.hpp"
#include "xisynth/synth.hpp"

using namespace xisynth;

namespace {

enum Exit { kOk = 0, kParseExit = 2, kMismatch = 3, kBudget = 4, kVerifyFailed = 5, kInternal = 6 };

int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::kParse:
        case ErrorCode::kUnknownLabel:
        case ErrorCode::kUnsupported:
        case ErrorCode::kInvalidArgument:
        case ErrorCode::kDimension:
            return kParseExit;
        case ErrorCode::kFieldMismatch:
        case ErrorCode::kGateSetMismatch:
            return kMismatch;
        case ErrorCode::kBudgetExhausted:
            return kBudget;
        default:
            return kInternal;
    }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int qubits_of(std::size_t dim, const char* what) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    require((std::size_t{1} << n) == dim, ErrorCode::kDimension, std::string(what) + " is not a power of two");
    return n;
}

void emit(const json& j, const std::string& out) {
    if (out.empty())
        std::cout << j.dump(1) << '\n';
    else
        write_json_file(out, j);
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
}

json coords_json(const Coords& c) {
    json v = json::array();
    for (auto x : c.values) v.push_back(x);
    return v;
}

struct Options {
    std::string gate_set;
    int qubits = 0;
    std::string mode = "astar";
    std::int64_t scale = 10;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t node_cap = 10'000'000;
    double time_cap = 0;
    bool json_out = false;
    std::string cache_dir;
    std::string input, circuit, output;
    std::string basis = "complex";
    std::string gate;
    std::vector<int> targets;
    std::string field = "Qzeta8";
    bool plus = false;
    int inputs = -1;
    std::vector<std::size_t> permutation;
    std::vector<long long> v_params;
};

int run_normalize(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    bool cached = false;
    GateSet gs = load_or_build_gate_set(o.gate_set, o.qubits, o.cache_dir, &cached);
    const double ms = ms_since(t0);
    if (o.json_out) {
        json gens = json::array();
        for (const auto& g : gs.generators)
            gens.push_back({{"label", g.label}, {"cost", detail::int_to_json(g.cost)}, {"coords", coords_json(g.coords)}});
        std::cout << json{{"gateset", gs.name},   {"qubits", gs.n},  {"hash", gate_set_hash(gs)},
                          {"generators", gens},    {"count", gs.generators.size()},
                          {"precompute_ms", ms},   {"from_cache", cached}}
                         .dump(1)
                  << '\n';
    } else {
        std::cout << gs.name << " on " << gs.n << " qubits: " << gs.generators.size() << " generators ("
                  << (cached ? "cache" : "computed") << ", " << ms << " ms)\n";
        for (const auto& g : gs.generators) std::cout << "  " << g.label << " coords " << coords_json(g.coords).dump() << '\n';
    }
    return kOk;
}

int run_coords(const Options& o) {
    ExactMatrix u = matrix_from_json(read_json_file(o.input));
    BasisKind kind = o.basis == "real" ? BasisKind::kReal : BasisKind::kComplex;
    if (!o.gate_set.empty()) {
        const auto& spec = gate_set_spec(o.gate_set);
        require(spec.field == u.field().name, ErrorCode::kFieldMismatch,
                "input is over " + u.field().name + " but " + spec.name + " uses " + spec.field);
        kind = basis_kind(spec.kind);
    }
    const int n_out = qubits_of(u.rows(), "row count");
    const int n_in = qubits_of(u.cols(), "column count");
    BasisChange b = make_basis_change(kind, n_out, n_in, u.field());
    VertexInfo info = analyze(u, b);
    const bool square = u.rows() == u.cols();
    if (o.json_out) {
        std::cout << json{{"nu", info.key.nu}, {square ? "coords" : "isometry_coords", coords_json(info.coords)},
                          {"heuristic", detail::int_to_json(heuristic_value(info.coords, 1))}}
                         .dump()
                  << '\n';
    } else {
        std::cout << "nu " << info.key.nu << '\n'
                  << (square ? "coords " : "isometry coords ") << coords_json(info.coords).dump() << '\n';
    }
    return kOk;
}

int run_synth(const Options& o) {
    ExactMatrix u = matrix_from_json(read_json_file(o.input));
    require(is_isometry(u), ErrorCode::kInvalidArgument, "input is not an isometry");
    const auto& spec = gate_set_spec(o.gate_set);
    require(spec.field == u.field().name, ErrorCode::kFieldMismatch,
            "input is over " + u.field().name + " but " + spec.name + " uses " + spec.field);
    const int n = qubits_of(u.rows(), "row count");
    qubits_of(u.cols(), "column count");
    const auto t0 = std::chrono::steady_clock::now();
    GateSet gs = load_or_build_gate_set(o.gate_set, n, o.cache_dir);
    const double precompute = ms_since(t0);

    Circuit c;
    if (o.mode == "bestfirst") {
        require(supports_best_first(gs.name), ErrorCode::kUnsupported,
                "best-first search is not supported for " + gs.name);
        c = best_first_synthesize(u, gs);
    } else {
        Budget budget;
        budget.node_cap = o.node_cap;
        if (o.time_cap > 0) budget.time_cap_ms = o.time_cap * 1000;
        budget.threads = o.threads;
        c = astar_synthesize(u, gs, o.scale, budget);
    }
    if (!verify_circuit(u, c, gs)) {
        std::cerr << "synthesized circuit failed verification\n";
        return kInternal;
    }
    CircuitFile cf{gs.name, gate_set_hash(gs), gs.n, c, precompute};
    const json j = circuit_to_json(cf);
    if (!o.output.empty()) write_json_file(o.output, j);
    if (o.json_out || o.output.empty()) std::cout << j.dump(1) << '\n';
    std::cerr << c.labels.size() << " generators, cost " << c.cost << ": " << join(c.labels) << '\n'
              << "precompute " << precompute << " ms, synthesis " << c.stats.wall_ms << " ms, "
              << c.stats.nodes_expanded << " expansions\n";
    return kOk;
}

int run_verify(const Options& o) {
    ExactMatrix u = matrix_from_json(read_json_file(o.input));
    CircuitFile cf = circuit_from_json(read_json_file(o.circuit));
    const auto& spec = gate_set_spec(cf.gateset);
    std::vector<Seed> seeds = gate_set_seeds(spec, cf.qubits);
    require(gate_set_hash(spec.field, cf.qubits, spec.kind, seeds) == cf.gateset_hash, ErrorCode::kGateSetMismatch,
            "circuit was built for a different version of " + cf.gateset);
    require(spec.field == u.field().name, ErrorCode::kFieldMismatch,
            "input is over " + u.field().name + " but " + spec.name + " uses " + spec.field);
    GateSet gs = load_or_build_gate_set(cf.gateset, cf.qubits, o.cache_dir);
    const bool ok = verify_circuit(u, cf.circuit, gs);
    std::cout << (ok ? "ok" : "mismatch") << '\n';
    return ok ? kOk : kVerifyFailed;
}

int run_gate(const Options& o) {
    const FieldSpec& f = field_spec(o.field);
    ExactMatrix m;
    if (o.gate == "permutation") {
        m = permutation_unitary(o.permutation, f);
    } else if (o.gate == "v") {
        require(o.v_params.size() == 4, ErrorCode::kInvalidArgument, "v needs four integers a b c d");
        m = v_isometry(o.v_params[0], o.v_params[1], o.v_params[2], o.v_params[3], f);
    } else {
        require(o.qubits >= 1, ErrorCode::kInvalidArgument, "--qubits is required");
        std::vector<int> targets = o.targets;
        if (targets.empty())
            for (int k = 0; k < standard_gate_arity(o.gate); ++k) targets.push_back(k);
        m = standard_gate(o.gate, o.qubits, targets, f);
    }
    if (o.plus) {
        m = m * plus_state(qubits_of(m.cols(), "gate input"), f);
    } else if (o.inputs >= 0) {
        require(o.inputs <= qubits_of(m.cols(), "gate input"), ErrorCode::kInvalidArgument,
                "--inputs exceeds the gate's input qubits");
        m = m.columns(0, std::size_t{1} << o.inputs);
    }
    emit(matrix_to_json(m), o.output);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact synthesis of isometries over Clifford+non-Clifford gate sets"};
    app.require_subcommand(1);
    Options o;

    auto add_search_flags = [&](CLI::App* cmd) {
        cmd->add_option("--gate-set", o.gate_set, "gate set name")->required();
        cmd->add_option("--cache-dir", o.cache_dir, "directory for normalized gate-set files");
    };

    auto* normalize = app.add_subcommand("normalize", "normalize a named gate set");
    add_search_flags(normalize);
    normalize->add_option("--qubits", o.qubits, "number of qubits")->required();
    normalize->add_flag("--json", o.json_out, "machine-readable output");

    auto* synth = app.add_subcommand("synth", "synthesize a circuit for a matrix file");
    synth->add_option("input", o.input, "matrix file")->required();
    add_search_flags(synth);
    synth->add_option("--mode", o.mode, "astar or bestfirst")->check(CLI::IsMember({"astar", "bestfirst"}));
    synth->add_option("--scale", o.scale, "heuristic multiplier; 1 certifies optimality")->check(CLI::PositiveNumber);
    synth->add_option("--threads", o.threads, "worker threads for neighbour generation")->check(CLI::PositiveNumber);
    synth->add_option("--node-cap", o.node_cap, "maximum number of expansions");
    synth->add_option("--time-cap", o.time_cap, "wall-clock limit in seconds");
    synth->add_option("-o,--output", o.output, "circuit file to write");
    synth->add_flag("--json", o.json_out, "print the circuit JSON even when writing a file");

    auto* coords = app.add_subcommand("coords", "print nu and the coordinates of a matrix");
    coords->add_option("input", o.input, "matrix file")->required();
    coords->add_option("--gate-set", o.gate_set, "take the basis from this gate set");
    coords->add_option("--basis", o.basis, "complex or real")->check(CLI::IsMember({"complex", "real"}));
    coords->add_flag("--json", o.json_out, "machine-readable output");

    auto* verify = app.add_subcommand("verify", "check a circuit file against a matrix file");
    verify->add_option("input", o.input, "matrix file")->required();
    verify->add_option("circuit", o.circuit, "circuit file")->required();
    verify->add_option("--cache-dir", o.cache_dir, "directory for normalized gate-set files");

    auto* gate = app.add_subcommand("gate", "write the matrix file of a gate, permutation or V isometry");
    gate->add_option("name", o.gate, "gate name, 'permutation' or 'v'")->required();
    gate->add_option("params", o.v_params, "a b c d for v");
    gate->add_option("--qubits", o.qubits, "number of qubits");
    gate->add_option("--targets", o.targets, "target qubits")->delimiter(',');
    gate->add_option("--field", o.field, "field name");
    gate->add_option("--permutation", o.permutation, "images of the basis states, e.g. 0,1,2,7,4,5,6,3")
        ->delimiter(',');
    gate->add_flag("--plus", o.plus, "apply to |+...+> to get a state");
    gate->add_option("--inputs", o.inputs, "keep the first 2^k columns");
    gate->add_option("-o,--output", o.output, "matrix file to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kParseExit;
    }

    try {
        if (*normalize) return run_normalize(o);
        if (*synth) return run_synth(o);
        if (*coords) return run_coords(o);
        if (*verify) return run_verify(o);
        if (*gate) return run_gate(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
