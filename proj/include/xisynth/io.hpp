#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xisynth/error.hpp"
#include "xisynth/exact.hpp"
#include "xisynth/gatesets.hpp"
#include "xisynth/normalize.hpp"
#include "xisynth/synth.hpp"

namespace xisynth {

using json = nlohmann::json;

namespace detail {

// Integers beyond 64 bits are written as decimal strings.
inline json int_to_json(const BigInt& x) {
    if (fits_int64(x)) return static_cast<std::int64_t>(x);
    return x.str();
}

inline BigInt int_from_json(const json& j) {
    if (j.is_number_integer()) return j.is_number_unsigned() ? BigInt(j.get<std::uint64_t>()) : BigInt(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
        require(s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos, ErrorCode::kParse,
                "not an integer: " + s);
        return BigInt(s);
    }
    fail(ErrorCode::kParse, "expected an integer, found " + j.dump());
}

template <class F>
auto parsing(const char* what, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const json::exception& e) {
        fail(ErrorCode::kParse, std::string(what) + ": " + e.what());
    }
}

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    require(EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) == 1, ErrorCode::kInvariant,
            "SHA-256 failed");
    std::string hex;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

}  // namespace detail

inline json matrix_to_json(const ExactMatrix& m) {
    json entries = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            json e = json::array();
            for (int k = 0; k < m.field().degree; ++k) e.push_back(detail::int_to_json(m.numerator().coord(r, c, k)));
            row.push_back(std::move(e));
        }
        entries.push_back(std::move(row));
    }
    return {{"field", m.field().name},
            {"rows", m.rows()},
            {"cols", m.cols()},
            {"denom_exp", m.denom_exp()},
            {"entries", std::move(entries)}};
}

inline ExactMatrix matrix_from_json(const json& j) {
    return detail::parsing("matrix file", [&] {
        require(j.is_object(), ErrorCode::kParse, "matrix file must be a JSON object");
        const FieldSpec& f = [&]() -> const FieldSpec& {
            try {
                return field_spec(j.at("field").get<std::string>());
            } catch (const Error& e) {
                fail(ErrorCode::kParse, e.what());
            }
        }();
        const auto rows = j.at("rows").get<std::size_t>();
        const auto cols = j.at("cols").get<std::size_t>();
        const int k = j.at("denom_exp").get<int>();
        const json& entries = j.at("entries");
        require(rows > 0 && cols > 0 && entries.is_array() && entries.size() == rows, ErrorCode::kParse,
                "matrix file: entries do not match rows");
        OMatrix num(f, rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            require(entries[r].is_array() && entries[r].size() == cols, ErrorCode::kParse,
                    "matrix file: row " + std::to_string(r) + " has the wrong length");
            for (std::size_t c = 0; c < cols; ++c) {
                const json& e = entries[r][c];
                require(e.is_array() && e.size() == static_cast<std::size_t>(f.degree), ErrorCode::kParse,
                        "matrix file: entry vectors must have length " + std::to_string(f.degree));
                for (int t = 0; t < f.degree; ++t) num.coord(r, c, t) = detail::int_from_json(e[t]);
            }
        }
        if (k >= 0) return ExactMatrix(std::move(num), k);
        return ExactMatrix(times_xi_power(std::move(num), -k), 0);
    });
}

/// Content hash of everything that determines a normalized gate set.
inline std::string gate_set_hash(const std::string& field, int n, CostZeroKind kind, const std::vector<Seed>& seeds) {
    json j{{"field", field}, {"n", n}, {"kind", to_string(kind)}};
    json s = json::array();
    for (const auto& seed : seeds)
        s.push_back({{"label", seed.label},
                     {"matrix", matrix_to_json(seed.matrix)},
                     {"cost", seed.cost ? detail::int_to_json(*seed.cost) : json(nullptr)}});
    j["seeds"] = std::move(s);
    return detail::sha256_hex(j.dump());
}

inline std::string gate_set_hash(const GateSet& gs) {
    return gate_set_hash(gs.field_ref().name, gs.n, gs.kind, gs.seeds);
}

inline json gate_set_to_json(const GateSet& gs) {
    json gens = json::array();
    for (const auto& g : gs.generators) {
        json coords = json::array();
        for (auto v : g.coords.values) coords.push_back(v);
        gens.push_back({{"label", g.label},
                        {"seed", g.seed},
                        {"cost", detail::int_to_json(g.cost)},
                        {"coords", std::move(coords)},
                        {"matrix", matrix_to_json(g.matrix)}});
    }
    json seeds = json::array();
    for (const auto& s : gs.seeds)
        seeds.push_back({{"label", s.label},
                         {"matrix", matrix_to_json(s.matrix)},
                         {"cost", s.cost ? detail::int_to_json(*s.cost) : json(nullptr)}});
    return {{"name", gs.name},
            {"hash", gate_set_hash(gs)},
            {"field", gs.field_ref().name},
            {"n", gs.n},
            {"kind", to_string(gs.kind)},
            {"seeds", std::move(seeds)},
            {"generators", std::move(gens)}};
}

inline CostZeroKind cost_zero_kind_from_string(const std::string& s) {
    if (s == "clifford") return CostZeroKind::kClifford;
    if (s == "real_clifford") return CostZeroKind::kRealClifford;
    fail(ErrorCode::kParse, "unknown cost-zero kind: " + s);
}

/// Rebuilds a gate set from its cache file. Keys and coordinates are
/// recomputed; the stored hash must match the seeds.
inline GateSet gate_set_from_json(const json& j) {
    return detail::parsing("gate-set file", [&] {
        GateSet gs;
        gs.name = j.at("name").get<std::string>();
        gs.field = &field_spec(j.at("field").get<std::string>());
        gs.n = j.at("n").get<int>();
        gs.kind = cost_zero_kind_from_string(j.at("kind").get<std::string>());
        for (const auto& s : j.at("seeds")) {
            std::optional<BigInt> cost;
            if (!s.at("cost").is_null()) cost = detail::int_from_json(s.at("cost"));
            gs.seeds.push_back({s.at("label").get<std::string>(), matrix_from_json(s.at("matrix")), cost});
        }
        require(j.at("hash").get<std::string>() == gate_set_hash(gs), ErrorCode::kGateSetMismatch,
                "gate-set file hash does not match its seeds");
        const BasisChange basis = gs.basis(gs.n);
        std::unordered_set<VertexKey, VertexKeyHash> seen;
        for (const auto& g : j.at("generators")) {
            ExactMatrix m = matrix_from_json(g.at("matrix"));
            require(m.field() == gs.field_ref(), ErrorCode::kParse, "generator over the wrong field");
            Generator gen = make_generator(g.at("label").get<std::string>(), g.at("seed").get<std::string>(),
                                           std::move(m), basis, detail::int_from_json(g.at("cost")));
            require(gen.key.nu > 0 && seen.insert(gen.key).second, ErrorCode::kParse,
                    "gate-set file has a cost-zero or repeated generator: " + gen.label);
            gs.generators.push_back(std::move(gen));
        }
        return gs;
    });
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::kParse, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::kParse, path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    require(static_cast<bool>(out), ErrorCode::kInvalidArgument, "cannot write " + path);
    out << j.dump(1) << '\n';
}

/// Loads a named gate set from cache_dir when a file with a matching content
/// hash exists, otherwise normalizes it and writes the cache.
inline GateSet load_or_build_gate_set(const std::string& name, int n, const std::string& cache_dir,
                                      bool* from_cache = nullptr) {
    const GateSetSpec& spec = gate_set_spec(name);
    std::vector<Seed> seeds = gate_set_seeds(spec, n);
    const std::string hash = gate_set_hash(spec.field, n, spec.kind, seeds);
    if (from_cache) *from_cache = false;
    std::filesystem::path path;
    if (!cache_dir.empty()) {
        std::string file = name + "-n" + std::to_string(n) + ".json";
        for (char& c : file)
            if (c == ',' || c == '+') c = '_';
        path = std::filesystem::path(cache_dir) / file;
        if (std::filesystem::exists(path)) {
            try {
                json j = read_json_file(path.string());
                if (j.value("hash", "") == hash) {
                    GateSet gs = gate_set_from_json(j);
                    if (from_cache) *from_cache = true;
                    return gs;
                }
            } catch (const Error&) {
                // unreadable or stale cache: rebuild below
            }
        }
    }
    GateSet gs = normalize_gate_set(seeds, spec.kind, n, field_spec(spec.field), spec.name);
    if (!path.empty()) {
        std::filesystem::create_directories(path.parent_path());
        write_json_file(path.string(), gate_set_to_json(gs));
    }
    return gs;
}

struct CircuitFile {
    std::string gateset;
    std::string gateset_hash;
    int qubits = 0;
    Circuit circuit;
    double precompute_ms = 0;
};

inline json circuit_to_json(const CircuitFile& cf) {
    const Circuit& c = cf.circuit;
    return {{"gateset", {{"name", cf.gateset}, {"hash", cf.gateset_hash}, {"qubits", cf.qubits}}},
            {"labels", c.labels},
            {"remainder_side", c.side == RemainderSide::kRight ? "right" : "left"},
            {"remainder", matrix_to_json(c.remainder)},
            {"cost", detail::int_to_json(c.cost)},
            {"stats",
             {{"nodes_expanded", c.stats.nodes_expanded},
              {"nodes_generated", c.stats.nodes_generated},
              {"outer_iterations", c.stats.outer_iterations},
              {"wall_ms", c.stats.wall_ms},
              {"precompute_ms", cf.precompute_ms}}}};
}

inline CircuitFile circuit_from_json(const json& j) {
    return detail::parsing("circuit file", [&] {
        CircuitFile cf;
        const json& g = j.at("gateset");
        cf.gateset = g.at("name").get<std::string>();
        cf.gateset_hash = g.at("hash").get<std::string>();
        cf.qubits = g.at("qubits").get<int>();
        Circuit& c = cf.circuit;
        c.gateset_id = cf.gateset;
        c.labels = j.at("labels").get<std::vector<std::string>>();
        const auto side = j.at("remainder_side").get<std::string>();
        require(side == "right" || side == "left", ErrorCode::kParse, "remainder_side must be left or right");
        c.side = side == "right" ? RemainderSide::kRight : RemainderSide::kLeft;
        c.remainder = matrix_from_json(j.at("remainder"));
        c.cost = detail::int_from_json(j.at("cost"));
        const json& s = j.at("stats");
        c.stats.nodes_expanded = s.at("nodes_expanded").get<std::uint64_t>();
        c.stats.nodes_generated = s.value("nodes_generated", std::uint64_t{0});
        c.stats.outer_iterations = s.value("outer_iterations", std::uint64_t{0});
        c.stats.wall_ms = s.at("wall_ms").get<double>();
        cf.precompute_ms = s.at("precompute_ms").get<double>();
        require(c.stats.wall_ms >= 0 && cf.precompute_ms >= 0, ErrorCode::kParse, "negative timing in stats");
        return cf;
    });
}

}  // namespace xisynth
