#include <gtest/gtest.h>

#include <filesystem>

#include <unistd.h>

#include "xisynth/io.hpp"

using namespace xisynth;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("xisynth_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST(MatrixFile, RoundTripsEveryField) {
    for (const auto& name : field_names()) {
        const auto& f = field_spec(name);
        ExactMatrix m = f.totally_real ? standard_gate("H", 2, {1}, f) : standard_gate("Htilde", 2, {1}, f);
        json j = matrix_to_json(m);
        EXPECT_EQ(j["field"], name);
        EXPECT_EQ(matrix_from_json(json::parse(j.dump())), m) << name;
    }
}

TEST(MatrixFile, LargeCoefficientsAreExact) {
    const auto& f = field_spec("Qzeta8");
    OMatrix num(f, 1, 2);
    num.coord(0, 0, 1) = BigInt("123456789012345678901234567890");
    num.coord(0, 1, 3) = BigInt("-98765432109876543210987654321");
    ExactMatrix m(num, 0);
    json j = matrix_to_json(m);
    EXPECT_TRUE(j["entries"][0][0][1].is_string());
    EXPECT_EQ(matrix_from_json(json::parse(j.dump())), m);
}

TEST(MatrixFile, RejectsMalformedInput) {
    const auto& f = field_spec("Qi");
    json good = matrix_to_json(standard_gate("S", 1, {0}, f));
    auto expect_parse_error = [](const json& j) {
        try {
            matrix_from_json(j);
            ADD_FAILURE() << j.dump();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::kParse);
        }
    };
    json bad = good;
    bad["field"] = "Qnope";
    expect_parse_error(bad);
    bad = good;
    bad["entries"][0][0] = json::array({1});
    expect_parse_error(bad);
    bad = good;
    bad["rows"] = 3;
    expect_parse_error(bad);
    bad = good;
    bad["entries"][1][1][0] = "12x";
    expect_parse_error(bad);
    bad = good;
    bad.erase("denom_exp");
    expect_parse_error(bad);
    expect_parse_error(json::array());
}

TEST(CircuitFile, RoundTrip) {
    GateSet gs = make_gate_set("clifford+t", 2);
    auto u = standard_gate("CS", 2, {0, 1}, *gs.field);
    Circuit c = astar_synthesize(u, gs);
    CircuitFile cf{gs.name, gate_set_hash(gs), 2, c, 12.5};
    CircuitFile back = circuit_from_json(json::parse(circuit_to_json(cf).dump()));
    EXPECT_EQ(back.gateset, "clifford+t");
    EXPECT_EQ(back.gateset_hash, cf.gateset_hash);
    EXPECT_EQ(back.qubits, 2);
    EXPECT_EQ(back.circuit.labels, c.labels);
    EXPECT_EQ(back.circuit.remainder, c.remainder);
    EXPECT_EQ(back.circuit.side, c.side);
    EXPECT_EQ(back.circuit.cost, c.cost);
    EXPECT_EQ(back.circuit.stats.nodes_expanded, c.stats.nodes_expanded);
    EXPECT_DOUBLE_EQ(back.precompute_ms, 12.5);
    EXPECT_GE(back.circuit.stats.wall_ms, 0);
    EXPECT_TRUE(verify_circuit(u, back.circuit, gs));
}

TEST(GateSetHash, DependsOnContent) {
    const auto& f = field_spec("Qzeta8");
    std::vector<Seed> t{{"T", standard_gate("T", 1, {0}, f), std::nullopt}};
    const auto h = gate_set_hash("Qzeta8", 1, CostZeroKind::kClifford, t);
    EXPECT_EQ(h.size(), 64u);
    EXPECT_EQ(h, gate_set_hash("Qzeta8", 1, CostZeroKind::kClifford, t));
    EXPECT_NE(h, gate_set_hash("Qzeta8", 2, CostZeroKind::kClifford, t));
    EXPECT_NE(h, gate_set_hash("Qzeta8", 1, CostZeroKind::kRealClifford, t));
    auto costly = t;
    costly[0].cost = BigInt(1);
    EXPECT_NE(h, gate_set_hash("Qzeta8", 1, CostZeroKind::kClifford, costly));
    EXPECT_EQ(h, gate_set_hash(make_gate_set("clifford+t", 1)));
}

TEST(GateSetCache, WritesThenLoads) {
    auto dir = temp_dir("cache");
    bool cached = true;
    GateSet built = load_or_build_gate_set("clifford+cs", 2, dir.string(), &cached);
    EXPECT_FALSE(cached);
    GateSet loaded = load_or_build_gate_set("clifford+cs", 2, dir.string(), &cached);
    EXPECT_TRUE(cached);
    ASSERT_EQ(loaded.generators.size(), built.generators.size());
    for (std::size_t k = 0; k < built.generators.size(); ++k) {
        EXPECT_EQ(loaded.generators[k].label, built.generators[k].label);
        EXPECT_EQ(loaded.generators[k].key, built.generators[k].key);
        EXPECT_EQ(loaded.generators[k].cost, built.generators[k].cost);
        EXPECT_EQ(loaded.generators[k].coords.values, built.generators[k].coords.values);
    }
    std::filesystem::remove_all(dir);
}

TEST(GateSetCache, StaleFileIsRebuilt) {
    auto dir = temp_dir("stale");
    load_or_build_gate_set("clifford+t", 1, dir.string());
    auto file = dir / "clifford_t-n1.json";
    ASSERT_TRUE(std::filesystem::exists(file));
    json j = read_json_file(file.string());
    j["hash"] = std::string(64, '0');
    j["generators"].erase(j["generators"].begin());
    write_json_file(file.string(), j);
    EXPECT_THROW(gate_set_from_json(j), Error);
    bool cached = true;
    GateSet gs = load_or_build_gate_set("clifford+t", 1, dir.string(), &cached);
    EXPECT_FALSE(cached);
    EXPECT_EQ(gs.generators.size(), 3u);
    EXPECT_EQ(read_json_file(file.string())["hash"], gate_set_hash(gs));
    std::filesystem::remove_all(dir);
}

TEST(GateSets, TableIsComplete) {
    EXPECT_EQ(gate_set_specs().size(), 8u);
    for (const auto& spec : gate_set_specs()) {
        EXPECT_THROW(gate_set_seeds(spec, spec.min_qubits - 1), Error) << spec.name;
        for (const auto& seed : gate_set_seeds(spec, spec.min_qubits)) EXPECT_TRUE(is_isometry(seed.matrix));
    }
    EXPECT_THROW(gate_set_spec("clifford+x"), Error);
}
