#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <climits>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xisynth/canon.hpp"
#include "xisynth/error.hpp"
#include "xisynth/exact.hpp"
#include "xisynth/majorization.hpp"
#include "xisynth/normalize.hpp"

namespace xisynth {

/// Which side of the generator product the cost-zero remainder sits on.
/// kRight: U = g[0] * ... * g[M-1] * R.  kLeft: U = R * g[0] * ... * g[M-1].
enum class RemainderSide { kRight, kLeft };

struct SearchStats {
    std::uint64_t nodes_expanded = 0;
    std::uint64_t nodes_generated = 0;
    std::uint64_t outer_iterations = 0;
    double wall_ms = 0;
};

struct Circuit {
    std::string gateset_id;
    std::vector<std::string> labels;
    ExactMatrix remainder;
    RemainderSide side = RemainderSide::kRight;
    BigInt cost = 0;
    SearchStats stats;
};

struct DistanceTable;

struct Budget {
    std::uint64_t node_cap = 10'000'000;
    std::optional<double> time_cap_ms;
    unsigned threads = 1;
    // called every progress_every expansions with the current stats and frontier f
    std::function<void(const SearchStats&, const BigInt&)> progress;
    std::uint64_t progress_every = 10'000;
    // exact distances near the goal; built on demand with table_expansions when absent
    std::shared_ptr<const DistanceTable> distance_table;
    std::uint64_t table_expansions = 4096;
    // expansions tried without a table first; easy inputs never pay for one
    std::uint64_t table_after = 1000;
};

/// Integral form of g^dagger * U (left) or U * g^dagger (right) in the B basis.
inline Tilde apply_left(const Generator& g, const Tilde& t) {
    ExactMatrix m(g.dagger_tilde * t.m, t.nu + g.dagger_nu);
    return {m.denom_exp(), m.numerator()};
}

inline Tilde apply_right(const Tilde& t, const Generator& g) {
    ExactMatrix m(t.m * g.dagger_tilde, t.nu + g.dagger_nu);
    return {m.denom_exp(), m.numerator()};
}

struct Neighbor {
    std::size_t generator = 0;
    std::string label;
    BigInt edge_cost;
    Tilde tilde;
    VertexInfo info;
};

/// One neighbor per generator g: the vertex of g^dagger U. Vertices reached by
/// several generators are reported once, for the first generator.
inline std::vector<Neighbor> neighbors(const Tilde& t, const GateSet& gs) {
    std::vector<Neighbor> out;
    std::unordered_map<std::string, bool> seen;
    for (std::size_t k = 0; k < gs.generators.size(); ++k) {
        const Generator& g = gs.generators[k];
        Tilde child = apply_left(g, t);
        VertexInfo info = analyze_tilde(child);
        if (!seen.emplace(info.key.bytes, true).second) continue;
        out.push_back({k, g.label, g.cost, std::move(child), std::move(info)});
    }
    return out;
}

namespace detail {

/// Fixed pool running an indexed loop; results are written per index so the
/// output does not depend on scheduling.
class ParallelFor {
  public:
    explicit ParallelFor(unsigned threads) {
        for (unsigned t = 1; t < threads; ++t) workers_.emplace_back([this] { work(); });
    }
    ~ParallelFor() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& w : workers_) w.join();
    }
    ParallelFor(const ParallelFor&) = delete;
    ParallelFor& operator=(const ParallelFor&) = delete;

    void run(std::size_t count, const std::function<void(std::size_t)>& body) {
        if (workers_.empty() || count < 2) {
            for (std::size_t i = 0; i < count; ++i) body(i);
            return;
        }
        {
            std::lock_guard<std::mutex> lock(mu_);
            body_ = &body;
            count_ = count;
            next_ = 0;
            pending_ = workers_.size();
            error_ = nullptr;
            ++generation_;
        }
        cv_.notify_all();
        drain();
        std::unique_lock<std::mutex> lock(mu_);
        done_.wait(lock, [&] { return pending_ == 0; });
        body_ = nullptr;
        if (error_) std::rethrow_exception(error_);
    }

  private:
    void drain() {
        for (;;) {
            std::size_t i = next_.fetch_add(1);
            if (i >= count_) return;
            try {
                (*body_)(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu_);
                if (!error_) error_ = std::current_exception();
            }
        }
    }

    void work() {
        std::uint64_t seen = 0;
        for (;;) {
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            drain();
            std::lock_guard<std::mutex> lock(mu_);
            if (--pending_ == 0) done_.notify_all();
        }
    }

    std::vector<std::thread> workers_;
    std::mutex mu_;
    std::condition_variable cv_, done_;
    const std::function<void(std::size_t)>* body_ = nullptr;
    std::size_t count_ = 0;
    std::atomic<std::size_t> next_{0};
    std::size_t pending_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

/// Integral form with machine-word coefficients. Every operation reports
/// overflow instead of wrapping, and callers then fall back to BigInt.
struct SmallTilde {
    int nu = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<std::int64_t> data;
};

inline bool fits_word(__int128 x) { return x >= INT64_MIN && x <= INT64_MAX; }

inline std::optional<SmallTilde> to_small(const Tilde& t) {
    SmallTilde out{t.nu, t.m.rows(), t.m.cols(), {}};
    out.data.reserve(t.m.data().size());
    for (const auto& x : t.m.data()) {
        if (!fits_int64(x)) return std::nullopt;
        out.data.push_back(static_cast<std::int64_t>(x));
    }
    return out;
}

inline Tilde to_tilde(const SmallTilde& t, const FieldSpec& f) {
    OMatrix m(f, t.rows, t.cols);
    for (std::size_t i = 0; i < t.data.size(); ++i) m.data()[i] = t.data[i];
    return {t.nu, std::move(m)};
}

/// Sparse rows of Z(G) for left multiplication: row (r, a) lists ((k, b), coefficient).
struct LeftAction {
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> rows;
    int nu = 0;
};

inline LeftAction make_left_action(const OMatrix& g, int nu) {
    IntMatrix z = z_of_matrix(g);
    LeftAction out;
    out.nu = nu;
    out.rows.resize(z.rows());
    for (std::size_t r = 0; r < z.rows(); ++r)
        for (std::size_t c = 0; c < z.cols(); ++c)
            if (z(r, c) != 0) {
                require(fits_int64(z(r, c)), ErrorCode::kInvariant, "generator coefficient exceeds a word");
                out.rows[r].emplace_back(static_cast<std::uint32_t>(c), static_cast<std::int64_t>(z(r, c)));
            }
    return out;
}

class SmallRing {
  public:
    explicit SmallRing(const FieldSpec& f) : f_(f), d_(f.degree) {
        for (int k = 0; k < d_; ++k) c0_.push_back(static_cast<std::int64_t>(f.xi_pow_d_minus_1_unit_inv.coords[k]));
    }

    /// child = G * t, then strip common factors of xi. False on overflow.
    bool apply_left(const LeftAction& g, const SmallTilde& t, SmallTilde& child) const {
        const std::size_t d = static_cast<std::size_t>(d_);
        child.rows = t.rows;
        child.cols = t.cols;
        child.nu = t.nu + g.nu;
        child.data.assign(t.data.size(), 0);
        for (std::size_t zr = 0; zr < g.rows.size(); ++zr) {
            const std::size_t r = zr / d, a = zr % d;
            for (std::size_t c = 0; c < t.cols; ++c) {
                __int128 acc = 0;
                for (const auto& [zc, coef] : g.rows[zr])
                    acc += static_cast<__int128>(coef) * t.data[((zc / d) * t.cols + c) * d + zc % d];
                if (!fits_word(acc)) return false;
                child.data[(r * t.cols + c) * d + a] = static_cast<std::int64_t>(acc);
            }
        }
        return strip_xi(child);
    }

  private:
    bool divisible(const std::int64_t* x) const {
        std::int64_t s = 0;
        for (int k = 0; k < d_; ++k)
            if (f_.residue[k]) s += x[k] & 1;
        return (s & 1) == 0;
    }

    bool strip_xi(SmallTilde& t) const {
        const std::size_t entries = t.rows * t.cols;
        std::vector<__int128> tmp(d_);
        bool all_zero = std::all_of(t.data.begin(), t.data.end(), [](std::int64_t v) { return v == 0; });
        if (all_zero) {
            t.nu = 0;
            return true;
        }
        while (t.nu > 0) {
            for (std::size_t e = 0; e < entries; ++e)
                if (!divisible(&t.data[e * d_])) return true;
            for (std::size_t e = 0; e < entries; ++e) {
                std::int64_t* x = &t.data[e * d_];
                std::fill(tmp.begin(), tmp.end(), 0);
                for (int i = 0; i < d_; ++i) {
                    if (x[i] == 0) continue;
                    for (int j = 0; j < d_; ++j) {
                        if (c0_[j] == 0) continue;
                        for (const auto& [k, c] : f_.terms[i * d_ + j])
                            tmp[k] += static_cast<__int128>(c) * x[i] * c0_[j];
                    }
                }
                for (int k = 0; k < d_; ++k) {
                    __int128 h = tmp[k] / 2;
                    if (!fits_word(h)) return false;
                    x[k] = static_cast<std::int64_t>(h);
                }
            }
            --t.nu;
        }
        return true;
    }

    const FieldSpec& f_;
    int d_;
    std::vector<std::int64_t> c0_;
};

inline VertexInfo analyze_small(const SmallTilde& t, const FieldSpec& f) {
    CoeffView<std::int64_t> v{&f, t.rows, t.cols, t.data.data()};
    return analyze_coeffs(v, t.nu, [&] { return to_tilde(t, f).m; });
}

inline void check_input(const ExactMatrix& u, const GateSet& gs) {
    require(u.field() == gs.field_ref(), ErrorCode::kFieldMismatch,
            "input is over " + u.field().name + " but the gate set uses " + gs.field_ref().name);
    const std::size_t dim = std::size_t{1} << gs.n;
    require(u.rows() == dim, ErrorCode::kDimension, "input row count does not match the gate set's qubit count");
    require(u.cols() >= 1 && u.cols() <= dim && (u.cols() & (u.cols() - 1)) == 0, ErrorCode::kDimension,
            "input column count must be a power of two not exceeding the row count");
}

inline int input_qubits(const ExactMatrix& u) {
    int n = 0;
    while ((std::size_t{1} << n) < u.cols()) ++n;
    return n;
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

namespace detail {

/// Left multiplication by a fixed list of integral operators, on machine
/// words while the coefficients fit and on BigInt afterwards.
class LeftMultiplier {
  public:
    LeftMultiplier(const FieldSpec& f, std::vector<Tilde> ops, unsigned threads)
        : f_(f), ring_(f), ops_(std::move(ops)), pool_(std::max(1u, threads)) {
        for (const auto& op : ops_) actions_.push_back(make_left_action(op.m, op.nu));
        scratch_.resize(ops_.size());
        child_nu.resize(ops_.size());
        child_info.resize(ops_.size());
    }

    std::size_t size() const { return ops_.size(); }

    Tilde apply(std::size_t k, const Tilde& t) const {
        ExactMatrix m(ops_[k].m * t.m, t.nu + ops_[k].nu);
        return {m.denom_exp(), m.numerator()};
    }

    /// Sets the current vertex to ops[path.back()] ... ops[path.front()] * root.
    void load(const Tilde& root, const std::vector<std::uint32_t>& path) {
        small_ = to_small(root);
        SmallTilde next;
        std::size_t done = 0;
        for (; small_ && done < path.size(); ++done) {
            if (!ring_.apply_left(actions_[path[done]], *small_, next)) break;
            std::swap(*small_, next);
        }
        if (small_ && done == path.size()) return;
        big_ = small_ ? to_tilde(*small_, f_) : root;
        small_.reset();
        for (; done < path.size(); ++done) big_ = apply(path[done], big_);
    }

    /// Fills child_nu and child_info for every operator applied to the current vertex.
    void expand() {
        pool_.run(ops_.size(), [&](std::size_t k) {
            if (small_ && ring_.apply_left(actions_[k], *small_, scratch_[k])) {
                child_nu[k] = scratch_[k].nu;
                child_info[k] = analyze_small(scratch_[k], f_);
                return;
            }
            Tilde child = apply(k, small_ ? to_tilde(*small_, f_) : big_);
            child_nu[k] = child.nu;
            child_info[k] = analyze_tilde(child);
        });
    }

    std::vector<int> child_nu;
    std::vector<VertexInfo> child_info;

  private:
    const FieldSpec& f_;
    SmallRing ring_;
    std::vector<Tilde> ops_;
    std::vector<LeftAction> actions_;
    ParallelFor pool_;
    std::optional<SmallTilde> small_;
    Tilde big_;
    std::vector<SmallTilde> scratch_;
};

inline std::vector<std::uint32_t> path_from(std::int64_t id, const std::vector<std::int64_t>& parent,
                                            const std::vector<std::uint32_t>& via) {
    std::vector<std::uint32_t> path;
    for (; parent[id] >= 0; id = parent[id]) path.push_back(via[id]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace detail

/// Exact distances to the cost-zero vertex for the unitary vertices nearest to
/// it, plus a lower bound valid for every other vertex. min(distance, floor)
/// is a consistent heuristic.
struct DistanceTable {
    std::unordered_map<std::string, BigInt> exact;
    BigInt floor = 0;
    std::uint64_t expansions = 0;

    BigInt lookup(const std::string& key) const {
        auto it = exact.find(key);
        return it == exact.end() ? floor : it->second;
    }
};

/// Dijkstra outward from the cost-zero vertex over unitaries, expanding at
/// most `expansions` vertices. Every vertex still open has distance at least
/// L (the smallest open label), and any vertex beyond the open ones at least
/// L + c_min, so open vertices labelled no more than L + c_min are exact too.
inline DistanceTable build_distance_table(const GateSet& gs, std::uint64_t expansions, unsigned threads = 1) {
    DistanceTable table;
    if (gs.generators.empty()) return table;
    const BasisChange basis = gs.basis(gs.n);
    const FieldSpec& f = gs.field_ref();
    std::vector<Tilde> ops;
    BigInt c_min = gs.generators.front().cost;
    for (const auto& g : gs.generators) {
        require(g.cost > 0, ErrorCode::kInvalidArgument, "generator costs must be positive");
        ops.push_back(tilde_of(g.matrix, basis));
        c_min = std::min(c_min, g.cost);
    }
    detail::LeftMultiplier mult(f, std::move(ops), threads);
    const Tilde root{0, OMatrix::identity(f, std::size_t{1} << gs.n)};

    std::vector<std::int64_t> parent;
    std::vector<std::uint32_t> via;
    std::vector<BigInt> dist;
    std::vector<char> closed;
    std::unordered_map<std::string, std::size_t> index;
    using Entry = std::pair<BigInt, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;

    index.emplace(analyze_tilde(root).key.bytes, 0);
    parent.push_back(-1);
    via.push_back(0);
    dist.push_back(0);
    closed.push_back(0);
    open.push({BigInt(0), 0});
    auto drop_stale = [&] {
        while (!open.empty() && (closed[open.top().second] || open.top().first != dist[open.top().second])) open.pop();
    };
    for (drop_stale(); !open.empty() && table.expansions < expansions; drop_stale()) {
        const auto [d, id] = open.top();
        open.pop();
        closed[id] = 1;
        ++table.expansions;
        mult.load(root, detail::path_from(static_cast<std::int64_t>(id), parent, via));
        mult.expand();
        for (std::size_t k = 0; k < mult.size(); ++k) {
            BigInt nd = d + gs.generators[k].cost;
            auto [it, inserted] = index.emplace(std::move(mult.child_info[k].key.bytes), parent.size());
            if (inserted) {
                parent.push_back(static_cast<std::int64_t>(id));
                via.push_back(static_cast<std::uint32_t>(k));
                dist.push_back(nd);
                closed.push_back(0);
            } else if (closed[it->second] || nd >= dist[it->second]) {
                continue;
            } else {
                parent[it->second] = static_cast<std::int64_t>(id);
                via[it->second] = static_cast<std::uint32_t>(k);
                dist[it->second] = nd;
            }
            open.push({nd, it->second});
        }
    }
    require(!open.empty(), ErrorCode::kInvariant, "distance table search ran out of vertices");
    table.floor = open.top().first + c_min;
    for (auto& [key, id] : index)
        if (closed[id] || dist[id] <= table.floor) table.exact.emplace(key, dist[id]);
    return table;
}

namespace detail {

/// One A* run. Returns nothing when `cap` expansions pass without reaching a
/// goal and `soft_cap` is set; otherwise budget exhaustion throws.
inline std::optional<Circuit> astar_run(const ExactMatrix& u, const GateSet& gs, std::int64_t scale,
                                        const Budget& budget, const DistanceTable* table, std::uint64_t cap,
                                        bool soft_cap, std::chrono::steady_clock::time_point start,
                                        SearchStats& stats) {
    const BasisChange basis = gs.basis(input_qubits(u));
    const Tilde root = tilde_of(u, basis);
    const std::uint64_t expanded_before = stats.nodes_expanded;
    auto h = [&](const VertexInfo& info) {
        BigInt v = heuristic_value(info.coords, scale);
        if (table) v = std::max(v, table->lookup(info.key.bytes));
        return v;
    };

    struct Node {
        bool closed;
        int nu;
        BigInt g;
        const std::string* key;
    };
    struct Entry {
        BigInt f, g;
        std::size_t node;
    };
    std::vector<Node> nodes;
    std::vector<std::int64_t> parent;
    std::vector<std::uint32_t> via;
    std::unordered_map<std::string, std::size_t> index;
    auto worse = [&](const Entry& a, const Entry& b) {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        return *nodes[a.node].key > *nodes[b.node].key;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

    {
        VertexInfo root_info = analyze_tilde(root);
        BigInt h0 = h(root_info);
        auto it = index.emplace(std::move(root_info.key.bytes), 0).first;
        nodes.push_back({false, root.nu, BigInt(0), &it->first});
        parent.push_back(-1);
        via.push_back(0);
        open.push({h0, BigInt(0), 0});
    }

    std::vector<Tilde> ops;
    for (const auto& g : gs.generators) ops.push_back({g.dagger_nu, g.dagger_tilde});
    detail::LeftMultiplier mult(gs.field_ref(), std::move(ops), budget.threads);
    const std::size_t m = gs.generators.size();

    while (!open.empty()) {
        Entry top = open.top();
        open.pop();
        Node& cur = nodes[top.node];
        if (cur.closed || top.g != cur.g) continue;
        if (cur.nu == 0) {
            Circuit c;
            c.gateset_id = gs.name;
            c.side = RemainderSide::kRight;
            ExactMatrix rem = u;
            for (auto k : detail::path_from(static_cast<std::int64_t>(top.node), parent, via)) {
                const Generator& g = gs.generators[k];
                c.labels.push_back(g.label);
                c.cost += g.cost;
                rem = dagger(g.matrix) * rem;
            }
            require(nu(rem, basis) == 0, ErrorCode::kInvariant, "A* goal vertex does not have a cost-zero remainder");
            c.remainder = std::move(rem);
            stats.wall_ms = elapsed_ms(start);
            c.stats = stats;
            return c;
        }
        if (soft_cap && stats.nodes_expanded - expanded_before >= cap) return std::nullopt;
        if (stats.nodes_expanded >= budget.node_cap ||
            (budget.time_cap_ms && elapsed_ms(start) > *budget.time_cap_ms)) {
            std::ostringstream msg;
            msg << "search budget exhausted after " << stats.nodes_expanded << " expansions; best frontier f = "
                << top.f;
            fail(ErrorCode::kBudgetExhausted, msg.str());
        }
        cur.closed = true;
        ++stats.nodes_expanded;
        if (budget.progress && stats.nodes_expanded % budget.progress_every == 0) {
            stats.wall_ms = detail::elapsed_ms(start);
            budget.progress(stats, top.f);
        }
        const BigInt g_cur = cur.g;
        mult.load(root, detail::path_from(static_cast<std::int64_t>(top.node), parent, via));
        mult.expand();
        for (std::size_t k = 0; k < m; ++k) {
            ++stats.nodes_generated;
            BigInt g_new = g_cur + gs.generators[k].cost;
            BigInt h_new = h(mult.child_info[k]);
            auto [it, inserted] = index.emplace(std::move(mult.child_info[k].key.bytes), nodes.size());
            if (inserted) {
                nodes.push_back({false, mult.child_nu[k], g_new, &it->first});
                parent.push_back(static_cast<std::int64_t>(top.node));
                via.push_back(static_cast<std::uint32_t>(k));
            } else {
                Node& old = nodes[it->second];
                if (g_new >= old.g) continue;
                if (old.closed && scale == 1) continue;  // consistent heuristic: first expansion is optimal
                old.g = g_new;
                old.closed = false;
                parent[it->second] = static_cast<std::int64_t>(top.node);
                via[it->second] = static_cast<std::uint32_t>(k);
            }
            open.push({g_new + h_new, g_new, it->second});
        }
    }
    fail(ErrorCode::kInvariant, "A* frontier emptied without reaching a cost-zero vertex");
}

}  // namespace detail

/// Optimal (at scale 1) synthesis by A* over the problem graph. Unitary
/// inputs that are not solved within budget.table_after expansions are
/// searched again with a distance table around the goal.
inline Circuit astar_synthesize(const ExactMatrix& u, const GateSet& gs, std::int64_t scale = 1,
                                const Budget& budget = {}) {
    require(scale > 0, ErrorCode::kInvalidArgument, "scale must be positive");
    detail::check_input(u, gs);
    const auto start = std::chrono::steady_clock::now();
    SearchStats stats;
    // An isometry's goal is a set of vertices, so the table does not apply.
    if (u.rows() != u.cols() || (!budget.distance_table && budget.table_expansions == 0))
        return *detail::astar_run(u, gs, scale, budget, nullptr, 0, false, start, stats);
    std::shared_ptr<const DistanceTable> table = budget.distance_table;
    if (!table) {
        const std::uint64_t first = std::min(budget.table_after, budget.node_cap);
        if (auto c = detail::astar_run(u, gs, scale, budget, nullptr, first, true, start, stats)) return *c;
        if (stats.nodes_expanded < budget.node_cap)
            table = std::make_shared<DistanceTable>(build_distance_table(gs, budget.table_expansions, budget.threads));
    }
    return *detail::astar_run(u, gs, scale, budget, table.get(), 0, false, start, stats);
}

/// Greedy search: repeatedly applies the first generator whose removal strictly
/// decreases the coordinates in the weak-majorization order.
inline Circuit best_first_synthesize(const ExactMatrix& u, const GateSet& gs) {
    detail::check_input(u, gs);
    require(u.rows() == u.cols(), ErrorCode::kDimension, "best-first synthesis needs a unitary");
    const auto start = std::chrono::steady_clock::now();
    const BasisChange basis = gs.basis(gs.n);
    Tilde v = tilde_of(u, basis);
    IntVector cv = coords_from_valuations(unitary_snf(v), v.nu, u.rows(), u.cols()).values;
    std::vector<std::size_t> applied;
    SearchStats stats;
    while (v.nu > 0) {
        ++stats.outer_iterations;
        bool reduced = false;
        for (std::size_t k = 0; k < gs.generators.size() && !reduced; ++k) {
            ++stats.nodes_generated;
            Tilde w = apply_right(v, gs.generators[k]);
            IntVector cw = coords_from_valuations(unitary_snf(w), w.nu, u.rows(), u.cols()).values;
            if (strictly_weakly_majorizes(cv, cw)) {
                v = std::move(w);
                cv = std::move(cw);
                applied.push_back(k);
                reduced = true;
            }
        }
        if (!reduced) {
            std::ostringstream msg;
            msg << "no generator reduces the coordinates (";
            for (std::size_t j = 0; j < cv.size(); ++j) msg << (j ? "," : "") << cv[j];
            msg << ") after " << applied.size() << " steps";
            fail(ErrorCode::kNoReduction, msg.str());
        }
        ++stats.nodes_expanded;
    }
    Circuit c;
    c.gateset_id = gs.name;
    c.side = RemainderSide::kLeft;
    ExactMatrix rem = u;
    for (auto k : applied) rem = rem * dagger(gs.generators[k].matrix);
    for (auto it = applied.rbegin(); it != applied.rend(); ++it) {
        c.labels.push_back(gs.generators[*it].label);
        c.cost += gs.generators[*it].cost;
    }
    require(nu(rem, basis) == 0, ErrorCode::kInvariant, "best-first remainder is not cost-zero");
    c.remainder = std::move(rem);
    stats.wall_ms = detail::elapsed_ms(start);
    c.stats = stats;
    return c;
}

/// Exact check of the circuit identity and of the remainder being cost-zero.
inline bool verify_circuit(const ExactMatrix& u, const Circuit& c, const GateSet& gs) {
    std::vector<const Generator*> gens;
    for (const auto& label : c.labels) gens.push_back(&gs.find(label));
    if (!(u.field() == gs.field_ref()) || !(c.remainder.field() == gs.field_ref())) return false;
    if (u.rows() != (std::size_t{1} << gs.n) || c.remainder.rows() != u.rows()) return false;
    ExactMatrix prod = ExactMatrix::identity(gs.field_ref(), u.rows());
    for (const auto* g : gens) prod = prod * g->matrix;
    ExactMatrix total;
    if (c.side == RemainderSide::kRight) {
        if (c.remainder.cols() != u.cols()) return false;
        total = prod * c.remainder;
    } else {
        if (c.remainder.cols() != u.rows() || u.cols() != u.rows()) return false;
        total = c.remainder * prod;
    }
    if (!(total == u)) return false;
    const int n_in = detail::input_qubits(c.remainder);
    if ((std::size_t{1} << n_in) != c.remainder.cols()) return false;
    return nu(c.remainder, gs.basis(n_in)) == 0;
}

}  // namespace xisynth
