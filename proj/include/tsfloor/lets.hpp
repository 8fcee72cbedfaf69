#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <memory>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tsfloor/code.hpp"
#include "tsfloor/util.hpp"

namespace tsfloor {

// ---------------------------------------------------------------------------
// LETS subgraphs.
// ---------------------------------------------------------------------------

struct LetsSubgraph {
    std::vector<int> vns;  // sorted graph VN ids
    struct MissatCn {
        int cn;
        int v1, v2;  // v1 < v2, graph VN ids
    };
    struct UnsatCn {
        int cn;
        int vn;
    };
    std::vector<MissatCn> missat;  // ascending cn id
    std::vector<UnsatCn> unsat;    // ascending cn id

    int a() const { return static_cast<int>(vns.size()); }
    int b() const { return static_cast<int>(unsat.size()); }
    int m_s() const { return 2 * static_cast<int>(missat.size()); }
    /// All VNs have degree 2 in the induced subgraph (single cycle).
    bool is_simple_cycle() const { return b() == 0 && 2 * a() == m_s(); }

    std::string class_label() const { return "(" + std::to_string(a()) + "," + std::to_string(b()) + ")"; }
};

/// Induce the subgraph of a VN set. Returns false if a CN has degree >= 3
/// (not elementary) — out is left unspecified in that case.
inline bool induce_subgraph(const TannerGraph& g, const std::vector<int>& vn_set, LetsSubgraph& out) {
    out.vns = vn_set;
    std::sort(out.vns.begin(), out.vns.end());
    out.missat.clear();
    out.unsat.clear();
    std::map<int, std::vector<int>> cn_members;
    for (int v : out.vns)
        for (int c : g.vn_cns[v]) {
            auto& mem = cn_members[c];
            mem.push_back(v);
            if (mem.size() > 2) return false;
        }
    for (auto& [cn, mem] : cn_members) {
        if (mem.size() == 1)
            out.unsat.push_back({cn, mem[0]});
        else
            out.missat.push_back({cn, std::min(mem[0], mem[1]), std::max(mem[0], mem[1])});
    }
    return true;
}

inline bool is_leafless(const LetsSubgraph& s) {
    std::map<int, int> deg2;
    for (auto& m : s.missat) {
        ++deg2[m.v1];
        ++deg2[m.v2];
    }
    for (int v : s.vns)
        if (deg2[v] < 2) return false;
    return true;
}

/// Connectivity through missatisfied CNs (a disjoint union of trapping sets
/// is not treated as one structure).
inline bool is_connected(const LetsSubgraph& s) {
    if (s.vns.empty()) return false;
    std::map<int, std::vector<int>> adj;
    for (auto& m : s.missat) {
        adj[m.v1].push_back(m.v2);
        adj[m.v2].push_back(m.v1);
    }
    std::set<int> seen{s.vns[0]};
    std::vector<int> stack{s.vns[0]};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[v])
            if (seen.insert(u).second) stack.push_back(u);
    }
    return seen.size() == s.vns.size();
}

/// Full LETS validity check straight from the graph (independent re-check).
inline bool is_lets(const TannerGraph& g, const std::vector<int>& vn_set) {
    LetsSubgraph s;
    if (!induce_subgraph(g, vn_set, s)) return false;
    return is_leafless(s);
}

inline std::vector<int> shifted_vns(const TannerGraph& g, const std::vector<int>& vns, int shift) {
    std::vector<int> out;
    out.reserve(vns.size());
    for (int v : vns) {
        const int blk = v / g.p, off = v % g.p;
        out.push_back(blk * g.p + (off + shift) % g.p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Lexicographically smallest cyclic shift of the VN set (orbit key).
inline std::vector<int> orbit_canonical_vns(const TannerGraph& g, const std::vector<int>& vns) {
    std::vector<int> best = vns;
    std::sort(best.begin(), best.end());
    for (int s = 1; s < g.p; ++s) best = std::min(best, shifted_vns(g, vns, s));
    return best;
}

// ---------------------------------------------------------------------------
// Desk-scale enumerator: chordless-cycle seeds plus ear/lollipop expansion,
// all intermediates leafless and elementary. QC symmetry is exploited by
// rooting cycle seeds at offset-0 VNs and expanding orbits afterwards.
// ---------------------------------------------------------------------------

struct EnumerateOptions {
    std::uint64_t budget = 100000000;  // visited partial states
    bool exploit_qc_symmetry = true;
    int threads = 1;  // cycle-seed shards run in parallel; results are merged and deduplicated
};

namespace detail {

struct LetsSearch {
    const TannerGraph& g;
    int a_max, b_max;
    EnumerateOptions opt;
    std::uint64_t visited = 0;
    bool girth_at_least_6 = false;
    int shard = 0, nshards = 1;  // cycle roots are dealt round-robin to shards

    // incremental induced-subgraph state
    std::vector<int> set_vns;
    std::vector<int> cn_deg;       // induced degree per CN
    std::vector<int> cn_owner;     // for deg-1 CNs: the member VN
    std::vector<int> unsat_count;  // per VN in set (indexed by VN id)
    std::vector<char> in_set;
    int b_cur = 0;

    std::unordered_set<std::string> emitted;  // sorted VN lists
    std::vector<std::vector<int>> results;    // LETS sets within (a_max, b_max)
    std::vector<std::vector<int>> worklist;

    LetsSearch(const TannerGraph& graph, int amax, int bmax, EnumerateOptions o)
        : g(graph), a_max(amax), b_max(bmax), opt(o) {
        cn_deg.assign(g.cn_count, 0);
        cn_owner.assign(g.cn_count, -1);
        unsat_count.assign(g.vn_count, 0);
        in_set.assign(g.vn_count, 0);
        girth_at_least_6 = !has_four_cycle();
    }

    bool has_four_cycle() const {
        std::vector<int> stamp(g.vn_count, -1);
        for (int v = 0; v < g.vn_count; ++v) {
            for (int c : g.vn_cns[v])
                for (int u : g.cn_vns[c]) {
                    if (u <= v) continue;
                    if (stamp[u] == v) return true;
                    stamp[u] = v;
                }
        }
        return false;
    }

    // Max possible drop of b when one more VN joins a set of the given size.
    int step_reduction(int size) const {
        int best = 0;
        for (int d : degree_values) {
            const int closable = girth_at_least_6 ? std::min(d, size) : d;
            best = std::max(best, 2 * closable - d);
        }
        return best;
    }

    int max_reduction(int size) const {  // over all remaining additions
        int total = 0;
        for (int s = size; s < a_max; ++s) total += std::max(0, step_reduction(s));
        return total;
    }

    std::vector<int> degree_values;

    void tick() {
        if (++visited > opt.budget) throw error("enumerate_lets: node budget exceeded");
    }

    void add_vn(int v) {
        in_set[v] = 1;
        set_vns.push_back(v);
        unsat_count[v] = 0;
        for (int c : g.vn_cns[v]) {
            if (cn_deg[c] == 0) {
                cn_deg[c] = 1;
                cn_owner[c] = v;
                ++unsat_count[v];
                ++b_cur;
            } else {
                ++cn_deg[c];
                if (cn_deg[c] == 2) {
                    --unsat_count[cn_owner[c]];
                    --b_cur;
                }
            }
        }
    }

    void remove_vn(int v) {
        for (int c : g.vn_cns[v]) {
            if (cn_deg[c] == 1) {
                cn_deg[c] = 0;
                cn_owner[c] = -1;
                --b_cur;
            } else {
                --cn_deg[c];
                if (cn_deg[c] == 1) {
                    // the remaining member owns the CN again
                    for (int u : g.cn_vns[c])
                        if (u != v && in_set[u]) {
                            cn_owner[c] = u;
                            ++unsat_count[u];
                            break;
                        }
                    ++b_cur;
                }
            }
        }
        in_set[v] = 0;
        set_vns.pop_back();
    }

    bool can_add(int v) const {  // elementary preserved?
        for (int c : g.vn_cns[v])
            if (cn_deg[c] >= 2) return false;
        return true;
    }

    bool prune_now() const {
        const int size = static_cast<int>(set_vns.size());
        if (b_cur - max_reduction(size) > b_max) return true;
        if (girth_at_least_6) {
            const int k = a_max - size;
            for (int v : set_vns)
                if (unsat_count[v] > b_max + k) return true;
        }
        return false;
    }

    bool deficient(int v) const {  // fewer than 2 missatisfied CNs
        int deg2 = 0;
        for (int c : g.vn_cns[v])
            if (cn_deg[c] >= 2) ++deg2;
        return deg2 < 2;
    }

    void emit_current() {
        std::vector<int> key = set_vns;
        std::sort(key.begin(), key.end());
        std::string skey(reinterpret_cast<const char*>(key.data()), key.size() * sizeof(int));
        if (!emitted.insert(std::move(skey)).second) return;
        if (b_cur <= b_max) results.push_back(key);
        if (static_cast<int>(key.size()) < a_max && b_cur <= b_max + max_reduction(static_cast<int>(key.size())))
            worklist.push_back(key);
    }

    // --- cycle seeds -------------------------------------------------------

    void find_cycle_seeds() {
        int root_index = 0;
        for (int v0 = 0; v0 < g.vn_count; ++v0) {
            if (opt.exploit_qc_symmetry && (v0 % g.p) != 0) continue;
            if (root_index++ % nshards != shard) continue;
            add_vn(v0);
            cycle_dfs(v0, v0, -1);
            remove_vn(v0);
        }
    }

    // Chordless cycle DFS rooted at min VN v0; all other cycle VNs > v0.
    // A candidate w extends the path if it touches only the path end; it
    // closes the cycle if it additionally touches v0 (then the branch stops,
    // anything longer through w would carry a chord).
    void cycle_dfs(int v0, int end, int second) {
        tick();
        const int size = static_cast<int>(set_vns.size());
        if (size >= a_max) return;
        if (b_cur - max_reduction(size) > b_max) return;
        for (int c : g.vn_cns[end]) {
            if (cn_deg[c] != 1 || cn_owner[c] != end) continue;
            for (int w : g.cn_vns[c]) {
                if (w <= v0 || in_set[w]) continue;
                int shares_v0 = 0;
                bool chord = false;
                for (int c2 : g.vn_cns[w]) {
                    if (c2 == c) continue;  // the path edge itself
                    if (cn_deg[c2] >= 2) {
                        chord = true;
                    } else if (cn_deg[c2] == 1) {
                        if (size >= 2 && cn_owner[c2] == v0)
                            ++shares_v0;
                        else
                            chord = true;  // touches end twice or a mid-path VN
                    }
                }
                if (chord || shares_v0 > 1) continue;
                if (shares_v0 == 1) {
                    if (second >= 0 && second < w) {  // canonical direction, length >= 3
                        add_vn(w);
                        emit_current();
                        remove_vn(w);
                    }
                } else {
                    add_vn(w);
                    cycle_dfs(v0, w, second < 0 ? w : second);
                    remove_vn(w);
                }
            }
        }
    }

    // Degenerate two-VN cycles (only in girth-4 graphs).
    void find_pair_seeds() {
        if (girth_at_least_6) return;
        int root_index = 0;
        for (int v0 = 0; v0 < g.vn_count; ++v0) {
            if (opt.exploit_qc_symmetry && (v0 % g.p) != 0) continue;
            if (root_index++ % nshards != shard) continue;
            for (int c : g.vn_cns[v0])
                for (int w : g.cn_vns[c]) {
                    if (w <= v0) continue;
                    int shared = 0;
                    for (int c2 : g.vn_cns[v0])
                        for (int u : g.cn_vns[c2])
                            if (u == w) ++shared;
                    if (shared >= 2) {
                        add_vn(v0);
                        add_vn(w);
                        emit_current();
                        remove_vn(w);
                        remove_vn(v0);
                    }
                }
        }
    }

    // --- ear / lollipop expansion ------------------------------------------

    void expand_all() {
        while (!worklist.empty()) {
            std::vector<int> base = std::move(worklist.back());
            worklist.pop_back();
            for (int v : base) add_vn(v);
            // ears start at any unsatisfied CN of the base set
            std::vector<int> unsat_cns;
            for (int v : base)
                for (int c : g.vn_cns[v])
                    if (cn_deg[c] == 1) unsat_cns.push_back(c);
            std::sort(unsat_cns.begin(), unsat_cns.end());
            unsat_cns.erase(std::unique(unsat_cns.begin(), unsat_cns.end()), unsat_cns.end());
            for (int c : unsat_cns)
                for (int w : g.cn_vns[c]) {
                    if (in_set[w] || !can_add(w)) continue;
                    add_vn(w);
                    ear_walk(w);
                    remove_vn(w);
                }
            for (auto it = base.rbegin(); it != base.rend(); ++it) remove_vn(*it);
        }
    }

    void ear_walk(int end) {
        tick();
        if (prune_now()) return;
        if (!deficient(end)) {
            emit_current();
            return;  // supersets are reached by fresh ears from the emitted set
        }
        if (static_cast<int>(set_vns.size()) >= a_max) return;
        for (int c : g.vn_cns[end]) {
            if (cn_deg[c] != 1 || cn_owner[c] != end) continue;
            for (int w : g.cn_vns[c]) {
                if (in_set[w] || !can_add(w)) continue;
                add_vn(w);
                ear_walk(w);
                remove_vn(w);
            }
        }
    }
};

}  // namespace detail

/// All connected LETSs with a <= a_max and b <= b_max, full multiplicity (QC
/// orbits are searched once and expanded afterwards).
inline std::vector<LetsSubgraph> enumerate_lets(const TannerGraph& g, int a_max, int b_max,
                                                EnumerateOptions opt = {}) {
    require(a_max >= 2, "enumerate_lets: a_max too small");
    const int nshards = std::max(1, opt.threads);
    std::vector<int> degree_values;
    {
        std::set<int> degs;
        for (int v = 0; v < g.vn_count; ++v) degs.insert(g.vn_degree(v));
        degree_values.assign(degs.begin(), degs.end());
    }
    std::vector<std::unique_ptr<detail::LetsSearch>> searches;
    EnumerateOptions shard_opt = opt;
    shard_opt.budget = std::max<std::uint64_t>(1, opt.budget / nshards);
    for (int t = 0; t < nshards; ++t) {
        searches.push_back(std::make_unique<detail::LetsSearch>(g, a_max, b_max, shard_opt));
        searches.back()->degree_values = degree_values;
        searches.back()->shard = t;
        searches.back()->nshards = nshards;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nshards);
    for (int t = 0; t < nshards; ++t)
        pool.emplace_back([&, t]() {
            try {
                searches[t]->find_pair_seeds();
                searches[t]->find_cycle_seeds();
                searches[t]->expand_all();
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::set<std::vector<int>> all;
    for (auto& search : searches)
        for (auto& vns : search->results) {
            for (int s = 0; s < (opt.exploit_qc_symmetry ? g.p : 1); ++s) {
                auto shifted = shifted_vns(g, vns, s);
                if (is_lets(g, shifted)) all.insert(std::move(shifted));
            }
        }
    std::vector<LetsSubgraph> out;
    for (auto& vns : all) {
        LetsSubgraph s;
        bool ok = induce_subgraph(g, vns, s);
        require(ok && is_leafless(s), "enumerate_lets: internal validity failure");
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// TS list files: one LETS per line, sorted 1-based VN indices.
// ---------------------------------------------------------------------------

inline std::vector<LetsSubgraph> read_ts_list(const TannerGraph& g, std::istream& in) {
    std::vector<LetsSubgraph> out;
    std::string line;
    while (std::getline(in, line)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        std::vector<int> vns;
        for (auto& t : toks) {
            int v = std::stoi(t) - 1;
            require(v >= 0 && v < g.vn_count, "ts list: VN index out of range");
            vns.push_back(v);
        }
        LetsSubgraph s;
        require(induce_subgraph(g, vns, s), "ts list: set is not elementary");
        require(is_leafless(s), "ts list: set is not leafless");
        out.push_back(std::move(s));
    }
    return out;
}

inline void write_ts_list(const std::vector<LetsSubgraph>& lets, std::ostream& out) {
    for (auto& s : lets) {
        for (std::size_t i = 0; i < s.vns.size(); ++i) out << (i ? " " : "") << s.vns[i] + 1;
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// TS layer profile.
// ---------------------------------------------------------------------------

struct Tslp {
    struct MissatEntry {
        int cn_type;                     // base row, 0-based
        int position;                    // update slot of that row, 0-based
        int layer_index;                 // 1..J among the LETS's missatisfied layers
        std::vector<int> external_types; // base columns of the d_c-2 external VNs, sorted
    };
    struct UnsatEntry {
        int cn_type;
        int position;
        int internal_vn_type;
    };
    int num_layers = 0;                  // J
    std::vector<MissatEntry> missat;     // aligned with LetsSubgraph::missat
    std::vector<UnsatEntry> unsat;       // aligned with LetsSubgraph::unsat
};

inline Tslp compute_tslp(const LetsSubgraph& s, const TannerGraph& g, const LayerPermutation& perm) {
    require(static_cast<int>(perm.size()) == g.m_b, "compute_tslp: permutation length != m_b");
    std::vector<int> pos(g.m_b);
    for (int slot = 0; slot < g.m_b; ++slot) pos[perm[slot]] = slot;

    Tslp t;
    std::set<int> layer_positions;
    for (auto& m : s.missat) layer_positions.insert(pos[g.cn_type(m.cn)]);
    t.num_layers = static_cast<int>(layer_positions.size());
    std::vector<int> ordered(layer_positions.begin(), layer_positions.end());

    for (auto& m : s.missat) {
        Tslp::MissatEntry e;
        e.cn_type = g.cn_type(m.cn);
        e.position = pos[e.cn_type];
        e.layer_index =
            static_cast<int>(std::lower_bound(ordered.begin(), ordered.end(), e.position) - ordered.begin()) + 1;
        for (int v : g.cn_vns[m.cn])
            if (v != m.v1 && v != m.v2) e.external_types.push_back(g.vn_type(v));
        std::sort(e.external_types.begin(), e.external_types.end());
        t.missat.push_back(std::move(e));
    }
    for (auto& u : s.unsat) {
        Tslp::UnsatEntry e;
        e.cn_type = g.cn_type(u.cn);
        e.position = pos[e.cn_type];
        e.internal_vn_type = g.vn_type(u.vn);
        t.unsat.push_back(e);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Canonical structure ids and TSLP digests (exact, branch-and-bound over VN
// relabelings; a <= 8 keeps this cheap).
// ---------------------------------------------------------------------------

namespace detail {

struct LocalStructure {
    int a = 0;
    std::vector<int> dv;                  // Tanner degree per local VN
    std::vector<std::vector<int>> madj;   // missat multiplicity matrix a x a
    std::vector<int> uns;                 // unsat count per local VN
};

inline LocalStructure local_structure(const LetsSubgraph& s, const TannerGraph& g) {
    LocalStructure L;
    L.a = s.a();
    std::map<int, int> idx;
    for (int i = 0; i < L.a; ++i) idx[s.vns[i]] = i;
    L.dv.resize(L.a);
    for (int i = 0; i < L.a; ++i) L.dv[i] = g.vn_degree(s.vns[i]);
    L.madj.assign(L.a, std::vector<int>(L.a, 0));
    for (auto& m : s.missat) {
        ++L.madj[idx.at(m.v1)][idx.at(m.v2)];
        ++L.madj[idx.at(m.v2)][idx.at(m.v1)];
    }
    L.uns.assign(L.a, 0);
    for (auto& u : s.unsat) ++L.uns[idx.at(u.vn)];
    return L;
}

/// Exact lexicographic minimization of the labeled adjacency signature over
/// all VN orderings; returns the minimal signature and every ordering that
/// attains it (the automorphisms of the canonical form).
struct CanonResult {
    std::vector<int> signature;
    std::vector<std::vector<int>> argmin_perms;  // perm[new_index] = old local VN
};

inline CanonResult canonical_structure(const LocalStructure& L) {
    const int a = L.a;
    CanonResult best;
    std::vector<int> perm;        // chosen old indices
    std::vector<char> used(a, 0);
    std::vector<int> partial;     // growing signature

    auto cell_signature = [&](int old_v) {
        // cells appended when old_v is placed at position perm.size():
        // (dv, unsat, madj to already placed in order)
        std::vector<int> cells;
        cells.push_back(L.dv[old_v]);
        cells.push_back(L.uns[old_v]);
        for (int k = 0; k < static_cast<int>(perm.size()); ++k) cells.push_back(L.madj[old_v][perm[k]]);
        return cells;
    };

    std::function<void()> rec = [&]() {
        const std::size_t depth = perm.size();
        if (depth == static_cast<std::size_t>(a)) {
            if (best.signature.empty() || partial < best.signature) {
                best.signature = partial;
                best.argmin_perms.clear();
            }
            if (partial == best.signature) best.argmin_perms.push_back(perm);
            return;
        }
        for (int v = 0; v < a; ++v) {
            if (used[v]) continue;
            auto cells = cell_signature(v);
            // lexicographic branch & bound against the best signature
            if (!best.signature.empty()) {
                const std::size_t off = partial.size();
                int cmp = 0;
                for (std::size_t k = 0; k < cells.size() && off + k < best.signature.size(); ++k) {
                    if (cells[k] != best.signature[off + k]) {
                        cmp = cells[k] < best.signature[off + k] ? -1 : 1;
                        break;
                    }
                }
                if (cmp > 0) continue;
            }
            used[v] = 1;
            perm.push_back(v);
            const std::size_t mark = partial.size();
            partial.insert(partial.end(), cells.begin(), cells.end());
            rec();
            partial.resize(mark);
            perm.pop_back();
            used[v] = 0;
        }
    };
    rec();
    return best;
}

inline std::string ints_to_string(const std::vector<int>& v) {
    std::string s;
    for (int x : v) {
        s += std::to_string(x);
        s += ',';
    }
    return s;
}

}  // namespace detail

/// Canonical topology signature of a LETS (isomorphism-class id).
inline std::string structure_id(const LetsSubgraph& s, const TannerGraph& g) {
    auto L = detail::local_structure(s, g);
    auto c = detail::canonical_structure(L);
    return detail::ints_to_string(c.signature);
}

/// Canonical TSLP digest: minimal serialization over the orderings that attain
/// the canonical structure signature, so isomorphic LETSs get equal digests
/// exactly when their layer profiles agree.
inline std::string tslp_digest(const LetsSubgraph& s, const TannerGraph& g, const LayerPermutation& perm) {
    auto L = detail::local_structure(s, g);
    auto c = detail::canonical_structure(L);
    Tslp t = compute_tslp(s, g, perm);

    std::map<int, int> idx;
    for (int i = 0; i < s.a(); ++i) idx[s.vns[i]] = i;

    std::string best;
    for (auto& p : c.argmin_perms) {
        std::vector<int> newpos(s.a());
        for (int ni = 0; ni < s.a(); ++ni) newpos[p[ni]] = ni;

        std::vector<std::vector<int>> mrecs, urecs;
        for (std::size_t k = 0; k < s.missat.size(); ++k) {
            auto& m = s.missat[k];
            auto& e = t.missat[k];
            int i = newpos[idx.at(m.v1)], j = newpos[idx.at(m.v2)];
            std::vector<int> rec{std::min(i, j), std::max(i, j), e.cn_type, e.position, e.layer_index};
            rec.insert(rec.end(), e.external_types.begin(), e.external_types.end());
            mrecs.push_back(std::move(rec));
        }
        for (std::size_t k = 0; k < s.unsat.size(); ++k) {
            auto& u = s.unsat[k];
            auto& e = t.unsat[k];
            urecs.push_back({newpos[idx.at(u.vn)], e.cn_type, e.position, e.internal_vn_type});
        }
        std::sort(mrecs.begin(), mrecs.end());
        std::sort(urecs.begin(), urecs.end());
        std::vector<int> flat{t.num_layers};
        for (auto& r : mrecs) {
            flat.push_back(-1);
            flat.insert(flat.end(), r.begin(), r.end());
        }
        for (auto& r : urecs) {
            flat.push_back(-2);
            flat.insert(flat.end(), r.begin(), r.end());
        }
        std::string ser = detail::ints_to_string(flat);
        if (best.empty() || ser < best) best = std::move(ser);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Grouping by (class, structure, TSLP).
// ---------------------------------------------------------------------------

struct TsGroup {
    LetsSubgraph representative;
    int multiplicity = 0;
    std::string label;         // "(a,b)"
    std::string structure;     // canonical structure signature
    std::string tslp;          // canonical TSLP digest
    int structure_index = 0;   // per-class index of the structure (1-based)
    int group_index = 0;       // per-class index of the group (1-based)
};

/// Partition LETSs into groups with equal structure and TSLP. Cyclic-shift
/// orbits share both (Lemma-1 property), so digests are computed once per
/// orbit.
inline std::vector<TsGroup> group_by_tslp(const std::vector<LetsSubgraph>& lets, const TannerGraph& g,
                                          const LayerPermutation& perm) {
    std::map<std::vector<int>, std::vector<const LetsSubgraph*>> orbits;
    for (auto& s : lets) orbits[orbit_canonical_vns(g, s.vns)].push_back(&s);

    struct Key {
        std::string label, structure, tslp;
        bool operator<(const Key& o) const {
            return std::tie(label, structure, tslp) < std::tie(o.label, o.structure, o.tslp);
        }
    };
    std::map<Key, TsGroup> groups;
    for (auto& [canon, members] : orbits) {
        const LetsSubgraph& rep = *members.front();
        Key k{rep.class_label(), structure_id(rep, g), tslp_digest(rep, g, perm)};
        auto it = groups.find(k);
        if (it == groups.end()) {
            TsGroup grp;
            grp.representative = rep;
            grp.multiplicity = static_cast<int>(members.size());
            grp.label = k.label;
            grp.structure = k.structure;
            grp.tslp = k.tslp;
            groups.emplace(k, std::move(grp));
        } else {
            it->second.multiplicity += static_cast<int>(members.size());
        }
    }
    std::vector<TsGroup> out;
    std::map<std::string, std::map<std::string, int>> structure_ids;
    std::map<std::string, int> group_counter;
    for (auto& [k, grp] : groups) {
        auto& sid = structure_ids[k.label];
        if (!sid.count(k.structure)) {
            const int next = static_cast<int>(sid.size()) + 1;
            sid[k.structure] = next;
        }
        TsGroup g2 = grp;
        g2.structure_index = sid[k.structure];
        g2.group_index = ++group_counter[k.label];
        out.push_back(std::move(g2));
    }
    return out;
}

}  // namespace tsfloor
