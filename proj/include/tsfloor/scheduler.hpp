#pragma once

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>
#include <vector>

#include "tsfloor/estimator.hpp"
#include "tsfloor/lets.hpp"
#include "tsfloor/state_space.hpp"

namespace tsfloor {

struct ScheduleEntry {
    LayerPermutation perm;       // base-row order
    double r_tilde = 0.0;        // dominant eigenvalue of the dominant group's composite
    double step1_estimate = 0.0; // aggregated error floor, averaged-DE approximation
    double step2_estimate = -1.0;  // exact-DE estimate (< 0 when not shortlisted)
    bool shortlisted = false;
};

struct ScheduleReport {
    std::vector<ScheduleEntry> entries;  // one per evaluated schedule
    int winner = -1;                     // index into entries (after step 2)
    int reference_iterations = 0;
};

struct ScheduleSearchOptions {
    int shortlist_size = 10;
    int de_iterations = 20;
    QuantSpec coarse{0.25, 31.75};
    QuantSpec exact{0.05, 31.75};
    IndicatorOptions indicator;
    int sample = 0;          // 0 = exhaustive; otherwise evaluate this many sampled permutations
    std::uint64_t seed = 1;  // sampling seed
    int threads = 0;         // 0 = hardware_concurrency
    std::uint64_t factorial_budget = 50000;  // largest m_b! accepted without sampling
};

namespace detail {

inline std::vector<LayerPermutation> all_permutations(int n) {
    LayerPermutation p = identity_permutation(n);
    std::vector<LayerPermutation> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace detail

/// Failure estimates for every TS group of a catalog under one schedule,
/// reusing cached composites per distinct layer assignment.
struct GroupEvaluator {
    const TannerGraph& graph;
    const BaseGraph& base;
    std::vector<TsGroup> groups;

    struct PerGroup {
        LetsSubgraph rep;
    };

    explicit GroupEvaluator(const TannerGraph& g, const BaseGraph& b, std::vector<TsGroup> grps)
        : graph(g), base(b), groups(std::move(grps)) {}

    /// r_tilde and P_e per group for one schedule; tables_fn produces the
    /// DE tables for a given TSLP (exact or averaged flavor).
    template <class TablesFn>
    void evaluate(const LayerPermutation& perm, const ChannelSpec& ch, const IndicatorOptions& opt,
                  TablesFn&& tables_fn, std::vector<double>& r_out, std::vector<double>& pe_out) const {
        r_out.resize(groups.size());
        pe_out.resize(groups.size());
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const LetsSubgraph& rep = groups[gi].representative;
            Tslp t = compute_tslp(rep, graph, perm);
            LayeredModel lm = build_layered_model(rep, t);
            IMat comp = composite_transition_unit(lm);
            SpectralSummary sp = dominant_eigen(comp.cast<double>());
            TsDeTables tables = tables_fn(t);
            FailureEstimate fe = layered_failure_probability(lm, sp.w1, tables, channel_moments(ch), opt);
            r_out[gi] = sp.r;
            pe_out[gi] = fe.p_e;
        }
    }
};

/// Two-step schedule search: step 1 scores every permutation with one
/// reference DE run and layer-averaged distributions; step 2 re-estimates a
/// shortlist with exact per-schedule DE and ranks it.
inline ScheduleReport schedule_search(const TannerGraph& graph, const BaseGraph& base,
                                      const std::vector<TsGroup>& groups, const ChannelSpec& ch,
                                      const ScheduleSearchOptions& opt = {}) {
    require(!groups.empty(), "schedule_search: empty catalog");
    const int m_b = graph.m_b;
    std::vector<LayerPermutation> perms;
    if (opt.sample > 0) {
        CounterRng rng(opt.seed);
        LayerPermutation p = identity_permutation(m_b);
        std::set<std::vector<int>> seen;
        perms.push_back(p);  // always include the original order
        seen.insert(p);
        std::uint64_t attempts = 0;
        while (static_cast<int>(perms.size()) < opt.sample && attempts++ < 100ull * opt.sample + 1000) {
            for (int i = m_b - 1; i > 0; --i) std::swap(p[i], p[rng.next_u64() % (i + 1)]);
            if (seen.insert(p).second) perms.push_back(p);
        }
    } else {
        std::uint64_t fact = 1;
        for (int i = 2; i <= m_b; ++i) fact *= i;
        require(fact <= opt.factorial_budget,
                "schedule_search: m_b! exceeds the exhaustive budget; pass a sample size");
        perms = detail::all_permutations(m_b);
    }

    // reference DE under the original row order, coarse grid
    DeState ref = de_iterate(base, identity_permutation(m_b), ch, opt.de_iterations, opt.coarse);

    GroupEvaluator ev(graph, base, groups);
    ScheduleReport rep;
    rep.entries.resize(perms.size());
    rep.reference_iterations = opt.de_iterations;

    const int nthreads = opt.threads > 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        std::vector<double> r, pe;
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= perms.size()) break;
            ScheduleEntry& e = rep.entries[i];
            e.perm = perms[i];
            ev.evaluate(perms[i], ch, opt.indicator,
                        [&](const Tslp& t) { return averaged_tables(ref, base, t); }, r, pe);
            double total = 0.0, worst = 0.0;
            double r_dom = 0.0;
            for (std::size_t gi = 0; gi < ev.groups.size(); ++gi) {
                const double contrib = ev.groups[gi].multiplicity * pe[gi];
                total += contrib;
                if (contrib >= worst) {
                    worst = contrib;
                    r_dom = r[gi];
                }
            }
            e.step1_estimate = total;
            e.r_tilde = r_dom;
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // shortlist: lowest step-1 estimates among schedules whose dominant r is
    // minimal (1e-6 clustering)
    double r_min = rep.entries[0].r_tilde;
    for (auto& e : rep.entries) r_min = std::min(r_min, e.r_tilde);
    std::vector<int> candidates;
    for (std::size_t i = 0; i < rep.entries.size(); ++i)
        if (rep.entries[i].r_tilde <= r_min + 1e-6) candidates.push_back(static_cast<int>(i));
    std::sort(candidates.begin(), candidates.end(),
              [&](int x, int y) { return rep.entries[x].step1_estimate < rep.entries[y].step1_estimate; });
    if (static_cast<int>(candidates.size()) > opt.shortlist_size) candidates.resize(opt.shortlist_size);

    for (int idx : candidates) rep.entries[idx].shortlisted = true;
    std::atomic<std::size_t> c2{0};
    auto worker2 = [&]() {
        std::vector<double> r, pe;
        while (true) {
            const std::size_t k = c2.fetch_add(1);
            if (k >= candidates.size()) break;
            ScheduleEntry& e = rep.entries[candidates[k]];
            DeState de = de_iterate(base, e.perm, ch, opt.de_iterations, opt.exact);
            ev.evaluate(e.perm, ch, opt.indicator, [&](const Tslp& t) { return exact_tables(de, t); }, r, pe);
            double total = 0.0;
            for (std::size_t gi = 0; gi < ev.groups.size(); ++gi) total += ev.groups[gi].multiplicity * pe[gi];
            e.step2_estimate = total;
        }
    };
    std::vector<std::thread> pool2;
    for (int t = 0; t < std::min<std::size_t>(nthreads, candidates.size()); ++t) pool2.emplace_back(worker2);
    for (auto& t : pool2) t.join();

    for (int idx : candidates)
        if (rep.winner < 0 || rep.entries[idx].step2_estimate < rep.entries[rep.winner].step2_estimate)
            rep.winner = idx;
    return rep;
}

/// Dominant-eigenvalue census over all layer orders of one LETS structure:
/// the distinct r values and their dihedral equivalence classes.
struct PermutationInvarianceReport {
    struct Entry {
        std::vector<int> layer_order;  // order of the J LETS layers (0-based)
        double r_tilde = 0.0;
    };
    std::vector<Entry> entries;
    std::vector<double> distinct_r;  // clustered, ascending
};

inline PermutationInvarianceReport permutation_invariance_report(const LetsSubgraph& rep, const TannerGraph& graph,
                                                                 double cluster_tol = 1e-3) {
    // distinct base rows hosting missatisfied CNs, in ascending row order
    std::set<int> rows;
    for (auto& m : rep.missat) rows.insert(graph.cn_type(m.cn));
    std::vector<int> row_list(rows.begin(), rows.end());
    const int J = static_cast<int>(row_list.size());
    require(J <= 8, "permutation_invariance_report: J too large for exhaustive sweep");

    std::map<std::vector<int>, double> class_r;  // dihedral class key -> r
    PermutationInvarianceReport out;
    std::vector<int> order(J);
    for (int i = 0; i < J; ++i) order[i] = i;
    do {
        auto key = dihedral_class_key(order);
        auto it = class_r.find(key);
        double r;
        if (it != class_r.end()) {
            r = it->second;
        } else {
            // build a base permutation placing the LETS rows in this order
            LayerPermutation perm;
            std::vector<char> used(graph.m_b, 0);
            for (int i = 0; i < J; ++i) {
                perm.push_back(row_list[order[i]]);
                used[row_list[order[i]]] = 1;
            }
            for (int rrow = 0; rrow < graph.m_b; ++rrow)
                if (!used[rrow]) perm.push_back(rrow);
            Tslp t = compute_tslp(rep, graph, perm);
            LayeredModel lm = build_layered_model(rep, t);
            SpectralSummary sp = dominant_eigen(composite_transition_unit(lm).cast<double>());
            r = sp.r;
            class_r.emplace(std::move(key), r);
        }
        out.entries.push_back({order, r});
    } while (std::next_permutation(order.begin(), order.end()));

    std::vector<double> rs;
    for (auto& e : out.entries) rs.push_back(e.r_tilde);
    std::sort(rs.begin(), rs.end());
    for (double r : rs)
        if (out.distinct_r.empty() || r - out.distinct_r.back() > cluster_tol) out.distinct_r.push_back(r);
    return out;
}

}  // namespace tsfloor
