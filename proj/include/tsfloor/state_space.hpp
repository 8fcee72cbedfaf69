#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "tsfloor/lets.hpp"
#include "tsfloor/matrix.hpp"
#include "tsfloor/util.hpp"

namespace tsfloor {

/// One state variable: the LLR message from a LETS VN toward one of its
/// missatisfied CNs.
struct StateVar {
    int vn = -1;            // graph VN id
    int missat_index = -1;  // index into LetsSubgraph::missat
    bool operator==(const StateVar& o) const { return vn == o.vn && missat_index == o.missat_index; }
};

/// Layer-ordered state labeling: states of layer 1 first, then layer 2, ...
/// The two states of a missatisfied CN are consecutive.
struct SystematicLabeling {
    std::vector<StateVar> order;      // state index -> edge
    std::vector<int> layer_sizes;     // n_{L_j}
    std::vector<int> layer_of_state;  // 0-based layer per state
    std::vector<int> layer_start;     // prefix sums, layer_start[J] = m_s

    int num_layers() const { return static_cast<int>(layer_sizes.size()); }
    int m_s() const { return static_cast<int>(order.size()); }
};

struct FloodingModel {
    LetsSubgraph lets;
    SystematicLabeling lab;
    IMat A, B, B_ex, C, D_ex;
    std::vector<int> gain_slot;  // per state: the missat CN index (two states share one gain)
};

namespace detail {

inline SystematicLabeling make_labeling(const LetsSubgraph& s, const std::vector<int>& missat_layer,
                                        const std::vector<StateVar>* explicit_order) {
    SystematicLabeling lab;
    const int n_missat = static_cast<int>(s.missat.size());
    int num_layers = 0;
    for (int l : missat_layer) num_layers = std::max(num_layers, l + 1);

    if (explicit_order) {
        lab.order = *explicit_order;
        require(static_cast<int>(lab.order.size()) == 2 * n_missat, "labeling: wrong state count");
    } else {
        std::vector<int> by_layer(n_missat);
        for (int k = 0; k < n_missat; ++k) by_layer[k] = k;
        std::stable_sort(by_layer.begin(), by_layer.end(),
                         [&](int x, int y) { return missat_layer[x] < missat_layer[y]; });
        for (int k : by_layer) {
            lab.order.push_back({s.missat[k].v1, k});
            lab.order.push_back({s.missat[k].v2, k});
        }
    }
    lab.layer_sizes.assign(num_layers, 0);
    lab.layer_of_state.resize(lab.order.size());
    for (std::size_t i = 0; i < lab.order.size(); ++i) {
        const int l = missat_layer[lab.order[i].missat_index];
        lab.layer_of_state[i] = l;
        ++lab.layer_sizes[l];
    }
    lab.layer_start.assign(num_layers + 1, 0);
    for (int j = 0; j < num_layers; ++j) lab.layer_start[j + 1] = lab.layer_start[j] + lab.layer_sizes[j];
    // systematic labeling requires layer-contiguous states
    for (std::size_t i = 1; i < lab.order.size(); ++i)
        require(lab.layer_of_state[i] >= lab.layer_of_state[i - 1], "labeling: states not layer-ordered");
    return lab;
}

}  // namespace detail

/// Flooding-schedule model matrices (A, B, B_ex, C, D_ex) for a LETS.
///
/// missat_layer[k] gives the 0-based layer of missatisfied CN k (all zeros
/// for a pure flooding analysis); explicit_order overrides the default
/// systematic state order, e.g. to reproduce a printed labeling.
inline FloodingModel build_flooding_model(const LetsSubgraph& s, std::vector<int> missat_layer = {},
                                          const std::vector<StateVar>* explicit_order = nullptr) {
    const int n_missat = static_cast<int>(s.missat.size());
    const int a = s.a();
    const int b = s.b();
    if (missat_layer.empty()) missat_layer.assign(n_missat, 0);
    require(static_cast<int>(missat_layer.size()) == n_missat, "model: missat layer list size mismatch");

    FloodingModel fm;
    fm.lets = s;
    fm.lab = detail::make_labeling(s, missat_layer, explicit_order);
    const int m_s = fm.lab.m_s();

    std::map<int, int> vn_index;
    for (int i = 0; i < a; ++i) vn_index[s.vns[i]] = i;

    // state index per (missat, vn)
    std::map<std::pair<int, int>, int> state_of;
    for (int i = 0; i < m_s; ++i) {
        const auto& sv = fm.lab.order[i];
        state_of[{sv.missat_index, sv.vn}] = i;
    }
    auto partner_state = [&](int missat_index, int vn) {
        const auto& m = s.missat[missat_index];
        const int other = m.v1 == vn ? m.v2 : m.v1;
        return state_of.at({missat_index, other});
    };

    // missat CNs adjacent to each VN
    std::map<int, std::vector<int>> vn_missat;
    for (int k = 0; k < n_missat; ++k) {
        vn_missat[s.missat[k].v1].push_back(k);
        vn_missat[s.missat[k].v2].push_back(k);
    }
    std::map<int, std::vector<int>> vn_unsat;
    for (std::size_t u = 0; u < s.unsat.size(); ++u) vn_unsat[s.unsat[u].vn].push_back(static_cast<int>(u));

    fm.A = IMat(m_s, m_s);
    fm.B = IMat(m_s, a);
    fm.B_ex = IMat(m_s, b);
    fm.C = IMat(a, m_s);
    fm.D_ex = IMat(a, b);
    fm.gain_slot.resize(m_s);

    for (int i = 0; i < m_s; ++i) {
        const auto& sv = fm.lab.order[i];
        fm.gain_slot[i] = sv.missat_index;
        fm.B(i, vn_index.at(sv.vn)) = 1;
        for (int mk : vn_missat[sv.vn])
            if (mk != sv.missat_index) fm.A(i, partner_state(mk, sv.vn)) = 1;
        for (int u : vn_unsat[sv.vn]) fm.B_ex(i, u) = 1;
    }
    for (int vi = 0; vi < a; ++vi) {
        const int vn = s.vns[vi];
        for (int mk : vn_missat[vn]) fm.C(vi, partner_state(mk, vn)) = 1;
        for (int u : vn_unsat[vn]) fm.D_ex(vi, u) = 1;
    }
    return fm;
}

// ---------------------------------------------------------------------------
// Layered model.
// ---------------------------------------------------------------------------

struct LayeredModel {
    FloodingModel fm;
    int J = 0;
    std::vector<int> layer_position;   // base update slot of each LETS layer, ascending
    std::vector<int> unsat_position;   // base update slot per unsat CN
    // freshness: B_ex entry (i,u) uses the current-iteration message iff the
    // unsat CN's slot precedes the slot of state i's layer
    std::vector<std::vector<char>> fresh;  // m_s x b

    int m_s() const { return fm.lab.m_s(); }
    int a() const { return fm.lets.a(); }
    int b() const { return fm.lets.b(); }
};

/// Layered model from a flooding model in systematic form. layer_position[j]
/// is the base-schedule slot of LETS layer j; unsat_position[u] the slot of
/// unsatisfied CN u's row.
inline LayeredModel build_layer_matrices(FloodingModel fm, std::vector<int> layer_position,
                                         std::vector<int> unsat_position) {
    LayeredModel lm;
    lm.J = fm.lab.num_layers();
    require(static_cast<int>(layer_position.size()) == lm.J, "layered model: layer position count mismatch");
    require(static_cast<int>(unsat_position.size()) == fm.lets.unsat.size(),
            "layered model: unsat position count mismatch");
    lm.fm = std::move(fm);
    lm.layer_position = std::move(layer_position);
    lm.unsat_position = std::move(unsat_position);
    const int m_s = lm.m_s();
    const int b = lm.b();
    lm.fresh.assign(m_s, std::vector<char>(b, 0));
    for (int i = 0; i < m_s; ++i) {
        const int lpos = lm.layer_position[lm.fm.lab.layer_of_state[i]];
        for (int u = 0; u < b; ++u) {
            if (lm.fm.B_ex(i, u) == 0) continue;
            // an unsat CN in the state's own layer counts as stale (within-layer
            // CN updates are parallel; in a QC lifting the case cannot occur)
            lm.fresh[i][u] = lm.unsat_position[u] < lpos ? 1 : 0;
        }
    }
    return lm;
}

/// Convenience: build the layered model of a LETS directly from its TSLP.
inline LayeredModel build_layered_model(const LetsSubgraph& s, const Tslp& t) {
    std::vector<int> missat_layer(s.missat.size());
    std::set<int> positions;
    for (auto& e : t.missat) positions.insert(e.position);
    std::vector<int> ordered(positions.begin(), positions.end());
    for (std::size_t k = 0; k < s.missat.size(); ++k)
        missat_layer[k] = static_cast<int>(std::lower_bound(ordered.begin(), ordered.end(), t.missat[k].position) -
                                           ordered.begin());
    FloodingModel fm = build_flooding_model(s, missat_layer);
    std::vector<int> unsat_position;
    for (auto& e : t.unsat) unsat_position.push_back(e.position);
    return build_layer_matrices(std::move(fm), ordered, std::move(unsat_position));
}

// --- per-layer matrices (materialized; mainly for verification dumps) -------

inline IMat layer_transition(const LayeredModel& lm, int j) {  // A_j
    const int m_s = lm.m_s();
    IMat m = IMat::identity(m_s);
    for (int i = lm.fm.lab.layer_start[j]; i < lm.fm.lab.layer_start[j + 1]; ++i)
        for (int k = 0; k < m_s; ++k) m(i, k) = lm.fm.A(i, k);
    return m;
}

inline IMat layer_channel(const LayeredModel& lm, int j) {  // B_j
    IMat m(lm.m_s(), lm.a());
    for (int i = lm.fm.lab.layer_start[j]; i < lm.fm.lab.layer_start[j + 1]; ++i)
        for (int k = 0; k < lm.a(); ++k) m(i, k) = lm.fm.B(i, k);
    return m;
}

inline IMat layer_bex_stale(const LayeredModel& lm, int j) {  // left-triangle B_ex,j
    IMat m(lm.m_s(), lm.b());
    for (int i = lm.fm.lab.layer_start[j]; i < lm.fm.lab.layer_start[j + 1]; ++i)
        for (int u = 0; u < lm.b(); ++u)
            if (lm.fm.B_ex(i, u) && !lm.fresh[i][u]) m(i, u) = 1;
    return m;
}

inline IMat layer_bex_fresh(const LayeredModel& lm, int j) {  // right-triangle B_ex,j
    IMat m(lm.m_s(), lm.b());
    for (int i = lm.fm.lab.layer_start[j]; i < lm.fm.lab.layer_start[j + 1]; ++i)
        for (int u = 0; u < lm.b(); ++u)
            if (lm.fm.B_ex(i, u) && lm.fresh[i][u]) m(i, u) = 1;
    return m;
}

// --- composite transition ---------------------------------------------------

/// In-place application of (G_j A_j) to a matrix of row vectors: rows of layer
/// j are replaced by gain-scaled combinations of the other rows (A's diagonal
/// blocks are zero, so this is order-safe).
template <class MatT>
inline void apply_layer(const LayeredModel& lm, int j, const DVec* state_gains, MatT& m) {
    const int lo = lm.fm.lab.layer_start[j], hi = lm.fm.lab.layer_start[j + 1];
    const int cols = m.cols();
    for (int i = lo; i < hi; ++i) {
        thread_local std::vector<double> acc;
        acc.assign(cols, 0.0);
        for (int k = 0; k < lm.m_s(); ++k) {
            if (!lm.fm.A(i, k)) continue;
            for (int c = 0; c < cols; ++c) acc[c] += m(k, c);
        }
        const double gain = state_gains ? (*state_gains)[i] : 1.0;
        for (int c = 0; c < cols; ++c) m(i, c) = gain * acc[c];
    }
}

/// Unit-gain composite transition: exact integer product A_J ... A_1.
inline IMat composite_transition_unit(const LayeredModel& lm) {
    IMat m = IMat::identity(lm.m_s());
    for (int j = 0; j < lm.J; ++j) {
        IMat next = m;
        for (int i = lm.fm.lab.layer_start[j]; i < lm.fm.lab.layer_start[j + 1]; ++i)
            for (int c = 0; c < lm.m_s(); ++c) {
                long long acc = 0;
                for (int k = 0; k < lm.m_s(); ++k)
                    if (lm.fm.A(i, k)) acc += m(k, c);
                next(i, c) = acc;
            }
        m = std::move(next);
    }
    return m;
}

/// Gained composite transition (G_J A_J) ... (G_1 A_1); gains are per
/// missatisfied CN and shared by its two states.
inline DMat composite_transition(const LayeredModel& lm, const DVec& missat_gains) {
    DVec state_gains(lm.m_s());
    for (int i = 0; i < lm.m_s(); ++i) state_gains[i] = missat_gains[lm.fm.gain_slot[i]];
    DMat m = DMat::identity(lm.m_s());
    for (int j = 0; j < lm.J; ++j) apply_layer(lm, j, &state_gains, m);
    return m;
}

// --- trajectories ------------------------------------------------------------

struct LayeredInputs {
    DVec channel;                    // length a
    std::vector<DVec> unsat;         // unsat[l] = L_ex at iteration l+1, length b
    std::vector<DVec> missat_gains;  // per iteration, length = #missat CNs (empty = all ones)
};

/// Recursive evaluation of the layered state equation; returns the state
/// vector at the end of each iteration.
inline std::vector<DVec> state_trajectory(const LayeredModel& lm, const LayeredInputs& in, int iterations) {
    const int m_s = lm.m_s();
    const int b = lm.b();
    DVec x(m_s, 0.0);
    std::vector<DVec> out;
    DVec zero_b(b, 0.0);
    for (int l = 1; l <= iterations; ++l) {
        const DVec& lex_cur = static_cast<int>(in.unsat.size()) >= l ? in.unsat[l - 1] : zero_b;
        const DVec& lex_prev = l >= 2 && static_cast<int>(in.unsat.size()) >= l - 1 ? in.unsat[l - 2] : zero_b;
        DVec gains;
        if (!in.missat_gains.empty()) {
            const DVec& mg = in.missat_gains[std::min<std::size_t>(l - 1, in.missat_gains.size() - 1)];
            gains.resize(m_s);
            for (int i = 0; i < m_s; ++i) gains[i] = mg[lm.fm.gain_slot[i]];
        }
        for (int j = 0; j < lm.J; ++j) {
            const int lo = lm.fm.lab.layer_start[j], hi = lm.fm.lab.layer_start[j + 1];
            DVec acc(hi - lo, 0.0);
            for (int i = lo; i < hi; ++i) {
                double v = 0.0;
                for (int k = 0; k < m_s; ++k)
                    if (lm.fm.A(i, k)) v += x[k];
                for (int c = 0; c < lm.a(); ++c)
                    if (lm.fm.B(i, c)) v += in.channel[c];
                for (int u = 0; u < b; ++u)
                    if (lm.fm.B_ex(i, u)) v += lm.fresh[i][u] ? lex_cur[u] : lex_prev[u];
                acc[i - lo] = v;
            }
            for (int i = lo; i < hi; ++i) x[i] = (gains.empty() ? 1.0 : gains[i]) * acc[i - lo];
        }
        out.push_back(x);
    }
    return out;
}

/// Non-recursive evaluation via the composite-product expansion (independent
/// cross-check of state_trajectory; materializes the per-iteration products).
inline DVec state_nonrecursive(const LayeredModel& lm, const LayeredInputs& in, int iterations) {
    const int m_s = lm.m_s();
    const int b = lm.b();
    DVec zero_b(b, 0.0);
    auto state_gains_at = [&](int l) {
        DVec g(m_s, 1.0);
        if (!in.missat_gains.empty()) {
            const DVec& mg = in.missat_gains[std::min<std::size_t>(l - 1, in.missat_gains.size() - 1)];
            for (int i = 0; i < m_s; ++i) g[i] = mg[lm.fm.gain_slot[i]];
        }
        return g;
    };
    // suffix products of (G_j A_j) within one iteration: tail[k] = A_{J->k+1}
    auto iteration_terms = [&](int l, DMat& full, DMat& bt, DMat& bex_stale, DMat& bex_fresh) {
        DVec g = state_gains_at(l);
        std::vector<DMat> tail(lm.J + 1);
        tail[lm.J] = DMat::identity(m_s);
        std::vector<DMat> glay(lm.J);
        for (int j = 0; j < lm.J; ++j) {
            DMat gj = layer_transition(lm, j).cast<double>();
            for (int i = lm.fm.lab.layer_start[j]; i < lm.fm.lab.layer_start[j + 1]; ++i)
                for (int k = 0; k < m_s; ++k) gj(i, k) *= g[i];
            glay[j] = std::move(gj);
        }
        for (int j = lm.J - 1; j >= 0; --j) tail[j] = tail[j + 1] * glay[j];
        full = tail[0];
        bt = DMat(m_s, lm.a());
        bex_stale = DMat(m_s, b);
        bex_fresh = DMat(m_s, b);
        for (int j = 0; j < lm.J; ++j) {
            DMat gb = layer_channel(lm, j).cast<double>();
            DMat gl = layer_bex_stale(lm, j).cast<double>();
            DMat gr = layer_bex_fresh(lm, j).cast<double>();
            for (int i = lm.fm.lab.layer_start[j]; i < lm.fm.lab.layer_start[j + 1]; ++i) {
                for (int c = 0; c < lm.a(); ++c) gb(i, c) *= g[i];
                for (int u = 0; u < b; ++u) {
                    gl(i, u) *= g[i];
                    gr(i, u) *= g[i];
                }
            }
            bt = bt + tail[j + 1] * gb;
            bex_stale = bex_stale + tail[j + 1] * gl;
            bex_fresh = bex_fresh + tail[j + 1] * gr;
        }
    };

    DVec x(m_s, 0.0);
    std::vector<DMat> fulls(iterations);
    std::vector<DVec> contrib(iterations, DVec(m_s, 0.0));
    for (int l = 1; l <= iterations; ++l) {
        DMat full, bt, bl, br;
        iteration_terms(l, full, bt, bl, br);
        fulls[l - 1] = full;
        const DVec& lex_cur = static_cast<int>(in.unsat.size()) >= l ? in.unsat[l - 1] : zero_b;
        const DVec& lex_prev = l >= 2 && static_cast<int>(in.unsat.size()) >= l - 1 ? in.unsat[l - 2] : zero_b;
        DVec term = bt * in.channel;
        DVec t2 = bl * lex_prev;
        DVec t3 = br * lex_cur;
        for (int i = 0; i < m_s; ++i) contrib[l - 1][i] = term[i] + t2[i] + t3[i];
    }
    for (int i0 = 0; i0 < iterations; ++i0) {
        DVec v = contrib[i0];
        for (int j = i0 + 1; j < iterations; ++j) v = fulls[j] * v;
        for (int i = 0; i < m_s; ++i) x[i] += v[i];
    }
    return x;
}

struct FloodingInputs {
    DVec channel;             // length a
    std::vector<DVec> unsat;  // per iteration, length b
    DVec gains;               // scalar gain per iteration (empty = ones)
};

/// Flooding recursion x^(0) = B L, x^(l) = g'_l A x^(l-1) + B L + B_ex L_ex^(l).
inline std::vector<DVec> flooding_trajectory(const FloodingModel& fm, const FloodingInputs& in, int iterations) {
    const int m_s = fm.lab.m_s();
    DVec bl(m_s, 0.0);
    for (int i = 0; i < m_s; ++i)
        for (int c = 0; c < fm.lets.a(); ++c)
            if (fm.B(i, c)) bl[i] += in.channel[c];
    DVec x = bl;
    std::vector<DVec> out;
    for (int l = 1; l <= iterations; ++l) {
        const double g = in.gains.empty() ? 1.0 : in.gains[std::min<std::size_t>(l - 1, in.gains.size() - 1)];
        DVec next(m_s, 0.0);
        for (int i = 0; i < m_s; ++i) {
            double v = 0.0;
            for (int k = 0; k < m_s; ++k)
                if (fm.A(i, k)) v += x[k];
            next[i] = g * v + bl[i];
        }
        if (static_cast<int>(in.unsat.size()) >= l) {
            for (int i = 0; i < m_s; ++i)
                for (int u = 0; u < fm.lets.b(); ++u)
                    if (fm.B_ex(i, u)) next[i] += in.unsat[l - 1][u];
        }
        x = std::move(next);
        out.push_back(x);
    }
    return out;
}

// --- appendix pairing (Lemma-6 style checks) ---------------------------------

/// The systematic labeling already pairs each missatisfied CN's two states
/// consecutively, so the pairing permutation swaps 2k and 2k+1.
inline IMat pairing_permutation_matrix(int m_s) {
    require(m_s % 2 == 0, "pairing: odd state count");
    IMat p(m_s, m_s);
    for (int k = 0; k < m_s / 2; ++k) {
        p(2 * k, 2 * k + 1) = 1;
        p(2 * k + 1, 2 * k) = 1;
    }
    return p;
}

/// Lower/upper strict-triangular split of A (systematic form).
inline std::pair<IMat, IMat> triangular_split(const IMat& a) {
    IMat lower(a.rows(), a.cols()), upper(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (i > j)
                lower(i, j) = a(i, j);
            else if (i < j)
                upper(i, j) = a(i, j);
        }
    return {lower, upper};
}

/// A' = A_l^{J-1} + ... + A_l for the identity A_tilde = A + A'(A - I).
inline IMat lower_power_sum(const IMat& a_lower, int J) {
    IMat acc(a_lower.rows(), a_lower.cols());
    IMat pw = a_lower;
    for (int k = 1; k <= J - 1; ++k) {
        acc = acc + pw;
        pw = pw * a_lower;
    }
    return acc;
}

}  // namespace tsfloor
