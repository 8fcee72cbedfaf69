#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "tsfloor/density.hpp"
#include "tsfloor/eigen.hpp"
#include "tsfloor/state_space.hpp"
#include "tsfloor/util.hpp"

namespace tsfloor {

// ---------------------------------------------------------------------------
// Per-iteration DE-derived model inputs for one LETS: missatisfied-CN gains
// and unsatisfied-CN input moments.
// ---------------------------------------------------------------------------

struct TsDeTables {
    std::vector<DVec> gains;                     // [iteration][missat CN] corrected gain g'
    std::vector<std::vector<UnsatStats>> unsat;  // [iteration][unsat CN]
    int iterations() const { return static_cast<int>(gains.size()); }
};

/// Exact per-edge tables. The DeState must have been run under the same
/// schedule that produced the TSLP positions.
inline TsDeTables exact_tables(const DeState& de, const Tslp& t) {
    TsDeTables tab;
    for (int l = 1; l <= de.iterations; ++l) {
        DVec g(t.missat.size());
        for (std::size_t k = 0; k < t.missat.size(); ++k) {
            const auto& e = t.missat[k];
            std::vector<const LlrDistribution*> ext;
            for (int vt : e.external_types) ext.push_back(&de.v2c_at(l, e.cn_type, vt));
            g[k] = gain_and_inversion(virtual_vn_distribution(ext, de.quant)).g_prime;
        }
        std::vector<UnsatStats> us(t.unsat.size());
        for (std::size_t u = 0; u < t.unsat.size(); ++u) {
            const auto& e = t.unsat[u];
            us[u] = moments_of(de.c2v_at(l, e.cn_type, e.internal_vn_type));
        }
        tab.gains.push_back(std::move(g));
        tab.unsat.push_back(std::move(us));
    }
    return tab;
}

/// Approximate tables from one reference DE run: the layer-average
/// distributions of update slot q stand in for every distribution in the
/// q-th layer of decoding regardless of the schedule.
inline TsDeTables averaged_tables(const DeState& ref_de, const BaseGraph& base, const Tslp& t) {
    TsDeTables tab;
    auto table = BoxPlusTable::shared(ref_de.quant);
    // cache of slot -> (d_c - 2)-fold box-plus powers per iteration
    std::map<std::pair<int, int>, std::vector<GainResult>> gain_cache;  // (slot, dc) -> per iteration
    for (std::size_t k = 0; k < t.missat.size(); ++k) {
        const auto& e = t.missat[k];
        const int dc = base.cn_degree(e.cn_type);
        auto key = std::make_pair(e.position, dc);
        if (gain_cache.count(key)) continue;
        std::vector<GainResult> per_iter;
        for (int l = 1; l <= ref_de.iterations; ++l) {
            const LlrDistribution& avg = ref_de.avg_v2c[l - 1][e.position];
            LlrDistribution psi_hat = LlrDistribution::point_mass(ref_de.quant, ref_de.quant.s_max);
            for (int c = 0; c < dc - 2; ++c)
                psi_hat = c == 0 ? avg : conv_box_plus(psi_hat, avg, *table);
            per_iter.push_back(gain_and_inversion(psi_hat));
        }
        gain_cache.emplace(key, std::move(per_iter));
    }
    for (int l = 1; l <= ref_de.iterations; ++l) {
        DVec g(t.missat.size());
        for (std::size_t k = 0; k < t.missat.size(); ++k) {
            const auto& e = t.missat[k];
            g[k] = gain_cache.at({e.position, base.cn_degree(e.cn_type)})[l - 1].g_prime;
        }
        std::vector<UnsatStats> us(t.unsat.size());
        for (std::size_t u = 0; u < t.unsat.size(); ++u)
            us[u] = moments_of(ref_de.avg_c2v[l - 1][t.unsat[u].position]);
        tab.gains.push_back(std::move(g));
        tab.unsat.push_back(std::move(us));
    }
    return tab;
}

// ---------------------------------------------------------------------------
// Layered error indicator: gamma-vector recursion.
// ---------------------------------------------------------------------------

struct IndicatorAccumulator {
    // coefficient matrices propagated by the per-iteration composite; the
    // gamma vectors are their projections onto w1
    DMat channel_coeff;                 // m_s x a
    std::vector<DMat> stale_coeff;      // born at iteration i': tracks B_ex-stale of i'
    std::vector<DMat> fresh_coeff;      // born at iteration i': tracks B_ex-fresh of i'
    DVec w1;

    DVec gamma_channel() const { return w1 * channel_coeff; }
    DVec gamma_stale(int i) const { return w1 * stale_coeff[i]; }
    DVec gamma_fresh(int i) const { return w1 * fresh_coeff[i]; }
};

namespace detail {

/// One layer application with an optional additive source: rows of layer j
/// become g_i (A_row * M + source_row).
inline void apply_layer_fused(const LayeredModel& lm, int j, const DVec& state_gains, DMat& m, const IMat* source,
                              int source_kind /*0 none, 1 B, 2 B_ex stale, 3 B_ex fresh*/) {
    const int lo = lm.fm.lab.layer_start[j], hi = lm.fm.lab.layer_start[j + 1];
    const int cols = m.cols();
    for (int i = lo; i < hi; ++i) {
        std::vector<double> acc(cols, 0.0);
        for (int k = 0; k < lm.m_s(); ++k) {
            if (!lm.fm.A(i, k)) continue;
            for (int c = 0; c < cols; ++c) acc[c] += m(k, c);
        }
        if (source) {
            for (int c = 0; c < cols; ++c) {
                bool on = (*source)(i, c) != 0;
                if (source_kind == 2) on = on && !lm.fresh[i][c];
                if (source_kind == 3) on = on && lm.fresh[i][c];
                if (on) acc[c] += 1.0;
            }
        }
        for (int c = 0; c < cols; ++c) m(i, c) = state_gains[i] * acc[c];
    }
}

}  // namespace detail

/// Advance the accumulator through iteration l (1-based) with the given
/// per-missat-CN gains. Implements the recursive evaluation of the gamma
/// vectors without materializing products of composites.
inline void indicator_advance(const LayeredModel& lm, IndicatorAccumulator& acc, const DVec& missat_gains) {
    DVec g(lm.m_s());
    for (int i = 0; i < lm.m_s(); ++i) g[i] = missat_gains[lm.fm.gain_slot[i]];
    if (acc.channel_coeff.rows() == 0) acc.channel_coeff = DMat(lm.m_s(), lm.a());
    acc.stale_coeff.push_back(DMat(lm.m_s(), lm.b()));
    acc.fresh_coeff.push_back(DMat(lm.m_s(), lm.b()));
    for (int j = 0; j < lm.J; ++j) {
        for (std::size_t i = 0; i + 1 < acc.stale_coeff.size(); ++i) {
            detail::apply_layer_fused(lm, j, g, acc.stale_coeff[i], nullptr, 0);
            detail::apply_layer_fused(lm, j, g, acc.fresh_coeff[i], nullptr, 0);
        }
        detail::apply_layer_fused(lm, j, g, acc.channel_coeff, &lm.fm.B, 1);
        detail::apply_layer_fused(lm, j, g, acc.stale_coeff.back(), &lm.fm.B_ex, 2);
        detail::apply_layer_fused(lm, j, g, acc.fresh_coeff.back(), &lm.fm.B_ex, 3);
    }
}

/// Error indicator value for concrete inputs, reconstructed from the gamma
/// vectors (cross-checkable against w1^T x from the recursive trajectory).
inline double indicator_value(const IndicatorAccumulator& acc, const DVec& channel,
                              const std::vector<DVec>& unsat_inputs) {
    double beta = dot(acc.gamma_channel(), channel);
    const int ell = static_cast<int>(acc.stale_coeff.size());
    for (int i = 1; i <= ell; ++i) {
        // stale coefficient of iteration i multiplies L_ex^{(i-1)}
        if (i >= 2 && static_cast<int>(unsat_inputs.size()) >= i - 1)
            beta += dot(acc.gamma_stale(i - 1), unsat_inputs[i - 2]);
        if (static_cast<int>(unsat_inputs.size()) >= i) beta += dot(acc.gamma_fresh(i - 1), unsat_inputs[i - 1]);
    }
    return beta;
}

/// First two moments of the channel-LLR input to the indicator.
struct ChannelMoments {
    double mean = 0.0;
    double variance = 1.0;
};

inline ChannelMoments channel_moments(const ChannelSpec& ch) { return {ch.llr_mean(), ch.llr_variance()}; }

struct FailureEstimate {
    double p_e = 0.0;
    double q_argument = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct IndicatorOptions {
    int max_iterations = 50;
    double q_arg_tol = 1e-4;
};

/// Failure probability of a LETS under the layered model: mean and variance
/// of the indicator accumulate per iteration until the Q-function argument
/// stabilizes.
inline FailureEstimate layered_failure_probability(const LayeredModel& lm, const DVec& w1, const TsDeTables& tables,
                                                   const ChannelMoments& ch, const IndicatorOptions& opt = {}) {
    IndicatorAccumulator acc;
    acc.w1 = w1;
    FailureEstimate fe;
    double prev_arg = 0.0;
    const double m_ch = ch.mean;
    const double var_ch = ch.variance;
    const int b = lm.b();
    for (int l = 1; l <= opt.max_iterations; ++l) {
        const int ti = std::min(l - 1, tables.iterations() - 1);
        indicator_advance(lm, acc, tables.gains[ti]);

        DVec gch = acc.gamma_channel();
        double mean = 0.0, var = 0.0;
        for (double v : gch) {
            mean += m_ch * v;
            var += var_ch * v * v;
        }
        // unsatisfied contributions: iteration i' pairs the fresh gamma of i'
        // with the stale gamma of i'+1
        for (int ip = 1; ip <= l; ++ip) {
            DVec coeff = acc.gamma_fresh(ip - 1);
            if (ip + 1 <= l) {
                DVec stale_next = acc.gamma_stale(ip);
                for (int u = 0; u < b; ++u) coeff[u] += stale_next[u];
            }
            const int ui = std::min(ip - 1, tables.iterations() - 1);
            for (int u = 0; u < b; ++u) {
                mean += coeff[u] * tables.unsat[ui][u].mean;
                var += coeff[u] * coeff[u] * tables.unsat[ui][u].variance;
            }
        }
        fe.mean = mean;
        fe.variance = var;
        fe.iterations = l;
        if (var <= 0.0) {
            fe.q_argument = mean >= 0.0 ? 1e9 : -1e9;
            fe.p_e = mean >= 0.0 ? 0.0 : 1.0;
            fe.converged = true;
            return fe;
        }
        const double arg = mean / std::sqrt(var);
        fe.q_argument = arg;
        fe.p_e = q_func(arg);
        if (l > 1 && std::fabs(arg - prev_arg) < opt.q_arg_tol) {
            fe.converged = true;
            return fe;
        }
        prev_arg = arg;
    }
    return fe;
}

// ---------------------------------------------------------------------------
// Flooding baseline (scalar-gain indicator).
// ---------------------------------------------------------------------------

/// Flooding failure probability with scalar per-iteration gains; gains and
/// unsatisfied moments are averaged over the LETS's CNs when per-CN values
/// are supplied.
inline FailureEstimate flooding_failure_probability(const FloodingModel& fm, double r, const DVec& w1,
                                                    const TsDeTables& tables, const ChannelMoments& ch,
                                                    const IndicatorOptions& opt = {}) {
    const int a = fm.lets.a();
    const int b = fm.lets.b();
    DVec w_b(a, 0.0), w_bex(b, 0.0);
    {
        DVec wb = w1 * fm.B.cast<double>();
        DVec wx = w1 * fm.B_ex.cast<double>();
        w_b = wb;
        w_bex = wx;
    }
    double sum_wb = 0.0, sum_wb2 = 0.0;
    for (double v : w_b) {
        sum_wb += v;
        sum_wb2 += v * v;
    }

    FailureEstimate fe;
    double prev_arg = 0.0;
    double denom = 1.0;       // r^i prod g'
    double geo_sum = 0.0;     // sum 1/(r^i prod g')
    double ex_mean = 0.0;
    double ex_var = 0.0;
    const double m_ch = ch.mean;
    const double var_ch = ch.variance;
    for (int l = 1; l <= opt.max_iterations; ++l) {
        const int ti = std::min(l - 1, tables.iterations() - 1);
        double gbar = 0.0;
        for (double g : tables.gains[ti]) gbar += g;
        gbar /= tables.gains[ti].size();
        denom *= r * gbar;
        geo_sum += 1.0 / denom;
        double mex = 0.0, vex = 0.0;
        for (int u = 0; u < b; ++u) {
            mex += w_bex[u] * tables.unsat[ti][u].mean;
            vex += w_bex[u] * w_bex[u] * tables.unsat[ti][u].variance;
        }
        ex_mean += mex / denom;
        ex_var += vex / (denom * denom);

        const double mean = m_ch * (1.0 + geo_sum) * sum_wb + ex_mean;
        const double var = var_ch * (1.0 + geo_sum) * (1.0 + geo_sum) * sum_wb2 + ex_var;
        fe.mean = mean;
        fe.variance = var;
        fe.iterations = l;
        if (var <= 0.0) {
            fe.q_argument = mean >= 0.0 ? 1e9 : -1e9;
            fe.p_e = mean >= 0.0 ? 0.0 : 1.0;
            fe.converged = true;
            return fe;
        }
        const double arg = mean / std::sqrt(var);
        fe.q_argument = arg;
        fe.p_e = q_func(arg);
        if (l > 1 && std::fabs(arg - prev_arg) < opt.q_arg_tol) {
            fe.converged = true;
            return fe;
        }
        prev_arg = arg;
    }
    return fe;
}

// ---------------------------------------------------------------------------
// Error-floor aggregation.
// ---------------------------------------------------------------------------

struct ErrorFloor {
    double p_f = 0.0;
    std::map<std::string, double> per_class;  // class label -> subtotal
};

inline ErrorFloor error_floor(const std::vector<TsGroup>& groups, const std::vector<double>& p_e) {
    require(groups.size() == p_e.size(), "error_floor: group/estimate size mismatch");
    ErrorFloor ef;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double contrib = groups[i].multiplicity * p_e[i];
        ef.p_f += contrib;
        ef.per_class[groups[i].label] += contrib;
    }
    return ef;
}

}  // namespace tsfloor
