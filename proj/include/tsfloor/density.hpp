#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "tsfloor/channel.hpp"
#include "tsfloor/code.hpp"
#include "tsfloor/decoder.hpp"
#include "tsfloor/matrix.hpp"
#include "tsfloor/util.hpp"

namespace tsfloor {

struct QuantSpec {
    double dx = 0.05;
    double s_max = 31.75;

    int half_bins() const {
        const double k = s_max / dx;
        const int ki = static_cast<int>(std::lround(k));
        require(std::fabs(k - ki) < 1e-9 && ki >= 1, "quantization grid does not cover the saturation level");
        return ki;
    }
    bool operator<(const QuantSpec& o) const {
        return dx != o.dx ? dx < o.dx : s_max < o.s_max;
    }
};

/// Probability mass function on the uniform grid (i-K)*dx, i in [0, 2K];
/// the boundary bins carry the saturation mass.
class LlrDistribution {
  public:
    LlrDistribution() = default;
    explicit LlrDistribution(const QuantSpec& q) : dx_(q.dx), k_(q.half_bins()), mass_(2 * q.half_bins() + 1, 0.0) {}

    static LlrDistribution point_mass(const QuantSpec& q, double value) {
        LlrDistribution d(q);
        d.mass_[d.bin_of(value)] = 1.0;
        return d;
    }

    static LlrDistribution gaussian(const QuantSpec& q, double mean, double variance) {
        LlrDistribution d(q);
        const double sigma = std::sqrt(variance);
        const int n = d.size();
        double prev_cdf = 0.0;
        for (int i = 0; i < n; ++i) {
            const double upper = i == n - 1 ? 1.0 : normal_cdf((d.value(i) + q.dx / 2.0 - mean) / sigma);
            d.mass_[i] = upper - prev_cdf;
            prev_cdf = upper;
        }
        return d;
    }

    int size() const { return static_cast<int>(mass_.size()); }
    int half() const { return k_; }
    double dx() const { return dx_; }
    double value(int i) const { return (i - k_) * dx_; }
    double mass(int i) const { return mass_[i]; }
    double& mass(int i) { return mass_[i]; }
    const std::vector<double>& masses() const { return mass_; }

    int bin_of(double v) const {
        int i = k_ + static_cast<int>(std::lround(v / dx_));
        return i < 0 ? 0 : (i >= size() ? size() - 1 : i);
    }

    double total() const {
        double s = 0.0;
        for (double m : mass_) s += m;
        return s;
    }

    void renormalize() {
        const double t = total();
        if (t > 0.0)
            for (double& m : mass_) m /= t;
    }

    double mean() const {
        double s = 0.0;
        for (int i = 0; i < size(); ++i) s += value(i) * mass_[i];
        return s;
    }

    double variance() const {
        const double mu = mean();
        double s = 0.0;
        for (int i = 0; i < size(); ++i) {
            const double d = value(i) - mu;
            s += d * d * mass_[i];
        }
        return s;
    }

    /// E[tanh(L/2)] — the average missatisfied-CN gain integrand.
    double tanh_half_mean() const {
        double s = 0.0;
        for (int i = 0; i < size(); ++i)
            if (mass_[i] != 0.0) s += std::tanh(value(i) / 2.0) * mass_[i];
        return s;
    }

    /// Mass on the negative axis; the zero bin is split evenly so symmetric
    /// distributions give exactly 1/2.
    double negative_mass() const {
        double s = 0.0;
        for (int i = 0; i < k_; ++i) s += mass_[i];
        return s + 0.5 * mass_[k_];
    }

    double total_variation(const LlrDistribution& o) const {
        double s = 0.0;
        for (int i = 0; i < size(); ++i) s += std::fabs(mass_[i] - o.mass_[i]);
        return 0.5 * s;
    }

  private:
    double dx_ = 0.0;
    int k_ = 0;
    std::vector<double> mass_;
};

/// Additive convolution with boundary folding (saturation).
inline LlrDistribution conv_add(const LlrDistribution& a, const LlrDistribution& b) {
    LlrDistribution out(QuantSpec{a.dx(), a.dx() * a.half()});
    const int n = a.size(), k = a.half();
    std::vector<double> acc(out.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const double ma = a.mass(i);
        if (ma == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            const double mb = b.mass(j);
            if (mb == 0.0) continue;
            int o = i + j - k;
            if (o < 0) o = 0;
            if (o >= n) o = n - 1;
            acc[o] += ma * mb;
        }
    }
    for (int i = 0; i < n; ++i) out.mass(i) = acc[i];
    return out;
}

/// Precomputed output-bin table for the pairwise box-plus of grid values.
class BoxPlusTable {
  public:
    explicit BoxPlusTable(const QuantSpec& q) : k_(q.half_bins()), dx_(q.dx) {
        const int n = 2 * k_ + 1;
        bin_.resize(std::size_t(n) * n);
        for (int i = 0; i < n; ++i) {
            const double vi = (i - k_) * dx_;
            for (int j = 0; j <= i; ++j) {
                const double vj = (j - k_) * dx_;
                const double v = box_plus(vi, vj);
                int o = k_ + static_cast<int>(std::lround(v / dx_));
                if (o < 0) o = 0;
                if (o >= n) o = n - 1;
                bin_[std::size_t(i) * n + j] = bin_[std::size_t(j) * n + i] = static_cast<std::int32_t>(o);
            }
        }
    }

    int k() const { return k_; }
    std::int32_t at(int i, int j) const { return bin_[std::size_t(i) * (2 * k_ + 1) + j]; }

    static std::shared_ptr<const BoxPlusTable> shared(const QuantSpec& q) {
        static std::mutex mu;
        static std::map<QuantSpec, std::shared_ptr<const BoxPlusTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(q);
        if (it != cache.end()) return it->second;
        auto t = std::make_shared<const BoxPlusTable>(q);
        cache.emplace(q, t);
        return t;
    }

  private:
    int k_;
    double dx_;
    std::vector<std::int32_t> bin_;
};

/// Density of box_plus(X, Y) for independent X ~ a, Y ~ b.
inline LlrDistribution conv_box_plus(const LlrDistribution& a, const LlrDistribution& b, const BoxPlusTable& table) {
    LlrDistribution out(QuantSpec{a.dx(), a.dx() * a.half()});
    const int n = a.size();
    std::vector<double> acc(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double ma = a.mass(i);
        if (ma == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            const double mb = b.mass(j);
            if (mb == 0.0) continue;
            acc[table.at(i, j)] += ma * mb;
        }
    }
    for (int i = 0; i < n; ++i) out.mass(i) = acc[i];
    return out;
}

// ---------------------------------------------------------------------------
// Base graph and layered density evolution.
// ---------------------------------------------------------------------------

struct BaseGraph {
    int m_b = 0, n_b = 0;
    std::vector<std::vector<int>> row_cols;
    std::vector<std::vector<int>> col_rows;

    static BaseGraph from_exponent(const ExponentMatrix& e) {
        BaseGraph g;
        g.m_b = e.m_b;
        g.n_b = e.n_b;
        g.row_cols.assign(e.m_b, {});
        g.col_rows.assign(e.n_b, {});
        for (int i = 0; i < e.m_b; ++i)
            for (int j = 0; j < e.n_b; ++j)
                if (e.at(i, j) >= 0) {
                    g.row_cols[i].push_back(j);
                    g.col_rows[j].push_back(i);
                }
        return g;
    }

    static BaseGraph from_matrix(const IMat& hb) {
        BaseGraph g;
        g.m_b = hb.rows();
        g.n_b = hb.cols();
        g.row_cols.assign(g.m_b, {});
        g.col_rows.assign(g.n_b, {});
        for (int i = 0; i < g.m_b; ++i)
            for (int j = 0; j < g.n_b; ++j)
                if (hb(i, j) != 0) {
                    g.row_cols[i].push_back(j);
                    g.col_rows[j].push_back(i);
                }
        return g;
    }

    int cn_degree(int row) const { return static_cast<int>(row_cols[row].size()); }
    int vn_degree(int col) const { return static_cast<int>(col_rows[col].size()); }
};

/// Per-base-edge message distributions for every iteration, plus per-slot
/// layer averages. Edge (row, col) pairs are dense maps over the base graph.
struct DeState {
    QuantSpec quant;
    int iterations = 0;
    BaseGraph base;
    bool flooding = false;
    LayerPermutation perm;  // row processed at slot q = perm[q]

    std::map<std::pair<int, int>, int> edge_index;  // (row, col) -> id
    std::vector<std::pair<int, int>> edges;

    // [iteration-1][edge id]
    std::vector<std::vector<LlrDistribution>> v2c;
    std::vector<std::vector<LlrDistribution>> c2v;
    // [iteration-1][slot]
    std::vector<std::vector<LlrDistribution>> avg_v2c;
    std::vector<std::vector<LlrDistribution>> avg_c2v;

    const LlrDistribution& v2c_at(int iteration, int row, int col) const {
        return v2c[iteration - 1][edge_index.at({row, col})];
    }
    const LlrDistribution& c2v_at(int iteration, int row, int col) const {
        return c2v[iteration - 1][edge_index.at({row, col})];
    }
};

struct DeOptions {
    bool flooding = false;
};

/// Quantized density evolution over the base graph under a row-layered
/// schedule (or flooding). All-zero codeword; channel density N(2/s^2, 4/s^2).
/// Within an iteration, layers are processed in permutation order and every
/// convolution reads the freshest stored density, which realizes the
/// schedule-dependent computation trees without building them explicitly.
inline DeState de_iterate(const BaseGraph& base, const LayerPermutation& perm, const ChannelSpec& ch, int iterations,
                          const QuantSpec& quant, const DeOptions& opt = {}) {
    require(static_cast<int>(perm.size()) == base.m_b, "de_iterate: permutation length != m_b");
    DeState st;
    st.quant = quant;
    st.base = base;
    st.perm = perm;
    st.flooding = opt.flooding;
    st.iterations = iterations;
    for (int r = 0; r < base.m_b; ++r)
        for (int c : base.row_cols[r]) {
            st.edge_index[{r, c}] = static_cast<int>(st.edges.size());
            st.edges.push_back({r, c});
        }
    const int ne = static_cast<int>(st.edges.size());
    auto table = BoxPlusTable::shared(quant);

    const LlrDistribution channel = LlrDistribution::gaussian(quant, ch.llr_mean(), ch.llr_variance());
    std::vector<LlrDistribution> cur_c2v(ne, LlrDistribution::point_mass(quant, 0.0));
    std::vector<LlrDistribution> cur_v2c(ne, LlrDistribution::point_mass(quant, 0.0));

    auto vn_update = [&](int row, int col) {
        LlrDistribution d = channel;
        for (int r2 : base.col_rows[col]) {
            if (r2 == row) continue;
            d = conv_add(d, cur_c2v[st.edge_index.at({r2, col})]);
        }
        // each update renormalizes away the ~1e-12 accumulation rounding;
        // without this the deficit compounds geometrically across iterations
        d.renormalize();
        return d;
    };
    auto cn_update_row = [&](int row) {
        const auto& cols = base.row_cols[row];
        const int deg = static_cast<int>(cols.size());
        if (deg == 0) return;
        std::vector<const LlrDistribution*> in(deg);
        for (int k = 0; k < deg; ++k) in[k] = &cur_v2c[st.edge_index.at({row, cols[k]})];
        std::vector<LlrDistribution> out(deg);
        if (deg == 1) {
            out[0] = LlrDistribution::point_mass(quant, quant.s_max);
        } else {
            std::vector<LlrDistribution> fwd(deg);
            fwd[0] = *in[0];
            for (int k = 1; k < deg; ++k) fwd[k] = conv_box_plus(fwd[k - 1], *in[k], *table);
            LlrDistribution back = *in[deg - 1];
            out[deg - 1] = fwd[deg - 2];
            for (int k = deg - 2; k >= 1; --k) {
                out[k] = conv_box_plus(fwd[k - 1], back, *table);
                back = conv_box_plus(*in[k], back, *table);
            }
            out[0] = back;
        }
        for (int k = 0; k < deg; ++k) {
            out[k].renormalize();
            cur_c2v[st.edge_index.at({row, cols[k]})] = std::move(out[k]);
        }
    };

    for (int l = 1; l <= iterations; ++l) {
        if (opt.flooding) {
            std::vector<LlrDistribution> next_v2c(ne);
            for (int e = 0; e < ne; ++e) next_v2c[e] = vn_update(st.edges[e].first, st.edges[e].second);
            cur_v2c = std::move(next_v2c);
            for (int r = 0; r < base.m_b; ++r) cn_update_row(r);
        } else {
            for (int q = 0; q < base.m_b; ++q) {
                const int row = perm[q];
                for (int c : base.row_cols[row]) cur_v2c[st.edge_index.at({row, c})] = vn_update(row, c);
                cn_update_row(row);
            }
        }
        st.v2c.push_back(cur_v2c);
        st.c2v.push_back(cur_c2v);

        std::vector<LlrDistribution> av(base.m_b, LlrDistribution(quant)), ac(base.m_b, LlrDistribution(quant));
        for (int q = 0; q < base.m_b; ++q) {
            const int row = perm[q];
            const auto& cols = base.row_cols[row];
            for (int c : cols) {
                const int e = st.edge_index.at({row, c});
                for (int i = 0; i < av[q].size(); ++i) {
                    av[q].mass(i) += cur_v2c[e].mass(i) / cols.size();
                    ac[q].mass(i) += cur_c2v[e].mass(i) / cols.size();
                }
            }
        }
        st.avg_v2c.push_back(std::move(av));
        st.avg_c2v.push_back(std::move(ac));
    }
    return st;
}

// ---------------------------------------------------------------------------
// Gains and unsatisfied-CN statistics.
// ---------------------------------------------------------------------------

struct GainResult {
    double g_bar = 1.0;
    double p_inv = 0.0;
    double g_prime = 1.0;
};

/// Average gain, polarity-inversion probability, and the corrected gain
/// g' = (1 - P_inv) g of a virtual-VN message distribution.
inline GainResult gain_and_inversion(const LlrDistribution& psi_hat) {
    GainResult g;
    g.g_bar = psi_hat.tanh_half_mean();
    g.p_inv = psi_hat.negative_mass();
    g.g_prime = (1.0 - g.p_inv) * g.g_bar;
    return g;
}

/// Box-plus combination of the external VN->CN distributions of one
/// missatisfied CN (its virtual VN). An empty list is the box-plus identity:
/// a point mass at +s_max.
inline LlrDistribution virtual_vn_distribution(const std::vector<const LlrDistribution*>& externals,
                                               const QuantSpec& quant) {
    if (externals.empty()) return LlrDistribution::point_mass(quant, quant.s_max);
    auto table = BoxPlusTable::shared(quant);
    LlrDistribution acc = *externals[0];
    for (std::size_t k = 1; k < externals.size(); ++k) acc = conv_box_plus(acc, *externals[k], *table);
    return acc;
}

struct UnsatStats {
    double mean = 0.0;
    double variance = 0.0;
};

inline UnsatStats moments_of(const LlrDistribution& d) { return {d.mean(), d.variance()}; }

}  // namespace tsfloor
