#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tsfloor/code.hpp"
#include "tsfloor/util.hpp"

namespace tsfloor {

/// ln(1 + e^{-t}) for t >= 0; exactly 0 once e^{-t} vanishes in double.
inline double log1p_exp_neg(double t) { return t > 38.0 ? 0.0 : std::log1p(std::exp(-t)); }

/// Pairwise box-plus: sign(x1)sign(x2) min(|x1|,|x2|) + s(x1,x2), with the
/// correction term evaluated through log1p so large inputs cannot overflow.
inline double box_plus(double x1, double x2) {
    const double m = std::min(std::fabs(x1), std::fabs(x2));
    const double core = (x1 < 0.0) == (x2 < 0.0) ? m : -m;
    const double s = log1p_exp_neg(std::fabs(x1 + x2)) - log1p_exp_neg(std::fabs(x1 - x2));
    return core + s;
}

namespace detail {

/// Hermite-cubic table for ln(1 + e^{-t}) on [0, 38); absolute error below
/// 1e-10. The Monte Carlo decoder spends nearly all of its time in the two
/// correction terms, so this replaces exp/log1p in that hot path.
class CorrectionTable {
  public:
    CorrectionTable() {
        node_.resize(2 * (kN + 2));
        for (int i = 0; i <= kN + 1; ++i) {
            const double t = i * kDx;
            node_[2 * i] = std::log1p(std::exp(-t));
            node_[2 * i + 1] = -kDx / (1.0 + std::exp(t));  // f'(t) * dx
        }
    }

    double operator()(double t) const {
        if (t >= 38.0) return 0.0;
        const double x = t * (kN / 38.0);
        const int i = static_cast<int>(x);
        const double u = x - i;
        const double* n = &node_[2 * i];
        const double u2 = u * u, u3 = u2 * u;
        return n[0] * (2 * u3 - 3 * u2 + 1) + n[2] * (3 * u2 - 2 * u3) + n[1] * (u3 - 2 * u2 + u) +
               n[3] * (u3 - u2);
    }

  private:
    static constexpr int kN = 4096;
    static constexpr double kDx = 38.0 / kN;
    std::vector<double> node_;  // interleaved (f, f' dx) pairs
};

inline const CorrectionTable correction_table{};

}  // namespace detail

/// Table-accelerated box-plus used inside the decoder loops; agrees with
/// box_plus to better than 1e-9.
inline double box_plus_fast(double x1, double x2) {
    const double m = std::min(std::fabs(x1), std::fabs(x2));
    const double core = (x1 < 0.0) == (x2 < 0.0) ? m : -m;
    return core + detail::correction_table(std::fabs(x1 + x2)) - detail::correction_table(std::fabs(x1 - x2));
}

/// Min-sum check reduction of two messages.
inline double min_sum_pair(double x1, double x2) {
    const double m = std::min(std::fabs(x1), std::fabs(x2));
    return (x1 < 0.0) == (x2 < 0.0) ? m : -m;
}

enum class ScheduleKind { flooding, layered };
enum class CheckAlgorithm { spa, min_sum };

struct DecoderConfig {
    ScheduleKind schedule = ScheduleKind::layered;
    LayerPermutation layer_order;  // empty = identity
    int max_iterations = 30;
    double saturation_level = 31.75;
    CheckAlgorithm algorithm = CheckAlgorithm::spa;
    int stability_window = 5;  // error support identical over this many final iterations

    void validate() const {
        require(saturation_level > 0.0, "decoder: saturation level must be positive");
        require(max_iterations >= 1, "decoder: at least one iteration");
    }
};

struct DecodeResult {
    bool success = false;          // H d = 0 reached
    int iterations_used = 0;
    std::vector<uint8_t> hard_decision;
    std::vector<int> failed_vns;   // VNs decided 1 at exit (errors under all-zero tx)
    bool stable_support = false;   // support unchanged over the stability window
};

// Stored CN->VN messages are clipped to the saturation level after every
// update; total LLRs stay exact (their magnitude is bounded by
// |channel| + d_v * saturation anyway).

/// Row layered (or flooding) saturating box-plus SPA / min-sum decoder.
/// The graph topology is fixed at construction; decode() is cheap to call
/// many times. Instances are single-threaded; run one per worker.
class Decoder {
  public:
    Decoder(const ParityCheckMatrix& h, DecoderConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
        if (cfg_.layer_order.empty()) cfg_.layer_order = identity_permutation(h.m_b);
        require(static_cast<int>(cfg_.layer_order.size()) == h.m_b, "decoder: layer permutation length != m_b");
        n_ = h.n;
        m_ = h.m;
        p_ = h.p;
        m_b_ = h.m_b;
        cn_start_.assign(m_ + 1, 0);
        for (int j = 0; j < m_; ++j) cn_start_[j + 1] = cn_start_[j] + static_cast<int>(h.row_cols[j].size());
        edge_vn_.resize(cn_start_[m_]);
        for (int j = 0; j < m_; ++j)
            for (std::size_t k = 0; k < h.row_cols[j].size(); ++k) edge_vn_[cn_start_[j] + k] = h.row_cols[j][k];
        int max_dc = 0;
        for (int j = 0; j < m_; ++j) max_dc = std::max(max_dc, cn_start_[j + 1] - cn_start_[j]);
        require(max_dc <= 64, "decoder: CN degree above 64 unsupported");
        msg_.resize(edge_vn_.size());
        total_.resize(n_);
    }

    const DecoderConfig& config() const { return cfg_; }

    DecodeResult decode(const std::vector<double>& channel_llrs) {
        require(static_cast<int>(channel_llrs.size()) == n_, "decode: channel LLR length mismatch");
        for (int i = 0; i < n_; ++i) total_[i] = channel_llrs[i];
        std::fill(msg_.begin(), msg_.end(), 0.0);

        DecodeResult res;
        std::vector<std::vector<int>> tail_supports;
        for (int it = 1; it <= cfg_.max_iterations; ++it) {
            if (cfg_.schedule == ScheduleKind::layered)
                layered_iteration();
            else
                flooding_iteration(channel_llrs);
            res.iterations_used = it;

            std::vector<int> support;
            for (int i = 0; i < n_; ++i)
                if (total_[i] < 0.0) support.push_back(i);
            if (syndrome_zero(support)) {
                res.success = true;
                res.failed_vns = std::move(support);
                break;
            }
            tail_supports.push_back(std::move(support));
            if (static_cast<int>(tail_supports.size()) > cfg_.stability_window)
                tail_supports.erase(tail_supports.begin());
        }
        if (!res.success) {
            res.failed_vns = tail_supports.empty() ? std::vector<int>{} : tail_supports.back();
            res.stable_support = static_cast<int>(tail_supports.size()) == cfg_.stability_window;
            for (std::size_t k = 1; k + 0 < tail_supports.size() && res.stable_support; ++k)
                if (tail_supports[k] != tail_supports[0]) res.stable_support = false;
        }
        res.hard_decision.assign(n_, 0);
        for (int i = 0; i < n_; ++i) res.hard_decision[i] = total_[i] < 0.0 ? 1 : 0;
        return res;
    }

    /// Total LLRs after the last decode() (test hook).
    const std::vector<double>& totals() const { return total_; }
    /// CN->VN message storage, indexed per (CN, local edge) via edge_index().
    const std::vector<double>& messages() const { return msg_; }
    int edge_index(int cn, int local) const { return cn_start_[cn] + local; }

  private:
    static double clip(double x, double sat) { return x > sat ? sat : (x < -sat ? -sat : x); }

    template <bool kSpa>
    static void check_reduce(int deg, const double* in, double* out) {
        double fwd[64];
        fwd[0] = in[0];
        for (int k = 1; k < deg; ++k)
            fwd[k] = kSpa ? box_plus_fast(fwd[k - 1], in[k]) : min_sum_pair(fwd[k - 1], in[k]);
        double back = in[deg - 1];
        out[deg - 1] = fwd[deg - 2];
        for (int k = deg - 2; k >= 1; --k) {
            out[k] = kSpa ? box_plus_fast(fwd[k - 1], back) : min_sum_pair(fwd[k - 1], back);
            back = kSpa ? box_plus_fast(in[k], back) : min_sum_pair(in[k], back);
        }
        out[0] = back;
    }

    void check_update(int j, const double* in, double* out) {
        const int deg = cn_start_[j + 1] - cn_start_[j];
        if (deg == 1) {
            out[0] = 1e300;  // empty extrinsic product saturates; clipped by caller
            return;
        }
        if (cfg_.algorithm == CheckAlgorithm::spa)
            check_reduce<true>(deg, in, out);
        else
            check_reduce<false>(deg, in, out);
    }

    // Totals are kept unclipped: in the layered recursion they stay exactly
    // channel + sum of the (clipped) CN messages, so the extrinsic
    // subtraction in line 7 of the update never loses the excess. Clipping
    // them at the message bound makes the subtraction collapse to zero once
    // both rails saturate and the decoder falls apart.
    void layered_iteration() {
        const double sat = cfg_.saturation_level;
        double in[64], out[64];
        for (int slot = 0; slot < m_b_; ++slot) {
            const int row = cfg_.layer_order[slot];
            for (int j = row * p_; j < (row + 1) * p_; ++j) {
                const int b = cn_start_[j];
                const int deg = cn_start_[j + 1] - b;
                for (int k = 0; k < deg; ++k) in[k] = total_[edge_vn_[b + k]] - msg_[b + k];
                check_update(j, in, out);
                for (int k = 0; k < deg; ++k) {
                    const double m = clip(out[k], sat);
                    msg_[b + k] = m;
                    total_[edge_vn_[b + k]] = in[k] + m;
                }
            }
        }
    }

    void flooding_iteration(const std::vector<double>& channel_llrs) {
        const double sat = cfg_.saturation_level;
        double in[64], out[64];
        for (int j = 0; j < m_; ++j) {
            const int b = cn_start_[j];
            const int deg = cn_start_[j + 1] - b;
            for (int k = 0; k < deg; ++k) in[k] = total_[edge_vn_[b + k]] - msg_[b + k];
            check_update(j, in, out);
            for (int k = 0; k < deg; ++k) msg_[b + k] = clip(out[k], sat);
        }
        for (int i = 0; i < n_; ++i) total_[i] = channel_llrs[i];
        for (int j = 0; j < m_; ++j)
            for (int e = cn_start_[j]; e < cn_start_[j + 1]; ++e) total_[edge_vn_[e]] += msg_[e];
    }

    bool syndrome_zero(const std::vector<int>& ones) const {
        if (ones.empty()) return true;
        thread_local std::vector<uint8_t> mark;
        mark.assign(n_, 0);
        for (int v : ones) mark[v] = 1;
        for (int j = 0; j < m_; ++j) {
            int parity = 0;
            for (int e = cn_start_[j]; e < cn_start_[j + 1]; ++e) parity ^= mark[edge_vn_[e]];
            if (parity) return false;
        }
        return true;
    }

    DecoderConfig cfg_;
    int n_ = 0, m_ = 0, p_ = 1, m_b_ = 0;
    std::vector<int> cn_start_;
    std::vector<int> edge_vn_;
    std::vector<double> msg_;
    std::vector<double> total_;
};

}  // namespace tsfloor
